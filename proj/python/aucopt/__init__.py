"""Direct AUC/GAUC optimization for bipartite ranking.

Thin wrapper over the C++ core: pairwise surrogate losses, batch and
per-user max-violation losses, exact WMW AUC/GAUC metrics, a synthetic
long-tail click-log generator and the training harness.
"""

from ._core import (
    GenConfig,
    RunConfig,
    auc,
    auc_bruteforce,
    combined_objective,
    cross_entropy,
    daom_loss,
    daom_select,
    evaluate,
    gauc,
    generate,
    pairwise_loss,
    pdaom_loss,
    surrogate_grad,
    surrogate_value,
    train,
)
from ._core import __version__

__all__ = [
    "GenConfig",
    "RunConfig",
    "auc",
    "auc_bruteforce",
    "combined_objective",
    "cross_entropy",
    "daom_loss",
    "daom_select",
    "evaluate",
    "gauc",
    "generate",
    "pairwise_loss",
    "pdaom_loss",
    "surrogate_grad",
    "surrogate_value",
    "train",
    "__version__",
]
