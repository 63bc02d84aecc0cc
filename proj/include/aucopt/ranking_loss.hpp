#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "aucopt/surrogate.hpp"

namespace aucopt {

/// A loss value with its gradient with respect to each input score.
struct LossGrad {
  double value = 0.0;
  std::vector<double> grad;
};

/// The max-violation pair of a batch: the lowest-scored positive against the
/// highest-scored negative. Ties go to the lowest index.
struct PairSelection {
  std::size_t pos_index = 0;
  std::size_t neg_index = 0;
  double margin = 0.0;  // score[pos_index] - score[neg_index]
};

/// The per-user loss is a sum over contributing sub-batches as written; Mean
/// divides by the number of contributing sub-batches instead.
enum class PdaomReduction { Sum, Mean };

PdaomReduction parse_pdaom_reduction(std::string_view name);  // "sum" | "mean"
std::string_view pdaom_reduction_name(PdaomReduction reduction);

/// How many user groups contributed a pair / lacked a class.
struct GroupLossStats {
  std::size_t contributing_groups = 0;
  std::size_t skipped_groups = 0;
};

/// Mean of phi(s_i+ - s_j-) over all positive/negative pairs, with exact
/// partial derivatives per score. O(m*n).
LossGrad pairwise_loss_full(std::span<const double> scores, std::span<const int> labels,
                            SurrogateKind kind);

/// One linear scan for argmin over positives and argmax over negatives.
PairSelection daom_select(std::span<const double> scores, std::span<const int> labels);

/// phi(margin) of the max-violation pair; the gradient touches exactly the
/// two selected scores (+phi' at the positive, -phi' at the negative).
LossGrad daom_loss(std::span<const double> scores, std::span<const int> labels,
                   SurrogateKind kind);

/// daom_loss summed over the batch's user-ID groups that hold both classes.
/// Groups lacking a class contribute nothing; a batch where no group
/// contributes yields value 0 with a zero gradient (stats report it), since
/// skewed labels make that routine under user-sorted batching.
LossGrad pdaom_loss(std::span<const double> scores, std::span<const int> labels,
                    std::span<const std::uint64_t> user_ids, SurrogateKind kind,
                    PdaomReduction reduction = PdaomReduction::Sum,
                    GroupLossStats* stats = nullptr);

/// Mean binary cross-entropy with scores clamped to [1e-7, 1 - 1e-7].
LossGrad cross_entropy(std::span<const double> scores, std::span<const int> labels);

/// cross_entropy + lambda * pdaom_loss. With lambda == 0 the per-user term is
/// never evaluated, so the result is bitwise identical to cross_entropy.
LossGrad combined_objective(std::span<const double> scores, std::span<const int> labels,
                            std::span<const std::uint64_t> user_ids, SurrogateKind kind,
                            double lambda, PdaomReduction reduction = PdaomReduction::Sum,
                            GroupLossStats* stats = nullptr);

}  // namespace aucopt
