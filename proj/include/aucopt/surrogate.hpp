#pragma once

#include <array>
#include <string_view>

namespace aucopt {

/// Pairwise surrogates for the ranking indicator 1(s+ > s-), evaluated on the
/// score difference t = s+ - s-. All four are non-negative and non-increasing
/// on [-1, 1], which is what the max-violation reduction relies on.
enum class SurrogateKind {
  PairwiseLogistic,     // log(1 + exp(-t))
  PairwiseHinge,        // max(0, 1 - t)
  PairwiseSquared,      // (1 - t)^2
  PairwiseExponential,  // exp(-t)
};

inline constexpr std::array<SurrogateKind, 4> kAllSurrogates = {
    SurrogateKind::PairwiseLogistic,
    SurrogateKind::PairwiseHinge,
    SurrogateKind::PairwiseSquared,
    SurrogateKind::PairwiseExponential,
};

/// phi(t). Throws DomainError for non-finite t.
double surrogate_value(SurrogateKind kind, double t);

/// dphi/dt. The hinge subgradient at the kink t=1 is 0 (the flat side).
double surrogate_grad(SurrogateKind kind, double t);

/// CLI names: "pll", "phl", "psl", "pel". Throws ConfigError on anything else.
SurrogateKind parse_surrogate(std::string_view name);
std::string_view surrogate_name(SurrogateKind kind);

}  // namespace aucopt
