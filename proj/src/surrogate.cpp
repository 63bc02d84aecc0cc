#include "aucopt/surrogate.hpp"

#include <cmath>
#include <string>

#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

void check_finite(double t) {
  if (!std::isfinite(t)) {
    throw DomainError("surrogate argument must be finite, got " + std::to_string(t));
  }
}

}  // namespace

double surrogate_value(SurrogateKind kind, double t) {
  check_finite(t);
  switch (kind) {
    case SurrogateKind::PairwiseLogistic:
      // Branch-stable softplus(-t): never exponentiates a positive argument.
      return t >= 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
    case SurrogateKind::PairwiseHinge:
      return t < 1.0 ? 1.0 - t : 0.0;
    case SurrogateKind::PairwiseSquared:
      return (1.0 - t) * (1.0 - t);
    case SurrogateKind::PairwiseExponential:
      return std::exp(-t);
  }
  throw DomainError("unknown surrogate kind");
}

double surrogate_grad(SurrogateKind kind, double t) {
  check_finite(t);
  switch (kind) {
    case SurrogateKind::PairwiseLogistic: {
      // -sigmoid(-t), with the exponential always taken of a non-positive value.
      if (t >= 0.0) {
        const double e = std::exp(-t);
        return -e / (1.0 + e);
      }
      return -1.0 / (1.0 + std::exp(t));
    }
    case SurrogateKind::PairwiseHinge:
      return t < 1.0 ? -1.0 : 0.0;
    case SurrogateKind::PairwiseSquared:
      return -2.0 * (1.0 - t);
    case SurrogateKind::PairwiseExponential:
      return -std::exp(-t);
  }
  throw DomainError("unknown surrogate kind");
}

SurrogateKind parse_surrogate(std::string_view name) {
  if (name == "pll") return SurrogateKind::PairwiseLogistic;
  if (name == "phl") return SurrogateKind::PairwiseHinge;
  if (name == "psl") return SurrogateKind::PairwiseSquared;
  if (name == "pel") return SurrogateKind::PairwiseExponential;
  throw ConfigError("unknown surrogate '" + std::string(name) + "' (expected pll|phl|psl|pel)");
}

std::string_view surrogate_name(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::PairwiseLogistic: return "pll";
    case SurrogateKind::PairwiseHinge: return "phl";
    case SurrogateKind::PairwiseSquared: return "psl";
    case SurrogateKind::PairwiseExponential: return "pel";
  }
  return "?";
}

}  // namespace aucopt
