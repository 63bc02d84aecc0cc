#include "aucopt/ranking_loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

constexpr double kCeClamp = 1e-7;

void validate_pair_input(std::span<const double> scores, std::span<const int> labels,
                         bool require_unit_range) {
  if (scores.size() != labels.size()) {
    throw ContractError("scores and labels must have the same length");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw DomainError("score must be finite");
    if (require_unit_range && (s < 0.0 || s > 1.0)) {
      throw DomainError("score out of [0,1]: " + std::to_string(s));
    }
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw DomainError("label must be 0 or 1");
  }
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

PdaomReduction parse_pdaom_reduction(std::string_view name) {
  if (name == "sum") return PdaomReduction::Sum;
  if (name == "mean") return PdaomReduction::Mean;
  throw ConfigError("unknown reduction '" + std::string(name) + "' (expected sum|mean)");
}

std::string_view pdaom_reduction_name(PdaomReduction reduction) {
  return reduction == PdaomReduction::Sum ? "sum" : "mean";
}

LossGrad pairwise_loss_full(std::span<const double> scores, std::span<const int> labels,
                            SurrogateKind kind) {
  validate_pair_input(scores, labels, /*require_unit_range=*/true);
  std::size_t m = 0, n = 0;
  for (int y : labels) (y == 1 ? m : n) += 1;
  if (m == 0 || n == 0) {
    throw EmptyClassError("pairwise loss needs both a positive and a negative sample");
  }

  LossGrad out;
  out.grad.assign(scores.size(), 0.0);
  const double inv_pairs = 1.0 / (static_cast<double>(m) * static_cast<double>(n));
  KahanSum value;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      const double t = scores[i] - scores[j];
      value.add(surrogate_value(kind, t));
      const double g = surrogate_grad(kind, t) * inv_pairs;
      out.grad[i] += g;
      out.grad[j] -= g;
    }
  }
  out.value = value.sum * inv_pairs;
  return out;
}

PairSelection daom_select(std::span<const double> scores, std::span<const int> labels) {
  validate_pair_input(scores, labels, /*require_unit_range=*/false);
  bool have_pos = false, have_neg = false;
  PairSelection sel;
  double min_pos = 0.0, max_neg = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 1) {
      if (!have_pos || scores[i] < min_pos) {
        min_pos = scores[i];
        sel.pos_index = i;
        have_pos = true;
      }
    } else {
      if (!have_neg || scores[i] > max_neg) {
        max_neg = scores[i];
        sel.neg_index = i;
        have_neg = true;
      }
    }
  }
  if (!have_pos || !have_neg) {
    throw EmptyClassError("max-violation pair needs both a positive and a negative sample");
  }
  sel.margin = min_pos - max_neg;
  return sel;
}

LossGrad daom_loss(std::span<const double> scores, std::span<const int> labels,
                   SurrogateKind kind) {
  validate_pair_input(scores, labels, /*require_unit_range=*/true);
  const PairSelection sel = daom_select(scores, labels);
  LossGrad out;
  out.value = surrogate_value(kind, sel.margin);
  out.grad.assign(scores.size(), 0.0);
  const double g = surrogate_grad(kind, sel.margin);
  out.grad[sel.pos_index] += g;
  out.grad[sel.neg_index] -= g;
  return out;
}

LossGrad pdaom_loss(std::span<const double> scores, std::span<const int> labels,
                    std::span<const std::uint64_t> user_ids, SurrogateKind kind,
                    PdaomReduction reduction, GroupLossStats* stats) {
  validate_pair_input(scores, labels, /*require_unit_range=*/true);
  if (user_ids.size() != scores.size()) {
    throw ContractError("user_ids length must match scores length");
  }

  // Index buckets per user, visited in first-appearance order so the
  // accumulated value does not depend on hash layout.
  std::unordered_map<std::uint64_t, std::size_t> slot_of;
  std::vector<std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < user_ids.size(); ++i) {
    auto [it, inserted] = slot_of.try_emplace(user_ids[i], buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(i);
  }

  LossGrad out;
  out.grad.assign(scores.size(), 0.0);
  GroupLossStats local;
  KahanSum value;
  for (const auto& indices : buckets) {
    bool have_pos = false, have_neg = false;
    std::size_t pos_at = 0, neg_at = 0;
    double min_pos = 0.0, max_neg = 0.0;
    for (std::size_t i : indices) {
      if (labels[i] == 1) {
        if (!have_pos || scores[i] < min_pos) {
          min_pos = scores[i];
          pos_at = i;
          have_pos = true;
        }
      } else {
        if (!have_neg || scores[i] > max_neg) {
          max_neg = scores[i];
          neg_at = i;
          have_neg = true;
        }
      }
    }
    if (!have_pos || !have_neg) {
      ++local.skipped_groups;
      continue;
    }
    ++local.contributing_groups;
    const double margin = min_pos - max_neg;
    value.add(surrogate_value(kind, margin));
    const double g = surrogate_grad(kind, margin);
    out.grad[pos_at] += g;
    out.grad[neg_at] -= g;
  }

  out.value = value.sum;
  if (reduction == PdaomReduction::Mean && local.contributing_groups > 0) {
    const double inv = 1.0 / static_cast<double>(local.contributing_groups);
    out.value *= inv;
    for (double& g : out.grad) g *= inv;
  }
  if (stats != nullptr) *stats = local;
  return out;
}

LossGrad cross_entropy(std::span<const double> scores, std::span<const int> labels) {
  validate_pair_input(scores, labels, /*require_unit_range=*/true);
  if (scores.empty()) throw ContractError("cross_entropy needs a non-empty batch");

  LossGrad out;
  out.grad.assign(scores.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(scores.size());
  KahanSum value;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double f = std::clamp(scores[i], kCeClamp, 1.0 - kCeClamp);
    if (labels[i] == 1) {
      value.add(-std::log(f));
      out.grad[i] = -inv_n / f;
    } else {
      value.add(-std::log1p(-f));
      out.grad[i] = inv_n / (1.0 - f);
    }
  }
  out.value = value.sum * inv_n;
  return out;
}

LossGrad combined_objective(std::span<const double> scores, std::span<const int> labels,
                            std::span<const std::uint64_t> user_ids, SurrogateKind kind,
                            double lambda, PdaomReduction reduction, GroupLossStats* stats) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  LossGrad out = cross_entropy(scores, labels);
  if (lambda == 0.0) {
    if (stats != nullptr) *stats = GroupLossStats{};
    return out;
  }
  const LossGrad ranking = pdaom_loss(scores, labels, user_ids, kind, reduction, stats);
  out.value += lambda * ranking.value;
  for (std::size_t i = 0; i < out.grad.size(); ++i) {
    out.grad[i] += lambda * ranking.grad[i];
  }
  return out;
}

}  // namespace aucopt
