#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "aucopt/metrics.hpp"

namespace testutil {

// Independent finite-difference oracle: central difference with the step the
// checks are specified at.
inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-6) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double a, double b) {
  const double denom = std::max(std::abs(a), std::abs(b));
  if (denom < 1e-10) return std::abs(a - b);
  return std::abs(a - b) / denom;
}

// Scores drawn away from 0/1 so CE clamping and saturated sigmoids never
// interfere with difference quotients.
inline std::vector<double> random_scores(std::mt19937_64& rng, std::size_t n, double lo = 0.05,
                                         double hi = 0.95) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> scores(n);
  for (double& s : scores) s = dist(rng);
  return scores;
}

// Both classes guaranteed.
inline std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n,
                                      double positive_rate = 0.4) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::vector<int> labels(n);
  for (;;) {
    std::size_t pos = 0;
    for (int& y : labels) {
      y = dist(rng) < positive_rate ? 1 : 0;
      pos += static_cast<std::size_t>(y);
    }
    if (pos > 0 && pos < n) return labels;
  }
}

// Random metric instance with deliberate duplicate scores.
inline aucopt::LabeledScores random_instance(std::mt19937_64& rng, std::size_t max_n = 500) {
  std::uniform_int_distribution<std::size_t> size_dist(2, max_n);
  const std::size_t n = size_dist(rng);
  aucopt::LabeledScores data;
  data.labels = random_labels(rng, n);
  // Coarse grid injects ties; a few exact repeats on top.
  std::uniform_int_distribution<int> grid(0, 40);
  data.scores.resize(n);
  for (double& s : data.scores) s = grid(rng) / 40.0;
  return data;
}

inline std::vector<std::uint64_t> random_user_ids(std::mt19937_64& rng, std::size_t n,
                                                  std::uint64_t n_users) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n_users - 1);
  std::vector<std::uint64_t> ids(n);
  for (auto& id : ids) id = dist(rng);
  return ids;
}

}  // namespace testutil
