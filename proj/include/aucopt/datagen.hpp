#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "aucopt/batching.hpp"

namespace aucopt {

/// Synthetic recommendation log: item exposure follows a power law over item
/// rank, user activity follows its own power law, and the true click logit is
/// popularity bias + a per-user affinity term + noise.
struct GenConfig {
  std::size_t n_users = 2000;
  std::size_t n_items = 500;
  std::size_t n_impressions = 200000;
  std::size_t latent_dim = 4;
  double popularity_exponent = 2.0;   // exposure weight ~ rank^-exponent
  double user_affinity_scale = 3.0;   // weight of <user, item> in the logit
  double noise_scale = 0.3;           // stddev of the per-impression logit noise
  double popularity_bias_scale = 2.0; // weight of the popularity term in the logit
  double user_activity_exponent = 1.1;// per-user impression counts ~ rank^-exponent
  double target_positive_rate = 0.25; // intercept is calibrated to hit this
  std::uint64_t seed = 1;
};

/// Feature layout per impression: [user latent (k) | item latent (k) |
/// popularity bias], so input_dim = 2*latent_dim + 1.
struct GeneratedLog {
  Dataset data;
  std::vector<double> truth;  // true click probability per impression
};

GeneratedLog generate(const GenConfig& config);

/// Sidecar with one probability per line, aligned with the dataset's sample
/// lines.
void save_truth(std::span<const double> truth, const std::filesystem::path& path);
std::vector<double> load_truth(const std::filesystem::path& path);

}  // namespace aucopt
