#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace aucopt {

/// hidden_dim == 0 is plain logistic regression; otherwise one tanh hidden
/// layer of that width, sigmoid output either way.
struct ScorerConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
};

/// Flattened parameters. Logistic layout: [w (d) | b]. MLP layout:
/// [W1 (h x d, row-major) | b1 (h) | w2 (h) | b2].
struct ScorerParams {
  ScorerConfig config;
  std::vector<double> values;
};

std::size_t param_count(const ScorerConfig& config);

/// Weights uniform in [-init_scale, init_scale] from the seeded generator,
/// biases zero.
ScorerParams init_params(const ScorerConfig& config);

/// Scores for a row-major batch (n x input_dim), each strictly inside (0,1).
std::vector<double> forward(const ScorerParams& params, std::span<const double> features,
                            std::size_t n);

/// Forward pass keeping the hidden activations the backward pass needs.
struct ForwardCache {
  std::vector<double> hidden;  // n x hidden_dim tanh outputs (empty for logistic)
  std::vector<double> scores;  // n
};
ForwardCache forward_cached(const ScorerParams& params, std::span<const double> features,
                            std::size_t n);

/// Chain rule from dL/dscore back to a flattened parameter gradient.
std::vector<double> backward(const ScorerParams& params, std::span<const double> features,
                             std::size_t n, const ForwardCache& cache,
                             std::span<const double> dloss_dscore);

enum class OptimizerKind { Sgd, Adam };

OptimizerKind parse_optimizer(std::string_view name);  // "sgd" | "adam"
std::string_view optimizer_name(OptimizerKind kind);

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 0.01;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<double> first_moment;   // Adam only
  std::vector<double> second_moment;  // Adam only
};

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, std::size_t n_params,
                              double weight_decay = 0.0);

/// One parameter update in place. Non-finite gradients abort with
/// NumericError naming the step.
void optimizer_step(ScorerParams& params, std::span<const double> grads, OptimizerState& state);

/// Versioned text checkpoint of config + flattened parameters; values are
/// written with enough digits to reload bit-exactly.
void save_checkpoint(const ScorerParams& params, const std::filesystem::path& path);
ScorerParams load_checkpoint(const std::filesystem::path& path);

}  // namespace aucopt
