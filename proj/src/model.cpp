#include "aucopt/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

// Keeps scores representable away from the exact 0/1 endpoints even when the
// logit saturates the sigmoid in double precision.
constexpr double kScoreFloor = 1e-12;

double sigmoid(double z) {
  const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::min(std::max(s, kScoreFloor), 1.0 - kScoreFloor);
}

void check_config(const ScorerConfig& config) {
  if (config.input_dim < 1) throw ConfigError("input_dim must be >= 1");
  if (!std::isfinite(config.init_scale) || config.init_scale < 0.0) {
    throw ConfigError("init_scale must be finite and >= 0");
  }
}

void check_batch(const ScorerParams& params, std::span<const double> features, std::size_t n) {
  if (features.size() != n * params.config.input_dim) {
    throw ContractError("feature buffer holds " + std::to_string(features.size()) +
                        " values, expected " + std::to_string(n * params.config.input_dim));
  }
  if (params.values.size() != param_count(params.config)) {
    throw ContractError("parameter vector does not match its config");
  }
}

}  // namespace

std::size_t param_count(const ScorerConfig& config) {
  const std::size_t d = config.input_dim;
  const std::size_t h = config.hidden_dim;
  return h == 0 ? d + 1 : h * d + h + h + 1;
}

ScorerParams init_params(const ScorerConfig& config) {
  check_config(config);
  ScorerParams params;
  params.config = config;
  params.values.assign(param_count(config), 0.0);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> uniform(-config.init_scale, config.init_scale);
  const std::size_t d = config.input_dim;
  const std::size_t h = config.hidden_dim;
  if (h == 0) {
    for (std::size_t i = 0; i < d; ++i) params.values[i] = uniform(rng);
  } else {
    for (std::size_t i = 0; i < h * d; ++i) params.values[i] = uniform(rng);
    for (std::size_t i = 0; i < h; ++i) params.values[h * d + h + i] = uniform(rng);
  }
  return params;
}

ForwardCache forward_cached(const ScorerParams& params, std::span<const double> features,
                            std::size_t n) {
  check_batch(params, features, n);
  const std::size_t d = params.config.input_dim;
  const std::size_t h = params.config.hidden_dim;
  const double* p = params.values.data();

  ForwardCache cache;
  cache.scores.resize(n);
  if (h == 0) {
    const double* w = p;
    const double b = p[d];
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = features.data() + i * d;
      double z = b;
      for (std::size_t k = 0; k < d; ++k) z += w[k] * x[k];
      cache.scores[i] = sigmoid(z);
    }
    return cache;
  }

  const double* w1 = p;            // h x d
  const double* b1 = p + h * d;    // h
  const double* w2 = b1 + h;       // h
  const double b2 = w2[h];
  cache.hidden.resize(n * h);
  for (std::size_t i = 0; i < n; ++i) {
    const double* x = features.data() + i * d;
    double* hid = cache.hidden.data() + i * h;
    double z2 = b2;
    for (std::size_t j = 0; j < h; ++j) {
      const double* row = w1 + j * d;
      double z = b1[j];
      for (std::size_t k = 0; k < d; ++k) z += row[k] * x[k];
      hid[j] = std::tanh(z);
      z2 += w2[j] * hid[j];
    }
    cache.scores[i] = sigmoid(z2);
  }
  return cache;
}

std::vector<double> forward(const ScorerParams& params, std::span<const double> features,
                            std::size_t n) {
  return forward_cached(params, features, n).scores;
}

std::vector<double> backward(const ScorerParams& params, std::span<const double> features,
                             std::size_t n, const ForwardCache& cache,
                             std::span<const double> dloss_dscore) {
  check_batch(params, features, n);
  if (dloss_dscore.size() != n || cache.scores.size() != n) {
    throw ContractError("dloss_dscore/cache length must equal the batch size");
  }
  const std::size_t d = params.config.input_dim;
  const std::size_t h = params.config.hidden_dim;
  std::vector<double> grads(params.values.size(), 0.0);

  if (h == 0) {
    double* gw = grads.data();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = cache.scores[i];
      const double dz = dloss_dscore[i] * s * (1.0 - s);
      const double* x = features.data() + i * d;
      for (std::size_t k = 0; k < d; ++k) gw[k] += dz * x[k];
      grads[d] += dz;
    }
    return grads;
  }

  if (cache.hidden.size() != n * h) {
    throw ContractError("forward cache does not match the batch");
  }
  const double* w1_end = params.values.data() + h * d;
  const double* w2 = w1_end + h;
  double* g_w1 = grads.data();
  double* g_b1 = grads.data() + h * d;
  double* g_w2 = g_b1 + h;
  double* g_b2 = g_w2 + h;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = cache.scores[i];
    const double dz2 = dloss_dscore[i] * s * (1.0 - s);
    const double* x = features.data() + i * d;
    const double* hid = cache.hidden.data() + i * h;
    *g_b2 += dz2;
    for (std::size_t j = 0; j < h; ++j) {
      g_w2[j] += dz2 * hid[j];
      const double dz1 = dz2 * w2[j] * (1.0 - hid[j] * hid[j]);
      g_b1[j] += dz1;
      double* row = g_w1 + j * d;
      for (std::size_t k = 0; k < d; ++k) row[k] += dz1 * x[k];
    }
  }
  return grads;
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "adam") return OptimizerKind::Adam;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (expected sgd|adam)");
}

std::string_view optimizer_name(OptimizerKind kind) {
  return kind == OptimizerKind::Sgd ? "sgd" : "adam";
}

OptimizerState make_optimizer(OptimizerKind kind, double learning_rate, std::size_t n_params,
                              double weight_decay) {
  if (!std::isfinite(learning_rate) || learning_rate < 0.0) {
    throw ConfigError("learning_rate must be finite and >= 0");
  }
  OptimizerState state;
  state.kind = kind;
  state.learning_rate = learning_rate;
  state.weight_decay = weight_decay;
  if (kind == OptimizerKind::Adam) {
    state.first_moment.assign(n_params, 0.0);
    state.second_moment.assign(n_params, 0.0);
  }
  return state;
}

void optimizer_step(ScorerParams& params, std::span<const double> grads, OptimizerState& state) {
  if (grads.size() != params.values.size()) {
    throw ContractError("gradient length does not match parameter count");
  }
  for (double g : grads) {
    if (!std::isfinite(g)) {
      throw NumericError("non-finite gradient at optimizer step " +
                         std::to_string(state.step_count + 1) + "; training aborted");
    }
  }
  ++state.step_count;
  const double lr = state.learning_rate;

  if (state.kind == OptimizerKind::Sgd) {
    for (std::size_t i = 0; i < grads.size(); ++i) {
      const double g = grads[i] + state.weight_decay * params.values[i];
      params.values[i] -= lr * g;
    }
    return;
  }

  if (state.first_moment.size() != grads.size()) {
    throw ContractError("optimizer state does not match parameter count");
  }
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t i = 0; i < grads.size(); ++i) {
    const double g = grads[i] + state.weight_decay * params.values[i];
    state.first_moment[i] = state.beta1 * state.first_moment[i] + (1.0 - state.beta1) * g;
    state.second_moment[i] = state.beta2 * state.second_moment[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.first_moment[i] / bc1;
    const double v_hat = state.second_moment[i] / bc2;
    params.values[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
}

void save_checkpoint(const ScorerParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  char buf[40];
  out << "aucopt_checkpoint_v1\n";
  out << "input_dim " << params.config.input_dim << '\n';
  out << "hidden_dim " << params.config.hidden_dim << '\n';
  out << "seed " << params.config.seed << '\n';
  std::snprintf(buf, sizeof(buf), "%.17g", params.config.init_scale);
  out << "init_scale " << buf << '\n';
  out << "params " << params.values.size() << '\n';
  for (double v : params.values) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ScorerParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string magic;
  if (!std::getline(in, magic) || magic != "aucopt_checkpoint_v1") {
    throw IoError("not an aucopt_checkpoint_v1 file: " + path.string());
  }
  ScorerParams params;
  std::size_t n_values = 0;
  std::string key;
  for (;;) {
    if (!(in >> key)) throw IoError("truncated checkpoint header: " + path.string());
    if (key == "input_dim") {
      in >> params.config.input_dim;
    } else if (key == "hidden_dim") {
      in >> params.config.hidden_dim;
    } else if (key == "seed") {
      in >> params.config.seed;
    } else if (key == "init_scale") {
      in >> params.config.init_scale;
    } else if (key == "params") {
      in >> n_values;
      break;
    } else {
      throw IoError("unknown checkpoint field '" + key + "': " + path.string());
    }
    if (!in) throw IoError("bad checkpoint header value: " + path.string());
  }
  if (!in || n_values != param_count(params.config)) {
    throw IoError("checkpoint parameter count does not match its config: " + path.string());
  }
  params.values.resize(n_values);
  for (std::size_t i = 0; i < n_values; ++i) {
    if (!(in >> params.values[i])) {
      throw IoError("truncated checkpoint values: " + path.string());
    }
  }
  return params;
}

}  // namespace aucopt
