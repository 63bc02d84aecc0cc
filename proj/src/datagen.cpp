#include "aucopt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

void check_config(const GenConfig& config) {
  if (config.n_users < 1 || config.n_items < 1) {
    throw ConfigError("n_users and n_items must be >= 1");
  }
  if (config.n_impressions < config.n_users) {
    throw ConfigError("n_impressions must be >= n_users");
  }
  if (config.latent_dim < 1) throw ConfigError("latent_dim must be >= 1");
  if (!(config.popularity_exponent > 0.0)) {
    throw ConfigError("popularity_exponent must be > 0");
  }
  if (config.user_activity_exponent < 0.0) {
    throw ConfigError("user_activity_exponent must be >= 0");
  }
  if (config.noise_scale < 0.0) throw ConfigError("noise_scale must be >= 0");
  if (!(config.target_positive_rate > 0.0) || !(config.target_positive_rate < 1.0)) {
    throw ConfigError("target_positive_rate must be in (0,1)");
  }
}

std::vector<double> power_law_cdf(std::size_t n, double exponent) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -exponent);
    cdf[r] = acc;
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, double u) {
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

double sigmoid(double z) {
  return z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

// Bisection for the intercept that puts the mean click probability on target.
double calibrate_intercept(const std::vector<double>& raw_logits, double target) {
  double lo = -40.0, hi = 40.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double mean = 0.0;
    for (double z : raw_logits) mean += sigmoid(z + mid);
    mean /= static_cast<double>(raw_logits.size());
    if (mean < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GeneratedLog generate(const GenConfig& config) {
  check_config(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  const std::size_t k = config.latent_dim;
  std::vector<double> user_latent(config.n_users * k);
  for (double& v : user_latent) v = gauss(rng);
  std::vector<double> item_latent(config.n_items * k);
  for (double& v : item_latent) v = gauss(rng);

  // Item rank r gets exposure weight r^-a and a popularity bias that falls
  // with log rank, spanning roughly [-scale, +scale].
  std::vector<double> pop_bias(config.n_items);
  const double log_span = std::log(static_cast<double>(config.n_items) + 1.0);
  for (std::size_t r = 0; r < config.n_items; ++r) {
    pop_bias[r] =
        config.popularity_bias_scale * (1.0 - 2.0 * std::log(static_cast<double>(r + 1)) / log_span);
  }

  const std::vector<double> item_cdf = power_law_cdf(config.n_items, config.popularity_exponent);
  const std::vector<double> user_cdf = power_law_cdf(config.n_users, config.user_activity_exponent);
  const double affinity = config.user_affinity_scale / std::sqrt(static_cast<double>(k));

  std::vector<std::size_t> imp_user(config.n_impressions);
  std::vector<std::size_t> imp_item(config.n_impressions);
  std::vector<double> raw_logit(config.n_impressions);
  for (std::size_t i = 0; i < config.n_impressions; ++i) {
    const std::size_t u = sample_cdf(user_cdf, uniform(rng));
    const std::size_t it = sample_cdf(item_cdf, uniform(rng));
    const double noise = config.noise_scale > 0.0 ? config.noise_scale * gauss(rng) : 0.0;
    double dot = 0.0;
    for (std::size_t c = 0; c < k; ++c) dot += user_latent[u * k + c] * item_latent[it * k + c];
    imp_user[i] = u;
    imp_item[i] = it;
    raw_logit[i] = pop_bias[it] + affinity * dot + noise;
  }

  const double intercept = calibrate_intercept(raw_logit, config.target_positive_rate);

  GeneratedLog log;
  log.data.dim = 2 * k + 1;
  log.truth.resize(config.n_impressions);
  std::vector<double> row(log.data.dim);
  for (std::size_t i = 0; i < config.n_impressions; ++i) {
    const double p = sigmoid(raw_logit[i] + intercept);
    log.truth[i] = p;
    const int label = uniform(rng) < p ? 1 : 0;
    const std::size_t u = imp_user[i];
    const std::size_t it = imp_item[i];
    for (std::size_t c = 0; c < k; ++c) row[c] = user_latent[u * k + c];
    for (std::size_t c = 0; c < k; ++c) row[k + c] = item_latent[it * k + c];
    row[2 * k] = pop_bias[it];
    log.data.append(static_cast<std::uint64_t>(u), label, row);
  }
  return log;
}

void save_truth(std::span<const double> truth, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  char buf[40];
  for (double p : truth) {
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    out << buf << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<double> load_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<double> truth;
  double v = 0.0;
  while (in >> v) truth.push_back(v);
  if (!in.eof()) throw IoError("bad value in truth file: " + path.string());
  return truth;
}

}  // namespace aucopt
