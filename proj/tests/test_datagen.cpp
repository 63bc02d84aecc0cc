#include "aucopt/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <numeric>
#include <span>

#include "aucopt/errors.hpp"
#include "aucopt/metrics.hpp"
#include "aucopt/model.hpp"
#include "aucopt/ranking_loss.hpp"
#include "doctest.h"

using aucopt::GenConfig;
using aucopt::generate;
using aucopt::GeneratedLog;

namespace {

GenConfig small_config() {
  GenConfig config;
  config.n_users = 400;
  config.n_items = 200;
  config.n_impressions = 40000;
  config.seed = 5;
  return config;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  const GenConfig config = small_config();
  const GeneratedLog a = generate(config);
  const GeneratedLog b = generate(config);
  CHECK(a.data.user_ids == b.data.user_ids);
  CHECK(a.data.labels == b.data.labels);
  CHECK(a.data.features == b.data.features);
  CHECK(a.truth == b.truth);

  GenConfig other = config;
  other.seed = 6;
  CHECK(generate(other).data.labels != a.data.labels);
}

TEST_CASE("generated log has the documented shape") {
  const GenConfig config = small_config();
  const GeneratedLog log = generate(config);
  CHECK(log.data.dim == 2 * config.latent_dim + 1);
  CHECK(log.data.size() == config.n_impressions);
  CHECK(log.truth.size() == config.n_impressions);
  for (double p : log.truth) {
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
  for (std::uint64_t user : log.data.user_ids) CHECK(user < config.n_users);
}

TEST_CASE("a steep popularity exponent concentrates impressions on top items") {
  GenConfig config = small_config();
  config.popularity_exponent = 3.0;
  const GeneratedLog log = generate(config);
  // Item identity is recoverable from the popularity feature (last column):
  // count impressions per distinct value, then rank by share.
  std::map<double, std::size_t> by_item;
  for (std::size_t i = 0; i < log.data.size(); ++i) {
    ++by_item[log.data.feature_row(i)[2 * config.latent_dim]];
  }
  std::vector<std::size_t> counts;
  for (const auto& [bias, count] : by_item) counts.push_back(count);
  std::sort(counts.rbegin(), counts.rend());
  const std::size_t top = std::max<std::size_t>(1, config.n_items / 100);
  std::size_t top_share = 0;
  for (std::size_t r = 0; r < std::min(top, counts.size()); ++r) top_share += counts[r];
  CHECK(static_cast<double>(top_share) / static_cast<double>(log.data.size()) > 0.30);
}

TEST_CASE("item impression counts follow the configured power law") {
  GenConfig config = small_config();
  config.n_impressions = 200000;
  config.popularity_exponent = 2.0;
  const GeneratedLog log = generate(config);

  std::map<double, std::size_t> by_item;  // popularity feature is monotone in rank
  for (std::size_t i = 0; i < log.data.size(); ++i) {
    ++by_item[log.data.feature_row(i)[2 * config.latent_dim]];
  }
  // Higher popularity feature = lower rank; walk in descending feature order.
  std::vector<std::pair<double, std::size_t>> items(by_item.begin(), by_item.end());
  std::sort(items.rbegin(), items.rend());

  // Least-squares slope of log(count) on log(rank) over the well-sampled head.
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < std::min<std::size_t>(items.size(), 50); ++r) {
    if (items[r].second < 20) break;
    xs.push_back(std::log(static_cast<double>(r + 1)));
    ys.push_back(std::log(static_cast<double>(items[r].second)));
  }
  REQUIRE(xs.size() >= 10);
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(std::abs(slope - (-config.popularity_exponent)) <= 0.15);
}

TEST_CASE("intercept calibration hits the target positive rate") {
  for (const double target : {0.1, 0.25, 0.5}) {
    GenConfig config = small_config();
    config.target_positive_rate = target;
    const GeneratedLog log = generate(config);
    const double rate = std::accumulate(log.data.labels.begin(), log.data.labels.end(), 0.0) /
                        static_cast<double>(log.data.size());
    CHECK(std::abs(rate - target) / target <= 0.2);
  }
}

TEST_CASE("the true-probability scorer upper-bounds a trained model") {
  GenConfig config = small_config();
  config.n_impressions = 100000;
  const GeneratedLog log = generate(config);
  aucopt::LabeledScores truth_scored;
  truth_scored.scores = log.truth;
  truth_scored.labels = log.data.labels;
  const double bayes_auc = aucopt::auc_fast(truth_scored, aucopt::TieMode::HalfCredit);
  CHECK(bayes_auc > 0.5);

  // A briefly trained logistic model stays below the true-probability scorer.
  aucopt::ScorerParams params =
      aucopt::init_params(aucopt::ScorerConfig{log.data.dim, 0, 17, 0.1});
  auto opt = aucopt::make_optimizer(aucopt::OptimizerKind::Adam, 0.05, params.values.size());
  const std::size_t batch = 512;
  for (int epoch = 0; epoch < 3; ++epoch) {
    for (std::size_t at = 0; at + batch <= log.data.size(); at += batch) {
      const std::span<const double> x =
          std::span<const double>(log.data.features).subspan(at * log.data.dim, batch * log.data.dim);
      const std::span<const int> y = std::span<const int>(log.data.labels).subspan(at, batch);
      const auto cache = aucopt::forward_cached(params, x, batch);
      const auto loss = aucopt::cross_entropy(cache.scores, y);
      aucopt::optimizer_step(params, aucopt::backward(params, x, batch, cache, loss.grad), opt);
    }
  }
  aucopt::LabeledScores model_scored;
  model_scored.scores = aucopt::forward(params, log.data.features, log.data.size());
  model_scored.labels = log.data.labels;
  const double model_auc = aucopt::auc_fast(model_scored, aucopt::TieMode::HalfCredit);
  CHECK(model_auc <= bayes_auc + 0.01);
}

TEST_CASE("zero affinity removes the personalization signal but not the global one") {
  GenConfig config = small_config();
  config.user_affinity_scale = 0.0;
  const GeneratedLog log = generate(config);
  aucopt::LabeledScores scored;
  scored.scores = log.truth;
  scored.labels = log.data.labels;
  const aucopt::MetricReport report =
      aucopt::gauc(scored, log.data.user_ids, aucopt::TieMode::HalfCredit);
  CHECK(report.auc > 0.55);
  // With affinity on, the same scorer separates strictly better within users.
  GenConfig with_affinity = small_config();
  const GeneratedLog log2 = generate(with_affinity);
  aucopt::LabeledScores scored2;
  scored2.scores = log2.truth;
  scored2.labels = log2.data.labels;
  const aucopt::MetricReport report2 =
      aucopt::gauc(scored2, log2.data.user_ids, aucopt::TieMode::HalfCredit);
  CHECK(report2.gauc > report.gauc);
}

TEST_CASE("inconsistent generator configs are rejected") {
  GenConfig config = small_config();
  config.n_impressions = config.n_users - 1;
  CHECK_THROWS_AS(generate(config), aucopt::ConfigError);

  config = small_config();
  config.latent_dim = 0;
  CHECK_THROWS_AS(generate(config), aucopt::ConfigError);

  config = small_config();
  config.popularity_exponent = 0.0;
  CHECK_THROWS_AS(generate(config), aucopt::ConfigError);

  config = small_config();
  config.target_positive_rate = 1.0;
  CHECK_THROWS_AS(generate(config), aucopt::ConfigError);
}

TEST_CASE("truth sidecars round-trip") {
  const GeneratedLog log = generate(small_config());
  const auto path = std::filesystem::temp_directory_path() / "aucopt_truth.txt";
  aucopt::save_truth(log.truth, path);
  const std::vector<double> loaded = aucopt::load_truth(path);
  CHECK(loaded == log.truth);
  std::filesystem::remove(path);
}
