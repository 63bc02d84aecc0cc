#include "aucopt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>

#include "aucopt/detail/format.hpp"
#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

using detail::fmt_g17;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool has_both_classes(std::span<const int> labels) {
  bool pos = false, neg = false;
  for (int y : labels) {
    (y == 1 ? pos : neg) = true;
    if (pos && neg) return true;
  }
  return false;
}

SurrogateKind surrogate_for(const RunConfig& config) {
  switch (config.objective) {
    case Objective::CePel: return SurrogateKind::PairwiseExponential;
    case Objective::CePll: return SurrogateKind::PairwiseLogistic;
    case Objective::CePsl: return SurrogateKind::PairwiseSquared;
    default: return config.surrogate;
  }
}

void check_run_config(const RunConfig& config) {
  if (config.epochs < 1) throw ConfigError("epochs must be >= 1");
  if (config.batch_size < 2) throw ConfigError("batch_size must be >= 2");
  if (!(config.lambda >= 0.0) || !std::isfinite(config.lambda)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  if (config.out_dir.empty()) throw ConfigError("out_dir must be set");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

MetricReport dataset_report(const Dataset& data, std::span<const double> scores, TieMode ties) {
  LabeledScores ls;
  ls.scores.assign(scores.begin(), scores.end());
  ls.labels = data.labels;
  return gauc(ls, data.user_ids, ties);
}

}  // namespace

Objective parse_objective(std::string_view name) {
  if (name == "ce") return Objective::Ce;
  if (name == "ce+pel") return Objective::CePel;
  if (name == "ce+pll") return Objective::CePll;
  if (name == "ce+psl") return Objective::CePsl;
  if (name == "ce+daom") return Objective::CeDaom;
  if (name == "ce+pdaom") return Objective::CePdaom;
  throw ConfigError("unknown objective '" + std::string(name) +
                    "' (expected ce|ce+pel|ce+pll|ce+psl|ce+daom|ce+pdaom)");
}

std::string_view objective_name(Objective objective) {
  switch (objective) {
    case Objective::Ce: return "ce";
    case Objective::CePel: return "ce+pel";
    case Objective::CePll: return "ce+pll";
    case Objective::CePsl: return "ce+psl";
    case Objective::CeDaom: return "ce+daom";
    case Objective::CePdaom: return "ce+pdaom";
  }
  return "?";
}

LossGrad objective_loss(const RunConfig& config, std::span<const double> scores,
                        std::span<const int> labels, std::span<const std::uint64_t> user_ids,
                        GroupLossStats* stats) {
  GroupLossStats local;
  LossGrad out;
  switch (config.objective) {
    case Objective::Ce:
      out = cross_entropy(scores, labels);
      break;
    case Objective::CePdaom:
      out = combined_objective(scores, labels, user_ids, surrogate_for(config), config.lambda,
                               config.pdaom_reduction, &local);
      break;
    case Objective::CePel:
    case Objective::CePll:
    case Objective::CePsl:
    case Objective::CeDaom: {
      out = cross_entropy(scores, labels);
      if (config.lambda == 0.0) break;
      if (!has_both_classes(labels)) {
        // A one-class batch has no pair; the ranking term contributes nothing.
        local.skipped_groups = 1;
        break;
      }
      const LossGrad term = config.objective == Objective::CeDaom
                                ? daom_loss(scores, labels, surrogate_for(config))
                                : pairwise_loss_full(scores, labels, surrogate_for(config));
      if (config.objective == Objective::CeDaom) local.contributing_groups = 1;
      out.value += config.lambda * term.value;
      for (std::size_t i = 0; i < out.grad.size(); ++i) {
        out.grad[i] += config.lambda * term.grad[i];
      }
      break;
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

TrainResult cmd_train(const RunConfig& config) {
  check_run_config(config);
  const Dataset train_raw = load_dataset(config.train_path);
  const Dataset val = load_dataset(config.val_path);
  if (train_raw.dim != val.dim) {
    throw ContractError("train/val feature dimensions differ");
  }
  if (train_raw.size() < config.batch_size) {
    throw ConfigError("training set is smaller than one batch");
  }

  const Dataset train_sorted = sort_by_user(train_raw);
  ScorerConfig scorer_config{train_sorted.dim, config.hidden_dim, config.seed, config.init_scale};
  TrainResult result;
  result.params = init_params(scorer_config);
  OptimizerState opt = make_optimizer(config.optimizer, config.learning_rate,
                                      result.params.values.size(), config.weight_decay);

  std::filesystem::create_directories(config.out_dir);
  result.log_path = config.out_dir / "training_log.csv";
  result.checkpoint_path = config.out_dir / "checkpoint.txt";
  std::ofstream log = open_out(result.log_path);
  log << "row,epoch,step,loss,pair_terms,val_auc,val_gauc,loss_down_auc_down\n";

  std::size_t global_step = 0;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const Dataset epoch_data = shuffle_by_user(train_sorted, mix_seed(config.seed, epoch));
    const std::vector<BatchRange> batches = make_batches(epoch_data, config.batch_size);
    double loss_sum = 0.0;

    for (const BatchRange& batch : batches) {
      ++global_step;
      const std::size_t n = batch.size();
      const std::span<const double> features =
          std::span<const double>(epoch_data.features)
              .subspan(batch.begin * epoch_data.dim, n * epoch_data.dim);
      const std::span<const int> labels = std::span<const int>(epoch_data.labels).subspan(batch.begin, n);
      const std::span<const std::uint64_t> users =
          std::span<const std::uint64_t>(epoch_data.user_ids).subspan(batch.begin, n);

      const ForwardCache cache = forward_cached(result.params, features, n);
      GroupLossStats stats;
      const LossGrad loss = objective_loss(config, cache.scores, labels, users, &stats);
      if (!std::isfinite(loss.value)) {
        throw NumericError("non-finite loss at step " + std::to_string(global_step) +
                           " (epoch " + std::to_string(epoch) + "); training aborted");
      }
      const std::vector<double> grads = backward(result.params, features, n, cache, loss.grad);
      optimizer_step(result.params, grads, opt);

      result.pair_terms_evaluated += stats.contributing_groups;
      loss_sum += loss.value;
      log << "step," << epoch << ',' << global_step << ',' << fmt_g17(loss.value) << ','
          << stats.contributing_groups << ",,,\n";
    }

    const std::vector<double> val_scores = forward(result.params, val.features, val.size());
    const MetricReport val_report = dataset_report(val, val_scores, config.tie_mode);
    EpochStat stat;
    stat.epoch = epoch;
    stat.train_loss = loss_sum / static_cast<double>(batches.size());
    stat.val_auc = val_report.auc;
    stat.val_gauc = val_report.gauc;
    if (!result.epoch_stats.empty()) {
      const EpochStat& prev = result.epoch_stats.back();
      stat.loss_down_auc_down = stat.train_loss < prev.train_loss && stat.val_auc < prev.val_auc;
    }
    result.epoch_stats.push_back(stat);
    log << "epoch," << epoch << ",," << fmt_g17(stat.train_loss) << ",," << fmt_g17(stat.val_auc)
        << ',' << fmt_g17(stat.val_gauc) << ',' << (stat.loss_down_auc_down ? 1 : 0) << '\n';
  }

  if (!log) throw IoError("write failed: " + result.log_path.string());
  log.close();
  save_checkpoint(result.params, result.checkpoint_path);
  return result;
}

std::vector<std::size_t> divergent_epochs(std::span<const EpochStat> stats) {
  std::vector<std::size_t> epochs;
  for (const EpochStat& stat : stats) {
    if (stat.loss_down_auc_down) epochs.push_back(stat.epoch);
  }
  return epochs;
}

EvalResult evaluate_scores(const Dataset& data, std::span<const double> scores, TieMode ties) {
  if (scores.size() != data.size()) {
    throw ContractError("score vector length must match the dataset");
  }
  EvalResult result;
  result.report = dataset_report(data, scores, ties);

  // Users ranked by impression count, split evenly; ties by user ID so the
  // halves are reproducible.
  std::unordered_map<std::uint64_t, std::size_t> counts;
  for (std::uint64_t user : data.user_ids) ++counts[user];
  std::vector<std::pair<std::uint64_t, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t active_users = (ranked.size() + 1) / 2;

  std::unordered_map<std::uint64_t, bool> is_active;
  is_active.reserve(ranked.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) is_active[ranked[r].first] = r < active_users;

  for (int half = 0; half < 2; ++half) {
    const bool want_active = half == 0;
    LabeledScores ls;
    std::vector<std::uint64_t> users;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (is_active[data.user_ids[i]] != want_active) continue;
      ls.scores.push_back(scores[i]);
      ls.labels.push_back(data.labels[i]);
      users.push_back(data.user_ids[i]);
    }
    ActivityHalfReport& out = want_active ? result.active : result.inactive;
    out.n_users = want_active ? active_users : ranked.size() - active_users;
    out.n_impressions = users.size();
    try {
      const MetricReport report = gauc(ls, users, ties);
      out.auc = report.auc;
      out.gauc = report.gauc;
    } catch (const UndefinedMetricError&) {
      out.auc = std::numeric_limits<double>::quiet_NaN();
      out.gauc = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

EvalResult cmd_eval(const std::filesystem::path& checkpoint_path,
                    const std::filesystem::path& data_path, TieMode ties,
                    const std::filesystem::path& out_dir) {
  const ScorerParams params = load_checkpoint(checkpoint_path);
  const Dataset data = load_dataset(data_path);
  if (data.dim != params.config.input_dim) {
    throw ContractError("checkpoint expects input_dim " +
                        std::to_string(params.config.input_dim) + ", dataset has " +
                        std::to_string(data.dim));
  }
  const std::vector<double> scores = forward(params, data.features, data.size());
  const EvalResult result = evaluate_scores(data, scores, ties);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out = open_out(out_dir / "metrics.csv");
    out << metric_report_csv_header() << '\n' << metric_report_csv_row(result.report) << '\n';
  }
  {
    std::ofstream out = open_out(out_dir / "groups.csv");
    write_group_detail_csv(out, result.report);
  }
  {
    std::ofstream out = open_out(out_dir / "activity_split.csv");
    out << "half,auc,gauc,n_users,n_impressions\n";
    const auto row = [&out](const char* name, const ActivityHalfReport& half) {
      out << name << ',' << fmt_g17(half.auc) << ',' << fmt_g17(half.gauc) << ',' << half.n_users
          << ',' << half.n_impressions << '\n';
    };
    row("active", result.active);
    row("inactive", result.inactive);
  }
  return result;
}

SplitPaths cmd_gen(const GenConfig& config, const std::filesystem::path& out_dir,
                   double val_fraction, double test_fraction) {
  if (val_fraction < 0.0 || test_fraction < 0.0 || val_fraction + test_fraction >= 1.0) {
    throw ConfigError("split fractions must be >= 0 and sum to < 1");
  }
  const GeneratedLog log = generate(config);

  std::vector<std::uint64_t> users;
  {
    std::unordered_map<std::uint64_t, bool> seen;
    for (std::uint64_t user : log.data.user_ids) {
      if (seen.emplace(user, true).second) users.push_back(user);
    }
  }
  std::sort(users.begin(), users.end());
  std::mt19937_64 rng(mix_seed(config.seed, 0x5911ULL));
  std::shuffle(users.begin(), users.end(), rng);

  const std::size_t n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(users.size())));
  const std::size_t n_val =
      static_cast<std::size_t>(std::llround(val_fraction * static_cast<double>(users.size())));
  // split id: 0 train, 1 val, 2 test
  std::unordered_map<std::uint64_t, int> split_of;
  for (std::size_t r = 0; r < users.size(); ++r) {
    split_of[users[r]] = r < n_test ? 2 : (r < n_test + n_val ? 1 : 0);
  }

  Dataset parts[3];
  std::vector<double> truths[3];
  for (int s = 0; s < 3; ++s) parts[s].dim = log.data.dim;
  for (std::size_t i = 0; i < log.data.size(); ++i) {
    const int s = split_of[log.data.user_ids[i]];
    parts[s].append(log.data.user_ids[i], log.data.labels[i], log.data.feature_row(i));
    truths[s].push_back(log.truth[i]);
  }

  std::filesystem::create_directories(out_dir);
  SplitPaths paths;
  paths.train_data = out_dir / "train.data";
  paths.train_truth = out_dir / "train.truth";
  paths.val_data = out_dir / "val.data";
  paths.val_truth = out_dir / "val.truth";
  paths.test_data = out_dir / "test.data";
  paths.test_truth = out_dir / "test.truth";
  save_dataset(parts[0], paths.train_data);
  save_truth(truths[0], paths.train_truth);
  save_dataset(parts[1], paths.val_data);
  save_truth(truths[1], paths.val_truth);
  save_dataset(parts[2], paths.test_data);
  save_truth(truths[2], paths.test_truth);
  return paths;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "batch_size") return SweepAxis::BatchSize;
  if (name == "lambda") return SweepAxis::Lambda;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected batch_size|lambda)");
}

std::string_view sweep_axis_name(SweepAxis axis) {
  return axis == SweepAxis::BatchSize ? "batch_size" : "lambda";
}

std::vector<SweepRow> cmd_sweep(const RunConfig& base, const SweepSpec& spec,
                                const std::filesystem::path& out_dir) {
  if (spec.values.empty() || spec.seeds.empty()) {
    throw ConfigError("sweep needs at least one value and one seed");
  }
  if (base.objective == Objective::Ce) {
    throw ConfigError("sweep objective must include a ranking term to compare against CE");
  }
  for (double v : spec.values) {
    if (spec.axis == SweepAxis::BatchSize) {
      if (!(v >= 2.0) || v != std::floor(v)) {
        throw ConfigError("batch_size sweep values must be integers >= 2");
      }
    } else if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("lambda sweep values must be finite and >= 0");
    }
  }

  std::filesystem::create_directories(out_dir);
  // CE baselines depend only on (batch_size, seed); reuse across values.
  std::map<std::pair<std::size_t, std::uint64_t>, std::pair<double, double>> baseline_cache;
  const auto baseline_metrics = [&](std::size_t batch_size, std::uint64_t seed) {
    const auto key = std::make_pair(batch_size, seed);
    auto it = baseline_cache.find(key);
    if (it != baseline_cache.end()) return it->second;
    RunConfig cfg = base;
    cfg.objective = Objective::Ce;
    cfg.batch_size = batch_size;
    cfg.seed = seed;
    cfg.out_dir = out_dir / ("baseline_b" + std::to_string(batch_size) + "_seed" + std::to_string(seed));
    const TrainResult trained = cmd_train(cfg);
    const EvalResult eval =
        cmd_eval(trained.checkpoint_path, base.test_path, base.tie_mode, cfg.out_dir / "eval");
    const auto metrics = std::make_pair(eval.report.auc, eval.report.gauc);
    baseline_cache.emplace(key, metrics);
    return metrics;
  };

  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    for (std::uint64_t seed : spec.seeds) {
      RunConfig cfg = base;
      cfg.seed = seed;
      if (spec.axis == SweepAxis::BatchSize) {
        cfg.batch_size = static_cast<std::size_t>(value);
      } else {
        cfg.lambda = value;
      }
      cfg.out_dir = out_dir / (std::string("run_") + std::string(sweep_axis_name(spec.axis)) +
                               "_" + fmt_g17(value) + "_seed" + std::to_string(seed));
      const TrainResult trained = cmd_train(cfg);
      const EvalResult eval =
          cmd_eval(trained.checkpoint_path, base.test_path, base.tie_mode, cfg.out_dir / "eval");
      const auto [base_auc, base_gauc] = baseline_metrics(cfg.batch_size, seed);

      SweepRow row;
      row.value = value;
      row.seed = seed;
      row.auc = eval.report.auc;
      row.gauc = eval.report.gauc;
      row.baseline_auc = base_auc;
      row.baseline_gauc = base_gauc;
      row.auc_delta = row.auc - base_auc;
      row.gauc_delta = row.gauc - base_gauc;
      rows.push_back(row);
    }
  }

  std::ofstream out = open_out(out_dir / "sweep.csv");
  out << "axis,value,seed,auc,gauc,baseline_auc,baseline_gauc,auc_delta,gauc_delta\n";
  for (const SweepRow& row : rows) {
    out << sweep_axis_name(spec.axis) << ',' << fmt_g17(row.value) << ',' << row.seed << ','
        << fmt_g17(row.auc) << ',' << fmt_g17(row.gauc) << ',' << fmt_g17(row.baseline_auc) << ','
        << fmt_g17(row.baseline_gauc) << ',' << fmt_g17(row.auc_delta) << ','
        << fmt_g17(row.gauc_delta) << '\n';
  }
  if (!out) throw IoError("write failed: " + (out_dir / "sweep.csv").string());
  return rows;
}

std::vector<ComparisonRow> compare_objectives(const RunConfig& base,
                                              std::span<const Objective> objectives,
                                              std::span<const std::uint64_t> seeds,
                                              const std::filesystem::path& out_dir) {
  if (objectives.empty() || seeds.empty()) {
    throw ConfigError("comparison needs at least one objective and one seed");
  }
  std::filesystem::create_directories(out_dir);
  std::vector<ComparisonRow> rows;
  for (const Objective objective : objectives) {
    for (const std::uint64_t seed : seeds) {
      RunConfig cfg = base;
      cfg.objective = objective;
      cfg.seed = seed;
      cfg.out_dir =
          out_dir / (std::string(objective_name(objective)) + "_seed" + std::to_string(seed));
      const TrainResult trained = cmd_train(cfg);
      const EvalResult eval =
          cmd_eval(trained.checkpoint_path, base.test_path, base.tie_mode, cfg.out_dir / "eval");
      rows.push_back(ComparisonRow{objective, seed, eval.report.auc, eval.report.gauc});
    }
  }

  std::ofstream out = open_out(out_dir / "comparison.csv");
  out << "objective,seed,test_auc,test_gauc\n";
  for (const ComparisonRow& row : rows) {
    out << objective_name(row.objective) << ',' << row.seed << ',' << fmt_g17(row.test_auc) << ','
        << fmt_g17(row.test_gauc) << '\n';
  }
  if (!out) throw IoError("write failed: " + (out_dir / "comparison.csv").string());
  return rows;
}

double mean_metric(std::span<const ComparisonRow> rows, Objective objective, bool gauc_metric) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const ComparisonRow& row : rows) {
    if (row.objective != objective) continue;
    sum += gauc_metric ? row.test_gauc : row.test_auc;
    ++count;
  }
  if (count == 0) throw ContractError("no rows for the requested objective");
  return sum / static_cast<double>(count);
}

double paired_sign_test_p(std::span<const double> deltas) {
  std::size_t wins = 0, informative = 0;
  for (double d : deltas) {
    if (d == 0.0) continue;
    ++informative;
    if (d > 0.0) ++wins;
  }
  if (informative == 0) return 1.0;
  double p = 0.0;
  for (std::size_t k = wins; k <= informative; ++k) {
    const double log_choose = std::lgamma(static_cast<double>(informative) + 1.0) -
                              std::lgamma(static_cast<double>(k) + 1.0) -
                              std::lgamma(static_cast<double>(informative - k) + 1.0);
    p += std::exp(log_choose - static_cast<double>(informative) * std::log(2.0));
  }
  return std::min(p, 1.0);
}

}  // namespace aucopt
