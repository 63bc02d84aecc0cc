#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "aucopt/batching.hpp"
#include "aucopt/datagen.hpp"
#include "aucopt/metrics.hpp"
#include "aucopt/model.hpp"
#include "aucopt/ranking_loss.hpp"

namespace aucopt {

/// Training objectives: plain cross-entropy, CE plus a full pairwise
/// surrogate term, CE plus the batch-level max-violation term, or CE plus
/// the per-user max-violation term.
enum class Objective { Ce, CePel, CePll, CePsl, CeDaom, CePdaom };

Objective parse_objective(std::string_view name);  // "ce", "ce+pel", ..., "ce+pdaom"
std::string_view objective_name(Objective objective);

struct RunConfig {
  std::filesystem::path train_path;
  std::filesystem::path val_path;
  std::filesystem::path test_path;
  std::filesystem::path out_dir;
  Objective objective = Objective::Ce;
  SurrogateKind surrogate = SurrogateKind::PairwiseExponential;
  double lambda = 10.0;     // weight of the ranking term in the objective
  std::size_t batch_size = 384;
  std::size_t epochs = 15;
  double learning_rate = 0.02;
  std::uint64_t seed = 1;
  TieMode tie_mode = TieMode::HalfCredit;
  std::size_t hidden_dim = 16;
  double init_scale = 0.1;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double weight_decay = 0.0;
  PdaomReduction pdaom_reduction = PdaomReduction::Sum;
};

/// One batch of the configured objective. For the composite objectives a
/// batch (or user group) lacking one class contributes nothing to the
/// ranking term instead of failing, since skewed labels make that routine.
/// lambda == 0 short-circuits every ranking term, leaving exactly the CE
/// path. stats counts the max-violation pair terms actually evaluated.
LossGrad objective_loss(const RunConfig& config, std::span<const double> scores,
                        std::span<const int> labels, std::span<const std::uint64_t> user_ids,
                        GroupLossStats* stats = nullptr);

struct EpochStat {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_auc = 0.0;
  double val_gauc = 0.0;
  bool loss_down_auc_down = false;  // loss fell vs previous epoch while val AUC fell
};

struct TrainResult {
  ScorerParams params;
  std::vector<EpochStat> epoch_stats;
  std::size_t pair_terms_evaluated = 0;  // max-violation terms across the run
  std::filesystem::path checkpoint_path;
  std::filesystem::path log_path;
};

/// Epoch loop: user-sort, per-epoch user-block shuffle, fixed-size batches,
/// objective, backward, optimizer step. Emits training_log.csv (per-step
/// loss rows and per-epoch validation rows in one file) and checkpoint.txt
/// under config.out_dir.
TrainResult cmd_train(const RunConfig& config);

/// Epochs whose log row carries the loss-down/AUC-down flag.
std::vector<std::size_t> divergent_epochs(std::span<const EpochStat> stats);

struct ActivityHalfReport {
  double auc = 0.0;
  double gauc = 0.0;
  std::size_t n_users = 0;
  std::size_t n_impressions = 0;
};

struct EvalResult {
  MetricReport report;
  ActivityHalfReport active;    // top half of users by impression count
  ActivityHalfReport inactive;  // bottom half
};

/// Metrics plus the active/inactive user split for an arbitrary score
/// vector aligned with the dataset (model scores or the truth sidecar).
EvalResult evaluate_scores(const Dataset& data, std::span<const double> scores, TieMode ties);

/// Loads checkpoint + dataset, scores, and writes metrics.csv, groups.csv
/// and activity_split.csv under out_dir.
EvalResult cmd_eval(const std::filesystem::path& checkpoint_path,
                    const std::filesystem::path& data_path, TieMode ties,
                    const std::filesystem::path& out_dir);

struct SplitPaths {
  std::filesystem::path train_data, train_truth;
  std::filesystem::path val_data, val_truth;
  std::filesystem::path test_data, test_truth;
};

/// Generates a log and writes user-disjoint train/val/test splits (by user,
/// default 80/10/10) plus their truth sidecars under out_dir.
SplitPaths cmd_gen(const GenConfig& config, const std::filesystem::path& out_dir,
                   double val_fraction = 0.1, double test_fraction = 0.1);

enum class SweepAxis { BatchSize, Lambda };

SweepAxis parse_sweep_axis(std::string_view name);  // "batch_size" | "lambda"
std::string_view sweep_axis_name(SweepAxis axis);

struct SweepSpec {
  SweepAxis axis = SweepAxis::Lambda;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  double auc = 0.0, gauc = 0.0;
  double baseline_auc = 0.0, baseline_gauc = 0.0;
  double auc_delta = 0.0, gauc_delta = 0.0;
};

/// Trains the configured objective and a paired CE baseline per (value,
/// seed), evaluates on the test split, and writes baseline-subtracted
/// deltas to sweep.csv under out_dir. CE baselines are shared across values
/// that do not change them (the lambda axis).
std::vector<SweepRow> cmd_sweep(const RunConfig& base, const SweepSpec& spec,
                                const std::filesystem::path& out_dir);

struct ComparisonRow {
  Objective objective = Objective::Ce;
  std::uint64_t seed = 0;
  double test_auc = 0.0;
  double test_gauc = 0.0;
};

/// Paired-seed comparison: every objective is trained with the same seeds
/// (identical init and batch order), evaluated on the test split, and the
/// per-run rows are written to comparison.csv under out_dir.
std::vector<ComparisonRow> compare_objectives(const RunConfig& base,
                                              std::span<const Objective> objectives,
                                              std::span<const std::uint64_t> seeds,
                                              const std::filesystem::path& out_dir);

double mean_metric(std::span<const ComparisonRow> rows, Objective objective, bool gauc_metric);

/// One-sided paired sign test: P(Binomial(#nonzero, 1/2) >= #positive) for
/// the per-seed differences a - b. Ties are dropped.
double paired_sign_test_p(std::span<const double> deltas);

}  // namespace aucopt
