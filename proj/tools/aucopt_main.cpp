#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aucopt/harness.hpp"

namespace {

struct GenCli {
  aucopt::GenConfig config;
  std::string out_dir;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
};

struct TrainCli {
  aucopt::RunConfig config;
  std::string train, val, test, out;
  std::string objective = "ce";
  std::string surrogate = "pel";
  std::string tie_mode = "half";
  std::string optimizer = "adam";
  std::string reduction = "sum";

  void resolve() {
    config.train_path = train;
    config.val_path = val;
    config.test_path = test;
    config.out_dir = out;
    config.objective = aucopt::parse_objective(objective);
    config.surrogate = aucopt::parse_surrogate(surrogate);
    config.tie_mode = aucopt::parse_tie_mode(tie_mode);
    config.optimizer = aucopt::parse_optimizer(optimizer);
    config.pdaom_reduction = aucopt::parse_pdaom_reduction(reduction);
  }
};

void add_train_options(CLI::App& cmd, TrainCli& cli, bool need_test) {
  cmd.add_option("--train", cli.train, "training dataset file")->required();
  cmd.add_option("--val", cli.val, "validation dataset file")->required();
  auto* test = cmd.add_option("--test", cli.test, "test dataset file");
  if (need_test) test->required();
  cmd.add_option("--out", cli.out, "output directory")->required();
  cmd.add_option("--objective", cli.objective, "ce|ce+pel|ce+pll|ce+psl|ce+daom|ce+pdaom");
  cmd.add_option("--surrogate", cli.surrogate, "pll|phl|psl|pel (for daom/pdaom terms)");
  cmd.add_option("--lambda", cli.config.lambda, "weight of the ranking term");
  cmd.add_option("--batch-size", cli.config.batch_size, "mini-batch size");
  cmd.add_option("--epochs", cli.config.epochs, "training epochs");
  cmd.add_option("--lr", cli.config.learning_rate, "learning rate");
  cmd.add_option("--seed", cli.config.seed, "master seed (init + batch order)");
  cmd.add_option("--tie-mode", cli.tie_mode, "strict|half (metric tie credit)");
  cmd.add_option("--hidden-dim", cli.config.hidden_dim, "0 = logistic, else MLP width");
  cmd.add_option("--init-scale", cli.config.init_scale, "uniform init range");
  cmd.add_option("--optimizer", cli.optimizer, "sgd|adam");
  cmd.add_option("--weight-decay", cli.config.weight_decay, "L2 coefficient");
  cmd.add_option("--pdaom-reduction", cli.reduction, "sum|mean over user groups");
  cmd.set_config("--config", "", "key=value config file; command line overrides");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Direct AUC/GAUC optimization workbench: synthetic long-tail click logs, "
               "pairwise/max-violation ranking objectives, metric reports and sweeps."};
  app.require_subcommand(1);

  GenCli gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic click log (80/10/10 user split)");
  gen_cmd->add_option("--out", gen.out_dir, "output directory")->required();
  gen_cmd->add_option("--users", gen.config.n_users, "number of users");
  gen_cmd->add_option("--items", gen.config.n_items, "number of items");
  gen_cmd->add_option("--impressions", gen.config.n_impressions, "number of impressions");
  gen_cmd->add_option("--latent-dim", gen.config.latent_dim, "latent dimension");
  gen_cmd->add_option("--pop-exponent", gen.config.popularity_exponent, "item exposure power law");
  gen_cmd->add_option("--affinity", gen.config.user_affinity_scale, "user-item affinity weight");
  gen_cmd->add_option("--noise", gen.config.noise_scale, "logit noise stddev");
  gen_cmd->add_option("--pop-bias", gen.config.popularity_bias_scale, "popularity logit weight");
  gen_cmd->add_option("--activity-exponent", gen.config.user_activity_exponent,
                      "user activity power law (0 = uniform)");
  gen_cmd->add_option("--positive-rate", gen.config.target_positive_rate,
                      "calibrated mean click rate");
  gen_cmd->add_option("--seed", gen.config.seed, "generator seed");
  gen_cmd->add_option("--val-frac", gen.val_fraction, "validation user fraction");
  gen_cmd->add_option("--test-frac", gen.test_fraction, "test user fraction");
  gen_cmd->set_config("--config", "", "key=value config file; command line overrides");

  TrainCli train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a scorer with the chosen objective");
  add_train_options(*train_cmd, train, /*need_test=*/false);

  struct {
    std::string checkpoint, data, out;
    std::string tie_mode = "half";
  } eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--data", eval.data, "dataset file")->required();
  eval_cmd->add_option("--out", eval.out, "output directory")->required();
  eval_cmd->add_option("--tie-mode", eval.tie_mode, "strict|half");
  eval_cmd->set_config("--config", "", "key=value config file; command line overrides");

  TrainCli sweep;
  sweep.objective = "ce+pdaom";
  std::string sweep_axis = "lambda";
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> sweep_seeds;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "train over a parameter grid and report deltas vs the CE baseline");
  add_train_options(*sweep_cmd, sweep, /*need_test=*/true);
  sweep_cmd->add_option("--axis", sweep_axis, "batch_size|lambda");
  sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_seeds, "comma-separated seeds")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (gen_cmd->parsed()) {
      const aucopt::SplitPaths paths =
          aucopt::cmd_gen(gen.config, gen.out_dir, gen.val_fraction, gen.test_fraction);
      std::cout << "wrote " << paths.train_data.string() << " " << paths.val_data.string() << " "
                << paths.test_data.string() << " (+ .truth sidecars)\n";
    } else if (train_cmd->parsed()) {
      train.resolve();
      const aucopt::TrainResult result = aucopt::cmd_train(train.config);
      const auto& last = result.epoch_stats.back();
      std::cout << "trained " << aucopt::objective_name(train.config.objective) << ": "
                << result.epoch_stats.size() << " epochs, final val auc " << last.val_auc
                << ", val gauc " << last.val_gauc << '\n';
      std::cout << "checkpoint: " << result.checkpoint_path.string() << '\n';
      std::cout << "log: " << result.log_path.string() << '\n';
      const auto flagged = aucopt::divergent_epochs(result.epoch_stats);
      if (!flagged.empty()) {
        std::cout << "loss-down/auc-down epochs:";
        for (std::size_t e : flagged) std::cout << ' ' << e;
        std::cout << '\n';
      }
    } else if (eval_cmd->parsed()) {
      const aucopt::EvalResult result = aucopt::cmd_eval(
          eval.checkpoint, eval.data, aucopt::parse_tie_mode(eval.tie_mode), eval.out);
      std::cout << aucopt::metric_report_csv_header() << '\n'
                << aucopt::metric_report_csv_row(result.report) << '\n';
    } else if (sweep_cmd->parsed()) {
      sweep.resolve();
      aucopt::SweepSpec spec;
      spec.axis = aucopt::parse_sweep_axis(sweep_axis);
      spec.values = sweep_values;
      spec.seeds = sweep_seeds.empty() ? std::vector<std::uint64_t>{sweep.config.seed}
                                       : sweep_seeds;
      const auto rows = aucopt::cmd_sweep(sweep.config, spec, sweep.config.out_dir);
      std::cout << "sweep wrote " << rows.size() << " rows to "
                << (sweep.config.out_dir / "sweep.csv").string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
