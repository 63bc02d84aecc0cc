#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <string>
#include <vector>

#include "aucopt/harness.hpp"

namespace py = pybind11;

namespace {

using aucopt::GroupLossStats;
using aucopt::LabeledScores;
using aucopt::LossGrad;

py::dict report_to_dict(const aucopt::MetricReport& report) {
  py::dict per_group;
  for (const auto& [user, group] : report.per_group) {
    per_group[py::int_(user)] = py::make_tuple(group.auc, group.pos_count, group.neg_count);
  }
  py::dict out;
  out["auc"] = report.auc;
  out["gauc"] = report.gauc;
  out["per_group"] = per_group;
  out["skipped_groups"] = report.skipped_groups;
  return out;
}

py::dict eval_to_dict(const aucopt::EvalResult& result) {
  const auto half = [](const aucopt::ActivityHalfReport& h) {
    py::dict d;
    d["auc"] = h.auc;
    d["gauc"] = h.gauc;
    d["n_users"] = h.n_users;
    d["n_impressions"] = h.n_impressions;
    return d;
  };
  py::dict out = report_to_dict(result.report);
  out["active"] = half(result.active);
  out["inactive"] = half(result.inactive);
  return out;
}

py::tuple loss_to_tuple(const LossGrad& loss) {
  return py::make_tuple(loss.value, loss.grad);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Direct AUC/GAUC optimization: pairwise and max-violation ranking losses, "
            "exact WMW metrics, synthetic long-tail click logs and the training harness.";

  m.def("surrogate_value",
        [](const std::string& kind, double t) {
          return aucopt::surrogate_value(aucopt::parse_surrogate(kind), t);
        },
        py::arg("kind"), py::arg("t"), "phi(t) for kind in {pll, phl, psl, pel}");
  m.def("surrogate_grad",
        [](const std::string& kind, double t) {
          return aucopt::surrogate_grad(aucopt::parse_surrogate(kind), t);
        },
        py::arg("kind"), py::arg("t"));

  m.def("auc",
        [](std::vector<double> scores, std::vector<int> labels, const std::string& ties) {
          return aucopt::auc_fast({std::move(scores), std::move(labels)},
                                  aucopt::parse_tie_mode(ties));
        },
        py::arg("scores"), py::arg("labels"), py::arg("ties") = "half",
        "Rank-based WMW AUC, O(n log n)");
  m.def("auc_bruteforce",
        [](std::vector<double> scores, std::vector<int> labels, const std::string& ties) {
          return aucopt::auc_bruteforce({std::move(scores), std::move(labels)},
                                        aucopt::parse_tie_mode(ties));
        },
        py::arg("scores"), py::arg("labels"), py::arg("ties") = "half",
        "Pair-counting AUC oracle, O(m*n)");
  m.def("gauc",
        [](std::vector<double> scores, std::vector<int> labels,
           std::vector<std::uint64_t> user_ids, const std::string& ties) {
          return report_to_dict(aucopt::gauc({std::move(scores), std::move(labels)}, user_ids,
                                             aucopt::parse_tie_mode(ties)));
        },
        py::arg("scores"), py::arg("labels"), py::arg("user_ids"), py::arg("ties") = "half",
        "Unweighted per-user AUC average; skips single-class users");

  m.def("pairwise_loss",
        [](const std::vector<double>& scores, const std::vector<int>& labels,
           const std::string& kind) {
          return loss_to_tuple(
              aucopt::pairwise_loss_full(scores, labels, aucopt::parse_surrogate(kind)));
        },
        py::arg("scores"), py::arg("labels"), py::arg("kind") = "pel",
        "(value, grad) of the all-pairs surrogate loss");
  m.def("daom_select",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
          const aucopt::PairSelection sel = aucopt::daom_select(scores, labels);
          return py::make_tuple(sel.pos_index, sel.neg_index, sel.margin);
        },
        py::arg("scores"), py::arg("labels"),
        "(pos_index, neg_index, margin) of the max-violation pair");
  m.def("daom_loss",
        [](const std::vector<double>& scores, const std::vector<int>& labels,
           const std::string& kind) {
          return loss_to_tuple(aucopt::daom_loss(scores, labels, aucopt::parse_surrogate(kind)));
        },
        py::arg("scores"), py::arg("labels"), py::arg("kind") = "pel");
  m.def("pdaom_loss",
        [](const std::vector<double>& scores, const std::vector<int>& labels,
           const std::vector<std::uint64_t>& user_ids, const std::string& kind,
           const std::string& reduction) {
          GroupLossStats stats;
          const LossGrad loss =
              aucopt::pdaom_loss(scores, labels, user_ids, aucopt::parse_surrogate(kind),
                                 aucopt::parse_pdaom_reduction(reduction), &stats);
          return py::make_tuple(loss.value, loss.grad, stats.contributing_groups);
        },
        py::arg("scores"), py::arg("labels"), py::arg("user_ids"), py::arg("kind") = "pel",
        py::arg("reduction") = "sum",
        "(value, grad, contributing_groups) of the per-user max-violation loss");
  m.def("cross_entropy",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
          return loss_to_tuple(aucopt::cross_entropy(scores, labels));
        },
        py::arg("scores"), py::arg("labels"));
  m.def("combined_objective",
        [](const std::vector<double>& scores, const std::vector<int>& labels,
           const std::vector<std::uint64_t>& user_ids, const std::string& kind, double lam,
           const std::string& reduction) {
          return loss_to_tuple(aucopt::combined_objective(scores, labels, user_ids,
                                                          aucopt::parse_surrogate(kind), lam,
                                                          aucopt::parse_pdaom_reduction(reduction)));
        },
        py::arg("scores"), py::arg("labels"), py::arg("user_ids"), py::arg("kind") = "pel",
        py::arg("lam") = 10.0, py::arg("reduction") = "sum",
        "(value, grad) of cross-entropy + lam * per-user max-violation loss");

  py::class_<aucopt::GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_readwrite("n_users", &aucopt::GenConfig::n_users)
      .def_readwrite("n_items", &aucopt::GenConfig::n_items)
      .def_readwrite("n_impressions", &aucopt::GenConfig::n_impressions)
      .def_readwrite("latent_dim", &aucopt::GenConfig::latent_dim)
      .def_readwrite("popularity_exponent", &aucopt::GenConfig::popularity_exponent)
      .def_readwrite("user_affinity_scale", &aucopt::GenConfig::user_affinity_scale)
      .def_readwrite("noise_scale", &aucopt::GenConfig::noise_scale)
      .def_readwrite("popularity_bias_scale", &aucopt::GenConfig::popularity_bias_scale)
      .def_readwrite("user_activity_exponent", &aucopt::GenConfig::user_activity_exponent)
      .def_readwrite("target_positive_rate", &aucopt::GenConfig::target_positive_rate)
      .def_readwrite("seed", &aucopt::GenConfig::seed);

  m.def("generate",
        [](const aucopt::GenConfig& config, const std::filesystem::path& out_dir,
           double val_fraction, double test_fraction) {
          const aucopt::SplitPaths paths =
              aucopt::cmd_gen(config, out_dir, val_fraction, test_fraction);
          py::dict out;
          out["train"] = paths.train_data;
          out["train_truth"] = paths.train_truth;
          out["val"] = paths.val_data;
          out["val_truth"] = paths.val_truth;
          out["test"] = paths.test_data;
          out["test_truth"] = paths.test_truth;
          return out;
        },
        py::arg("config"), py::arg("out_dir"), py::arg("val_fraction") = 0.1,
        py::arg("test_fraction") = 0.1,
        "Write user-disjoint train/val/test splits plus truth sidecars");

  py::class_<aucopt::RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("train_path", &aucopt::RunConfig::train_path)
      .def_readwrite("val_path", &aucopt::RunConfig::val_path)
      .def_readwrite("test_path", &aucopt::RunConfig::test_path)
      .def_readwrite("out_dir", &aucopt::RunConfig::out_dir)
      .def_property("objective",
                    [](const aucopt::RunConfig& c) {
                      return std::string(aucopt::objective_name(c.objective));
                    },
                    [](aucopt::RunConfig& c, const std::string& name) {
                      c.objective = aucopt::parse_objective(name);
                    })
      .def_property("surrogate",
                    [](const aucopt::RunConfig& c) {
                      return std::string(aucopt::surrogate_name(c.surrogate));
                    },
                    [](aucopt::RunConfig& c, const std::string& name) {
                      c.surrogate = aucopt::parse_surrogate(name);
                    })
      .def_readwrite("lambda_", &aucopt::RunConfig::lambda)
      .def_readwrite("batch_size", &aucopt::RunConfig::batch_size)
      .def_readwrite("epochs", &aucopt::RunConfig::epochs)
      .def_readwrite("learning_rate", &aucopt::RunConfig::learning_rate)
      .def_readwrite("seed", &aucopt::RunConfig::seed)
      .def_readwrite("hidden_dim", &aucopt::RunConfig::hidden_dim)
      .def_readwrite("init_scale", &aucopt::RunConfig::init_scale)
      .def_readwrite("weight_decay", &aucopt::RunConfig::weight_decay);

  m.def("train",
        [](const aucopt::RunConfig& config) {
          const aucopt::TrainResult result = aucopt::cmd_train(config);
          py::list epochs;
          for (const aucopt::EpochStat& stat : result.epoch_stats) {
            py::dict row;
            row["epoch"] = stat.epoch;
            row["train_loss"] = stat.train_loss;
            row["val_auc"] = stat.val_auc;
            row["val_gauc"] = stat.val_gauc;
            row["loss_down_auc_down"] = stat.loss_down_auc_down;
            epochs.append(row);
          }
          py::dict out;
          out["checkpoint"] = result.checkpoint_path;
          out["log"] = result.log_path;
          out["pair_terms_evaluated"] = result.pair_terms_evaluated;
          out["epochs"] = epochs;
          return out;
        },
        py::arg("config"), "Run the epoch loop; returns checkpoint/log paths and epoch stats");

  m.def("evaluate",
        [](const std::filesystem::path& checkpoint, const std::filesystem::path& data,
           const std::string& ties, const std::filesystem::path& out_dir) {
          return eval_to_dict(
              aucopt::cmd_eval(checkpoint, data, aucopt::parse_tie_mode(ties), out_dir));
        },
        py::arg("checkpoint"), py::arg("data"), py::arg("ties") = "half", py::arg("out_dir"),
        "Score a checkpoint on a dataset; writes metrics/groups/activity CSVs");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
