#include "aucopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "aucopt/detail/format.hpp"
#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

void validate(const LabeledScores& data) {
  if (data.scores.size() != data.labels.size()) {
    throw ContractError("scores and labels must have the same length");
  }
  for (double s : data.scores) {
    if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
      throw DomainError("score out of [0,1]: " + std::to_string(s));
    }
  }
  for (int y : data.labels) {
    if (y != 0 && y != 1) {
      throw DomainError("label must be 0 or 1, got " + std::to_string(y));
    }
  }
}

std::pair<std::size_t, std::size_t> class_counts(const std::vector<int>& labels) {
  std::size_t pos = 0;
  for (int y : labels) pos += static_cast<std::size_t>(y);
  return {pos, labels.size() - pos};
}

using detail::fmt_g17;

}  // namespace

TieMode parse_tie_mode(std::string_view name) {
  if (name == "strict") return TieMode::Strict;
  if (name == "half") return TieMode::HalfCredit;
  throw ConfigError("unknown tie mode '" + std::string(name) + "' (expected strict|half)");
}

std::string_view tie_mode_name(TieMode mode) {
  return mode == TieMode::Strict ? "strict" : "half";
}

double auc_bruteforce(const LabeledScores& data, TieMode ties) {
  validate(data);
  const auto [m, n] = class_counts(data.labels);
  if (m == 0 || n == 0) {
    throw UndefinedMetricError("AUC needs at least one positive and one negative");
  }
  const double tie_credit = ties == TieMode::Strict ? 0.0 : 0.5;
  double credit = 0.0;
  const std::size_t total = data.labels.size();
  for (std::size_t i = 0; i < total; ++i) {
    if (data.labels[i] != 1) continue;
    for (std::size_t j = 0; j < total; ++j) {
      if (data.labels[j] != 0) continue;
      if (data.scores[i] > data.scores[j]) {
        credit += 1.0;
      } else if (data.scores[i] == data.scores[j]) {
        credit += tie_credit;
      }
    }
  }
  return credit / (static_cast<double>(m) * static_cast<double>(n));
}

double auc_fast(const LabeledScores& data, TieMode ties) {
  validate(data);
  const auto [m, n] = class_counts(data.labels);
  if (m == 0 || n == 0) {
    throw UndefinedMetricError("AUC needs at least one positive and one negative");
  }

  const std::size_t total = data.labels.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return data.scores[a] < data.scores[b];
  });

  // Walk runs of equal score: every positive in a run beats all negatives in
  // strictly lower runs; ties within the run earn the tie credit.
  double credit = 0.0;
  double negatives_below = 0.0;
  const double tie_credit = ties == TieMode::Strict ? 0.0 : 0.5;
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    std::size_t run_pos = 0, run_neg = 0;
    while (j < total && data.scores[order[j]] == data.scores[order[i]]) {
      if (data.labels[order[j]] == 1) {
        ++run_pos;
      } else {
        ++run_neg;
      }
      ++j;
    }
    credit += static_cast<double>(run_pos) * negatives_below;
    credit += tie_credit * static_cast<double>(run_pos) * static_cast<double>(run_neg);
    negatives_below += static_cast<double>(run_neg);
    i = j;
  }
  return credit / (static_cast<double>(m) * static_cast<double>(n));
}

MetricReport gauc(const LabeledScores& data, const std::vector<std::uint64_t>& user_ids,
                  TieMode ties) {
  validate(data);
  if (user_ids.size() != data.labels.size()) {
    throw ContractError("user_ids length must match scores length");
  }

  std::map<std::uint64_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < user_ids.size(); ++i) {
    groups[user_ids[i]].push_back(i);
  }

  MetricReport report;
  report.auc = auc_fast(data, ties);

  double gauc_sum = 0.0;
  for (const auto& [user, indices] : groups) {
    LabeledScores group;
    group.scores.reserve(indices.size());
    group.labels.reserve(indices.size());
    std::size_t pos = 0;
    for (std::size_t i : indices) {
      group.scores.push_back(data.scores[i]);
      group.labels.push_back(data.labels[i]);
      pos += static_cast<std::size_t>(data.labels[i]);
    }
    const std::size_t neg = indices.size() - pos;
    if (pos == 0 || neg == 0) {
      ++report.skipped_groups;
      continue;
    }
    const double group_auc = auc_fast(group, ties);
    report.per_group.emplace(user, GroupAuc{group_auc, pos, neg});
    gauc_sum += group_auc;
  }

  if (report.per_group.empty()) {
    throw UndefinedMetricError("GAUC needs at least one group with both classes");
  }
  report.gauc = gauc_sum / static_cast<double>(report.per_group.size());
  return report;
}

std::string metric_report_csv_header() { return "auc,gauc,n_groups,n_skipped"; }

std::string metric_report_csv_row(const MetricReport& report) {
  return fmt_g17(report.auc) + "," + fmt_g17(report.gauc) + "," + std::to_string(report.per_group.size()) +
         "," + std::to_string(report.skipped_groups);
}

void write_group_detail_csv(std::ostream& out, const MetricReport& report) {
  out << "user_id,auc,pos_count,neg_count\n";
  for (const auto& [user, group] : report.per_group) {
    out << user << ',' << fmt_g17(group.auc) << ',' << group.pos_count << ',' << group.neg_count
        << '\n';
  }
}

}  // namespace aucopt
