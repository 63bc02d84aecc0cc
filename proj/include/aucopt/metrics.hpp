#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace aucopt {

/// How a tied positive/negative score pair is credited: 0 under Strict
/// (literal reading of the pair indicator), 0.5 under HalfCredit (the
/// convention of standard evaluation tools; CLI reports default to it).
enum class TieMode { Strict, HalfCredit };

TieMode parse_tie_mode(std::string_view name);  // "strict" | "half"
std::string_view tie_mode_name(TieMode mode);

/// Scores in [0,1] with binary labels, same length.
struct LabeledScores {
  std::vector<double> scores;
  std::vector<int> labels;
};

struct GroupAuc {
  double auc = 0.0;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
};

struct MetricReport {
  double auc = 0.0;
  double gauc = 0.0;
  std::map<std::uint64_t, GroupAuc> per_group;  // only groups with both classes
  std::size_t skipped_groups = 0;               // groups lacking one class
};

/// Pair-counting AUC by explicit double loop over all m*n pairs. O(m*n);
/// kept as the oracle the fast path is checked against.
double auc_bruteforce(const LabeledScores& data, TieMode ties);

/// Same value as auc_bruteforce (within 1e-12) via one sort over distinct
/// score runs, O(n log n).
double auc_fast(const LabeledScores& data, TieMode ties);

/// Per-user AUC averaged with weight 1 over every group holding both classes.
/// Groups are accumulated in ascending user-ID order so the result does not
/// depend on input order beyond the grouping itself.
MetricReport gauc(const LabeledScores& data, const std::vector<std::uint64_t>& user_ids,
                  TieMode ties);

/// CSV row "auc,gauc,n_groups,n_skipped" (with header helper), plus the
/// optional per-group detail table keyed by user ID.
std::string metric_report_csv_header();
std::string metric_report_csv_row(const MetricReport& report);
void write_group_detail_csv(std::ostream& out, const MetricReport& report);

}  // namespace aucopt
