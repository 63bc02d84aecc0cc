#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace aucopt {

/// One impression: grouping key, click label, dense feature row.
struct Sample {
  std::uint64_t user_id = 0;
  int label = 0;
  std::vector<double> features;
};

/// Column-wise sample store; feature rows are contiguous (size() * dim).
struct Dataset {
  std::size_t dim = 0;
  std::vector<std::uint64_t> user_ids;
  std::vector<int> labels;
  std::vector<double> features;

  std::size_t size() const { return user_ids.size(); }
  std::span<const double> feature_row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * dim, dim);
  }
  void append(std::uint64_t user_id, int label, std::span<const double> row);
  void append(const Sample& sample) { append(sample.user_id, sample.label, sample.features); }
  Sample sample(std::size_t i) const;
};

/// Stable sort by user ID; a user's samples keep their relative order.
Dataset sort_by_user(const Dataset& dataset);

/// Epoch reordering that preserves the per-user grouping: user blocks are
/// shuffled against each other and samples are shuffled within each block,
/// all from the given seed.
Dataset shuffle_by_user(const Dataset& dataset, std::uint64_t seed);

/// Half-open index interval into a dataset ordering.
struct BatchRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

/// Consecutive slices of exactly batch_size; the final partial batch is
/// dropped. batch_size < 2 cannot hold a pair and is a ConfigError.
std::vector<BatchRange> make_batches(const Dataset& dataset, std::size_t batch_size);

/// A maximal contiguous run of one user inside a batch.
struct SubBatch {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::uint64_t user_id = 0;
  std::size_t pos_count = 0;
  std::size_t neg_count = 0;
  std::size_t size() const { return end - begin; }
  bool contributes() const { return pos_count >= 1 && neg_count >= 1; }
};

/// Splits a batch into its user runs. The batch must be grouped by user
/// (each ID in one contiguous run); a recurring ID raises ContractError.
std::vector<SubBatch> split_subbatches(std::span<const std::uint64_t> user_ids,
                                       std::span<const int> labels);

/// Line-oriented dataset file: header "#dim=d", then one sample per line as
/// "user_id,label,f1,...,fd". Features are written with enough digits to
/// round-trip bit-exactly.
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace aucopt
