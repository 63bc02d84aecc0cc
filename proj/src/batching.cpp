#include "aucopt/batching.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "aucopt/errors.hpp"

namespace aucopt {

namespace {

Dataset apply_permutation(const Dataset& dataset, const std::vector<std::size_t>& order) {
  Dataset out;
  out.dim = dataset.dim;
  out.user_ids.reserve(dataset.size());
  out.labels.reserve(dataset.size());
  out.features.reserve(dataset.features.size());
  for (std::size_t i : order) {
    out.append(dataset.user_ids[i], dataset.labels[i], dataset.feature_row(i));
  }
  return out;
}

}  // namespace

void Dataset::append(std::uint64_t user_id, int label, std::span<const double> row) {
  if (dim == 0 && size() == 0) dim = row.size();
  if (row.size() != dim) {
    throw ContractError("feature row has dimension " + std::to_string(row.size()) +
                        ", dataset expects " + std::to_string(dim));
  }
  if (label != 0 && label != 1) throw DomainError("label must be 0 or 1");
  user_ids.push_back(user_id);
  labels.push_back(label);
  features.insert(features.end(), row.begin(), row.end());
}

Sample Dataset::sample(std::size_t i) const {
  const auto row = feature_row(i);
  return Sample{user_ids[i], labels[i], {row.begin(), row.end()}};
}

Dataset sort_by_user(const Dataset& dataset) {
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.user_ids[a] < dataset.user_ids[b];
  });
  return apply_permutation(dataset, order);
}

Dataset shuffle_by_user(const Dataset& dataset, std::uint64_t seed) {
  // Buckets in first-appearance order, so the result depends only on the
  // input ordering and the seed.
  std::unordered_map<std::uint64_t, std::size_t> slot_of;
  std::vector<std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto [it, inserted] = slot_of.try_emplace(dataset.user_ids[i], buckets.size());
    if (inserted) buckets.emplace_back();
    buckets[it->second].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> block_order(buckets.size());
  std::iota(block_order.begin(), block_order.end(), std::size_t{0});
  std::shuffle(block_order.begin(), block_order.end(), rng);

  std::vector<std::size_t> order;
  order.reserve(dataset.size());
  for (std::size_t b : block_order) {
    std::shuffle(buckets[b].begin(), buckets[b].end(), rng);
    order.insert(order.end(), buckets[b].begin(), buckets[b].end());
  }
  return apply_permutation(dataset, order);
}

std::vector<BatchRange> make_batches(const Dataset& dataset, std::size_t batch_size) {
  if (batch_size < 2) {
    throw ConfigError("batch_size must be >= 2 so a batch can hold a pair");
  }
  std::vector<BatchRange> batches;
  const std::size_t full = dataset.size() / batch_size;
  batches.reserve(full);
  for (std::size_t b = 0; b < full; ++b) {
    batches.push_back(BatchRange{b * batch_size, (b + 1) * batch_size});
  }
  return batches;
}

std::vector<SubBatch> split_subbatches(std::span<const std::uint64_t> user_ids,
                                       std::span<const int> labels) {
  if (user_ids.size() != labels.size()) {
    throw ContractError("user_ids and labels must have the same length");
  }
  std::vector<SubBatch> runs;
  std::unordered_set<std::uint64_t> finished;
  std::size_t i = 0;
  while (i < user_ids.size()) {
    SubBatch run;
    run.begin = i;
    run.user_id = user_ids[i];
    if (!finished.insert(run.user_id).second) {
      throw ContractError("batch is not grouped by user: ID " + std::to_string(run.user_id) +
                          " recurs after another user");
    }
    while (i < user_ids.size() && user_ids[i] == run.user_id) {
      if (labels[i] == 1) {
        ++run.pos_count;
      } else {
        ++run.neg_count;
      }
      ++i;
    }
    run.end = i;
    runs.push_back(run);
  }
  return runs;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "#dim=" << dataset.dim << '\n';
  char buf[40];
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out << dataset.user_ids[i] << ',' << dataset.labels[i];
    for (double f : dataset.feature_row(i)) {
      std::snprintf(buf, sizeof(buf), "%.17g", f);
      out << ',' << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("#dim=", 0) != 0) {
    throw IoError("missing '#dim=' header: " + path.string());
  }
  const unsigned long dim = std::strtoul(line.c_str() + 5, nullptr, 10);
  if (dim == 0) throw IoError("header dimension must be positive: " + path.string());

  Dataset dataset;
  dataset.dim = dim;
  std::vector<double> row(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const char* p = line.c_str();
    char* end = nullptr;
    errno = 0;
    const std::uint64_t user = std::strtoull(p, &end, 10);
    if (end == p || *end != ',' || errno != 0) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad user id");
    }
    p = end + 1;
    const long label = std::strtol(p, &end, 10);
    if (end == p || (label != 0 && label != 1)) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad label");
    }
    for (std::size_t k = 0; k < dim; ++k) {
      if (*end != ',') {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " features");
      }
      p = end + 1;
      row[k] = std::strtod(p, &end);
      if (end == p) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad feature value");
      }
    }
    if (*end != '\0') {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": trailing characters");
    }
    dataset.append(user, static_cast<int>(label), row);
  }
  return dataset;
}

}  // namespace aucopt
