#pragma once

// Single-level baseline: every batch is sorted and merged into one array.
// Shares record encoding, stale-record handling and query semantics with Lsm,
// so the two answer every query identically.

#include <cstdint>
#include <span>
#include <vector>

#include "blsm/lsm.hpp"

namespace blsm {

class SortedArray {
 public:
  explicit SortedArray(LsmConfig config);

  static SortedArray from_records(LsmConfig config, std::vector<Record> records);

  void update_batch(std::span<const UpdateEntry> batch);
  void delete_batch(std::span<const std::uint32_t> keys);

  std::vector<LookupResult> lookup(std::span<const std::uint32_t> keys, QueryTrace* trace = nullptr) const;
  std::vector<std::size_t> count(std::span<const RangeQuery> queries, QueryTrace* trace = nullptr) const;
  RangeResult range(std::span<const RangeQuery> queries, QueryTrace* trace = nullptr) const;

  const LsmConfig& config() const { return config_; }
  std::size_t batch_size() const { return config_.batch_size; }
  std::uint64_t resident_batches() const { return records_.size() / config_.batch_size; }
  std::span<const Record> records() const { return records_; }
  const WorkCounters& stats() const { return counters_; }

  void check_invariants() const;

 private:
  std::vector<std::span<const Record>> stack() const;

  LsmConfig config_;
  std::vector<Record> records_;
  WorkCounters counters_;
};

}  // namespace blsm
