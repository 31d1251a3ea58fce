#pragma once

// Batch-update LSM dictionary. Updates arrive in batches of exactly b
// entries; level i holds either nothing or exactly b * 2^i records, and the
// set of full levels mirrors the binary digits of the resident batch count.
//
// Stale records (superseded values, deleted values, tombstones) stay resident
// until cleanup(). Queries see only the most recent record of every key.
//
// Mutations need exclusive access; const queries may run concurrently.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blsm/query.hpp"
#include "blsm/record.hpp"

namespace blsm {

struct LsmConfig {
  std::size_t batch_size = 0;

  /// Throws Error(InvalidConfig) unless batch_size is a power of two >= 2.
  void validate() const;
};

struct UpdateEntry {
  enum class Op : std::uint8_t { Insert, Delete };

  Op op = Op::Insert;
  std::uint32_t key = 0;
  std::uint32_t value = 0;

  static constexpr UpdateEntry insert(std::uint32_t k, std::uint32_t v) { return {Op::Insert, k, v}; }
  static constexpr UpdateEntry erase(std::uint32_t k) { return {Op::Delete, k, 0}; }

  bool operator==(const UpdateEntry&) const = default;
};

struct WorkCounters {
  std::uint64_t sorted_records = 0;
  std::uint64_t merged_records = 0;
  std::uint64_t compacted_records = 0;

  bool operator==(const WorkCounters&) const = default;
};

/// Index of the least-significant zero bit of r.
constexpr unsigned ffz(std::uint64_t r) {
  unsigned i = 0;
  while ((r >> i) & 1u) ++i;
  return i;
}

/// Extends a partial batch to b entries by repeating its last entry.
/// Throws EmptyBatch for an empty input and InvalidArgument when entries.size() > b.
std::vector<UpdateEntry> pad_partial_batch(std::span<const UpdateEntry> entries, std::size_t b);

/// Encodes a full batch into records (Insert -> regular, Delete -> tombstone
/// with value 0) without reordering. Throws BatchSizeMismatch or KeyOutOfDomain.
std::vector<Record> encode_batch(std::span<const UpdateEntry> batch, std::size_t b);

class Lsm {
 public:
  explicit Lsm(LsmConfig config);

  /// Rebuilds a structure from explicit level contents (e.g. a parsed dump).
  /// `levels[i]` must be empty or hold b * 2^i records per the bits of r.
  static Lsm from_levels(LsmConfig config, std::uint64_t r, std::vector<std::vector<Record>> levels);

  void update_batch(std::span<const UpdateEntry> batch);
  void delete_batch(std::span<const std::uint32_t> keys);

  /// Removes every stale record and tombstone, pads with placebos to a
  /// multiple of b, and redistributes the survivors with smaller keys in
  /// smaller levels. Query answers are unchanged.
  void cleanup();

  std::vector<LookupResult> lookup(std::span<const std::uint32_t> keys, QueryTrace* trace = nullptr) const;
  std::vector<std::size_t> count(std::span<const RangeQuery> queries, QueryTrace* trace = nullptr) const;
  RangeResult range(std::span<const RangeQuery> queries, QueryTrace* trace = nullptr) const;

  const LsmConfig& config() const { return config_; }
  std::size_t batch_size() const { return config_.batch_size; }
  std::uint64_t resident_batches() const { return r_; }
  std::size_t resident_records() const { return static_cast<std::size_t>(r_) * config_.batch_size; }
  const WorkCounters& stats() const { return counters_; }

  /// Number of level slots ever allocated; slots past the top bit of r are empty.
  std::size_t level_slots() const { return levels_.size(); }
  bool is_full(std::size_t i) const { return i < levels_.size() && !levels_[i].empty(); }
  std::span<const Record> level(std::size_t i) const;
  std::size_t full_level_count() const;

  /// Full levels, smallest (most recent) first.
  std::vector<std::span<const Record>> full_levels() const;

  /// Throws Error(InvariantViolation) if occupancy, level sizes or per-level
  /// ordering are broken.
  void check_invariants() const;

 private:
  friend Lsm bulk_build(std::span<const UpdateEntry> entries, LsmConfig config);

  void insert_sorted(std::vector<Record> buffer);

  LsmConfig config_;
  std::uint64_t r_ = 0;
  std::vector<std::vector<Record>> levels_;
  WorkCounters counters_;
};

/// Builds an LSM from insert-only entries with one global sort. Query
/// behaviour equals creating an empty LSM and feeding consecutive b-sized
/// slices through update_batch.
Lsm bulk_build(std::span<const UpdateEntry> entries, LsmConfig config);

/// Distributes records already sorted by original key over the levels named
/// by the set bits of records.size() / b, smallest keys into the smallest level.
std::vector<std::vector<Record>> slice_into_levels(std::vector<Record> sorted, std::size_t b);

}  // namespace blsm
