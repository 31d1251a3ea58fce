#pragma once

// Bulk building blocks shared by the LSM, the sorted-array baseline and the
// query pipeline. All functions are pure: they return fresh storage and never
// touch their inputs.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blsm/record.hpp"

namespace blsm {

/// Start offsets of consecutive segments over a record sequence of length
/// `total`. Segments may be empty.
class SegmentLayout {
 public:
  SegmentLayout() = default;
  SegmentLayout(std::vector<std::size_t> offsets, std::size_t total);

  /// Layout whose i-th segment holds counts[i] records.
  static SegmentLayout from_counts(std::span<const std::size_t> counts);

  std::size_t segment_count() const { return offsets_.size(); }
  std::size_t total() const { return total_; }
  std::size_t begin(std::size_t segment) const { return offsets_[segment]; }
  std::size_t end(std::size_t segment) const {
    return segment + 1 < offsets_.size() ? offsets_[segment + 1] : total_;
  }
  std::size_t size(std::size_t segment) const { return end(segment) - begin(segment); }
  const std::vector<std::size_t>& offsets() const { return offsets_; }

 private:
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Stable sort by the full packed key (status bit included). LSD radix sort.
std::vector<Record> sort_records(std::span<const Record> records);

/// Stable merge of two runs sorted by original key. On equal original keys
/// every record of `newer` comes before every record of `older`.
std::vector<Record> merge_by_original_key(std::span<const Record> newer, std::span<const Record> older);

/// First index whose original key is >= key, or level.size().
/// When `probes` is non-null it is incremented once per element comparison.
std::size_t lower_bound(std::span<const Record> level, std::uint32_t key, std::size_t* probes = nullptr);

/// First index whose original key is > key, or level.size().
std::size_t upper_bound(std::span<const Record> level, std::uint32_t key, std::size_t* probes = nullptr);

std::vector<std::size_t> exclusive_scan(std::span<const std::size_t> counts);

/// Per segment, stable sort by original key only.
std::vector<Record> segmented_sort_records(std::span<const Record> records, const SegmentLayout& layout);

struct CompactResult {
  std::vector<Record> records;
  std::vector<std::size_t> counts;
};

/// Keep records whose flag is nonzero, preserving order, and report the
/// surviving count of every segment.
CompactResult segmented_compact(std::span<const Record> records, std::span<const std::uint8_t> valid,
                                const SegmentLayout& layout);

}  // namespace blsm
