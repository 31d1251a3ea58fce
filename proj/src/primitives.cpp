#include "blsm/primitives.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "blsm/error.hpp"

namespace blsm {

SegmentLayout::SegmentLayout(std::vector<std::size_t> offsets, std::size_t total)
    : offsets_(std::move(offsets)), total_(total) {
  if (!offsets_.empty() && offsets_.front() != 0) {
    throw Error(Errc::InvalidArgument, "segment layout must start at offset 0");
  }
  if (offsets_.empty() && total_ != 0) {
    throw Error(Errc::InvalidArgument, "segment layout without segments must cover zero records");
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) {
    if (offsets_[i] < offsets_[i - 1]) {
      throw Error(Errc::InvalidArgument, "segment offsets must be nondecreasing");
    }
  }
  if (!offsets_.empty() && offsets_.back() > total_) {
    throw Error(Errc::InvalidArgument, "segment offset past the end of the records");
  }
}

SegmentLayout SegmentLayout::from_counts(std::span<const std::size_t> counts) {
  auto offsets = exclusive_scan(counts);
  const std::size_t total = counts.empty() ? 0 : offsets.back() + counts.back();
  return SegmentLayout(std::move(offsets), total);
}

std::vector<Record> sort_records(std::span<const Record> records) {
  constexpr unsigned kDigitBits = 8;
  constexpr std::size_t kBuckets = std::size_t{1} << kDigitBits;

  std::vector<Record> current(records.begin(), records.end());
  if (current.size() < 2) return current;
  std::vector<Record> scratch(current.size());

  for (unsigned shift = 0; shift < 32; shift += kDigitBits) {
    std::array<std::size_t, kBuckets> histogram{};
    for (const Record& r : current) ++histogram[(r.key.packed() >> shift) & (kBuckets - 1)];
    // A pass where every record shares the digit would be the identity.
    if (std::find(histogram.begin(), histogram.end(), current.size()) != histogram.end()) continue;

    std::exclusive_scan(histogram.begin(), histogram.end(), histogram.begin(), std::size_t{0});
    for (const Record& r : current) scratch[histogram[(r.key.packed() >> shift) & (kBuckets - 1)]++] = r;
    current.swap(scratch);
  }
  return current;
}

std::vector<Record> merge_by_original_key(std::span<const Record> newer, std::span<const Record> older) {
  std::vector<Record> out;
  out.reserve(newer.size() + older.size());
  auto n = newer.begin();
  auto o = older.begin();
  while (n != newer.end() && o != older.end()) {
    // Take from `older` only when strictly smaller, so ties favor `newer`.
    if (o->original_key() < n->original_key()) {
      out.push_back(*o++);
    } else {
      out.push_back(*n++);
    }
  }
  out.insert(out.end(), n, newer.end());
  out.insert(out.end(), o, older.end());
  return out;
}

std::size_t lower_bound(std::span<const Record> level, std::uint32_t key, std::size_t* probes) {
  std::size_t lo = 0;
  std::size_t len = level.size();
  std::size_t count = 0;
  while (len > 0) {
    const std::size_t half = len / 2;
    ++count;
    if (level[lo + half].original_key() < key) {
      lo += half + 1;
      len -= half + 1;
    } else {
      len = half;
    }
  }
  if (probes != nullptr) *probes += count;
  return lo;
}

std::size_t upper_bound(std::span<const Record> level, std::uint32_t key, std::size_t* probes) {
  std::size_t lo = 0;
  std::size_t len = level.size();
  std::size_t count = 0;
  while (len > 0) {
    const std::size_t half = len / 2;
    ++count;
    if (level[lo + half].original_key() <= key) {
      lo += half + 1;
      len -= half + 1;
    } else {
      len = half;
    }
  }
  if (probes != nullptr) *probes += count;
  return lo;
}

std::vector<std::size_t> exclusive_scan(std::span<const std::size_t> counts) {
  std::vector<std::size_t> out(counts.size());
  std::exclusive_scan(counts.begin(), counts.end(), out.begin(), std::size_t{0});
  return out;
}

namespace {

void check_layout(std::size_t record_count, const SegmentLayout& layout) {
  if (layout.total() != record_count) {
    throw Error(Errc::InvalidArgument, "segment layout covers " + std::to_string(layout.total()) +
                                           " records but " + std::to_string(record_count) + " were given");
  }
}

}  // namespace

std::vector<Record> segmented_sort_records(std::span<const Record> records, const SegmentLayout& layout) {
  check_layout(records.size(), layout);
  std::vector<Record> out(records.begin(), records.end());
  const auto by_original_key = [](const Record& a, const Record& b) { return a.original_key() < b.original_key(); };
  for (std::size_t s = 0; s < layout.segment_count(); ++s) {
    auto first = out.begin() + static_cast<std::ptrdiff_t>(layout.begin(s));
    auto last = out.begin() + static_cast<std::ptrdiff_t>(layout.end(s));
    std::stable_sort(first, last, by_original_key);
  }
  return out;
}

CompactResult segmented_compact(std::span<const Record> records, std::span<const std::uint8_t> valid,
                                const SegmentLayout& layout) {
  check_layout(records.size(), layout);
  if (valid.size() != records.size()) {
    throw Error(Errc::InvalidArgument, "one validity flag per record is required");
  }
  CompactResult result;
  result.counts.resize(layout.segment_count());
  for (std::size_t s = 0; s < layout.segment_count(); ++s) {
    std::size_t kept = 0;
    for (std::size_t i = layout.begin(s); i < layout.end(s); ++i) {
      if (valid[i] != 0) {
        result.records.push_back(records[i]);
        ++kept;
      }
    }
    result.counts[s] = kept;
  }
  return result;
}

}  // namespace blsm
