#include "blsm/lsm.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "blsm/error.hpp"
#include "blsm/primitives.hpp"

namespace blsm {

void LsmConfig::validate() const {
  if (batch_size < 2 || !std::has_single_bit(batch_size)) {
    throw Error(Errc::InvalidConfig,
                "batch size must be a power of two >= 2, got " + std::to_string(batch_size));
  }
}

std::vector<UpdateEntry> pad_partial_batch(std::span<const UpdateEntry> entries, std::size_t b) {
  if (entries.empty()) throw Error(Errc::EmptyBatch, "cannot pad an empty batch");
  if (entries.size() > b) {
    throw Error(Errc::InvalidArgument, "partial batch of " + std::to_string(entries.size()) +
                                           " entries exceeds batch size " + std::to_string(b));
  }
  std::vector<UpdateEntry> out(entries.begin(), entries.end());
  out.resize(b, entries.back());
  return out;
}

std::vector<Record> encode_batch(std::span<const UpdateEntry> batch, std::size_t b) {
  if (batch.size() != b) {
    throw Error(Errc::BatchSizeMismatch,
                "batch holds " + std::to_string(batch.size()) + " entries, expected " + std::to_string(b));
  }
  std::vector<Record> records;
  records.reserve(batch.size());
  for (const UpdateEntry& e : batch) {
    if (e.key > kMaxUserKey) {
      throw Error(Errc::KeyOutOfDomain, "key " + std::to_string(e.key) + " is outside [0, 2^31 - 2]");
    }
    records.push_back(e.op == UpdateEntry::Op::Insert ? Record::regular(e.key, e.value) : Record::tombstone(e.key));
  }
  return records;
}

Lsm::Lsm(LsmConfig config) : config_(config) { config_.validate(); }

Lsm Lsm::from_levels(LsmConfig config, std::uint64_t r, std::vector<std::vector<Record>> levels) {
  Lsm lsm(config);
  lsm.r_ = r;
  lsm.levels_ = std::move(levels);
  lsm.check_invariants();
  return lsm;
}

std::span<const Record> Lsm::level(std::size_t i) const {
  if (i >= levels_.size()) return {};
  return levels_[i];
}

std::size_t Lsm::full_level_count() const {
  return static_cast<std::size_t>(std::ranges::count_if(levels_, [](const auto& l) { return !l.empty(); }));
}

std::vector<std::span<const Record>> Lsm::full_levels() const {
  std::vector<std::span<const Record>> out;
  for (const auto& l : levels_) {
    if (!l.empty()) out.emplace_back(l);
  }
  return out;
}

void Lsm::update_batch(std::span<const UpdateEntry> batch) {
  auto records = encode_batch(batch, config_.batch_size);
  auto buffer = sort_records(records);
  counters_.sorted_records += buffer.size();
  insert_sorted(std::move(buffer));
}

void Lsm::delete_batch(std::span<const std::uint32_t> keys) {
  std::vector<UpdateEntry> batch;
  batch.reserve(keys.size());
  for (const std::uint32_t k : keys) batch.push_back(UpdateEntry::erase(k));
  update_batch(batch);
}

// Carry propagation: merge the buffer into every full level from the bottom
// up, then park it in the first empty one.
void Lsm::insert_sorted(std::vector<Record> buffer) {
  std::size_t i = 0;
  while (is_full(i)) {
    counters_.merged_records += buffer.size() + levels_[i].size();
    buffer = merge_by_original_key(buffer, levels_[i]);
    levels_[i].clear();
    levels_[i].shrink_to_fit();
    ++i;
  }
  if (i >= levels_.size()) levels_.resize(i + 1);
  levels_[i] = std::move(buffer);
  ++r_;
}

std::vector<std::vector<Record>> slice_into_levels(std::vector<Record> sorted, std::size_t b) {
  const std::uint64_t batches = sorted.size() / b;
  std::vector<std::vector<Record>> levels(batches == 0 ? 0 : std::bit_width(batches));
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (((batches >> i) & 1u) == 0) continue;
    const std::size_t len = b << i;
    levels[i].assign(sorted.begin() + static_cast<std::ptrdiff_t>(cursor),
                     sorted.begin() + static_cast<std::ptrdiff_t>(cursor + len));
    cursor += len;
  }
  return levels;
}

void Lsm::cleanup() {
  const auto full = full_levels();
  if (full.empty()) return;

  // 1. Merge smallest to largest; recency order within every key survives.
  std::vector<Record> merged(full.front().begin(), full.front().end());
  for (std::size_t i = 1; i < full.size(); ++i) {
    counters_.merged_records += merged.size() + full[i].size();
    merged = merge_by_original_key(merged, full[i]);
  }

  // 2. Mark: only the head of an equal-key run can be live, and only if regular.
  std::vector<std::uint8_t> valid(merged.size(), 0);
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const bool run_head = i == 0 || merged[i - 1].original_key() != merged[i].original_key();
    valid[i] = run_head && merged[i].is_regular() ? 1 : 0;
  }

  // 3. Compact.
  counters_.compacted_records += merged.size();
  auto compacted = segmented_compact(merged, valid, SegmentLayout({0}, merged.size()));
  std::vector<Record> survivors = std::move(compacted.records);

  // 4. Pad with placebos; they sort after every user key.
  const std::size_t b = config_.batch_size;
  if (!survivors.empty()) {
    const std::size_t padded = (survivors.size() + b - 1) / b * b;
    survivors.resize(padded, Record::placebo());
  }

  // 5. Redistribute.
  r_ = survivors.size() / b;
  levels_ = slice_into_levels(std::move(survivors), b);
}

std::vector<LookupResult> Lsm::lookup(std::span<const std::uint32_t> keys, QueryTrace* trace) const {
  const auto stack = full_levels();
  return lookup_levels(stack, keys, trace);
}

std::vector<std::size_t> Lsm::count(std::span<const RangeQuery> queries, QueryTrace* trace) const {
  const auto stack = full_levels();
  return count_levels(stack, queries, trace);
}

RangeResult Lsm::range(std::span<const RangeQuery> queries, QueryTrace* trace) const {
  const auto stack = full_levels();
  return range_levels(stack, queries, trace);
}

void Lsm::check_invariants() const {
  const std::size_t b = config_.batch_size;
  const auto fail = [](const std::string& what) { throw Error(Errc::InvariantViolation, what); };

  if (levels_.size() < static_cast<std::size_t>(std::bit_width(r_))) {
    fail("r = " + std::to_string(r_) + " needs " + std::to_string(std::bit_width(r_)) + " levels, have " +
         std::to_string(levels_.size()));
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const bool bit = i < 64 && ((r_ >> i) & 1u) != 0;
    const auto& level = levels_[i];
    if (bit != !level.empty()) {
      fail("level " + std::to_string(i) + " occupancy disagrees with bit " + std::to_string(i) + " of r = " +
           std::to_string(r_));
    }
    if (bit && level.size() != (b << i)) {
      fail("level " + std::to_string(i) + " holds " + std::to_string(level.size()) + " records, expected " +
           std::to_string(b << i));
    }
    for (std::size_t j = 0; j < level.size(); ++j) {
      const Record& rec = level[j];
      if (j > 0 && level[j - 1].original_key() > rec.original_key()) {
        fail("level " + std::to_string(i) + " unsorted at index " + std::to_string(j));
      }
      if (rec.is_tombstone() && rec.value != 0) {
        fail("tombstone with nonzero value in level " + std::to_string(i));
      }
      if (rec.is_regular() && rec.original_key() > kMaxUserKey) {
        fail("regular record with the reserved placebo key in level " + std::to_string(i));
      }
    }
  }
}

Lsm bulk_build(std::span<const UpdateEntry> entries, LsmConfig config) {
  config.validate();
  const std::size_t b = config.batch_size;
  if (entries.size() % b != 0) {
    throw Error(Errc::SizeNotMultipleOfBatch,
                std::to_string(entries.size()) + " entries is not a multiple of batch size " + std::to_string(b));
  }
  for (const UpdateEntry& e : entries) {
    if (e.op != UpdateEntry::Op::Insert) throw Error(Errc::InvalidArgument, "bulk_build accepts inserts only");
  }

  // Later batches must precede earlier ones on equal keys, so lay the batches
  // out newest first before the stable global sort.
  const std::size_t batches = entries.size() / b;
  std::vector<Record> records;
  records.reserve(entries.size());
  for (std::size_t k = batches; k-- > 0;) {
    const auto encoded = encode_batch(entries.subspan(k * b, b), b);
    records.insert(records.end(), encoded.begin(), encoded.end());
  }
  auto sorted = sort_records(records);

  std::vector<std::vector<Record>> levels = slice_into_levels(std::move(sorted), b);
  Lsm lsm = Lsm::from_levels(config, batches, std::move(levels));
  lsm.counters_.sorted_records = entries.size();
  return lsm;
}

}  // namespace blsm
