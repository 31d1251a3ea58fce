#include "blsm/sorted_array.hpp"

#include <string>

#include "blsm/error.hpp"
#include "blsm/primitives.hpp"

namespace blsm {

SortedArray::SortedArray(LsmConfig config) : config_(config) { config_.validate(); }

SortedArray SortedArray::from_records(LsmConfig config, std::vector<Record> records) {
  SortedArray sa(config);
  sa.records_ = std::move(records);
  sa.check_invariants();
  return sa;
}

void SortedArray::update_batch(std::span<const UpdateEntry> batch) {
  auto buffer = sort_records(encode_batch(batch, config_.batch_size));
  counters_.sorted_records += buffer.size();
  if (records_.empty()) {
    records_ = std::move(buffer);
    return;
  }
  counters_.merged_records += records_.size() + buffer.size();
  records_ = merge_by_original_key(buffer, records_);
}

void SortedArray::delete_batch(std::span<const std::uint32_t> keys) {
  std::vector<UpdateEntry> batch;
  batch.reserve(keys.size());
  for (const std::uint32_t k : keys) batch.push_back(UpdateEntry::erase(k));
  update_batch(batch);
}

std::vector<std::span<const Record>> SortedArray::stack() const {
  if (records_.empty()) return {};
  return {std::span<const Record>(records_)};
}

std::vector<LookupResult> SortedArray::lookup(std::span<const std::uint32_t> keys, QueryTrace* trace) const {
  const auto levels = stack();
  return lookup_levels(levels, keys, trace);
}

std::vector<std::size_t> SortedArray::count(std::span<const RangeQuery> queries, QueryTrace* trace) const {
  const auto levels = stack();
  return count_levels(levels, queries, trace);
}

RangeResult SortedArray::range(std::span<const RangeQuery> queries, QueryTrace* trace) const {
  const auto levels = stack();
  return range_levels(levels, queries, trace);
}

void SortedArray::check_invariants() const {
  const auto fail = [](const std::string& what) { throw Error(Errc::InvariantViolation, what); };
  if (records_.size() % config_.batch_size != 0) {
    fail("sorted array holds " + std::to_string(records_.size()) + " records, not a multiple of b = " +
         std::to_string(config_.batch_size));
  }
  for (std::size_t j = 0; j < records_.size(); ++j) {
    const Record& rec = records_[j];
    if (j > 0 && records_[j - 1].original_key() > rec.original_key()) {
      fail("sorted array unsorted at index " + std::to_string(j));
    }
    if (rec.is_tombstone() && rec.value != 0) fail("tombstone with nonzero value");
    if (rec.is_regular() && rec.original_key() > kMaxUserKey) fail("regular record with the reserved placebo key");
  }
}

}  // namespace blsm
