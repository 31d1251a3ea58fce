#include "blsm/query.hpp"

#include <string>

#include "blsm/error.hpp"
#include "blsm/primitives.hpp"

namespace blsm {

std::span<const KeyValue> RangeResult::pairs_of(std::size_t query) const {
  const std::size_t first = offsets.at(query);
  const std::size_t last = query + 1 < offsets.size() ? offsets[query + 1] : pairs.size();
  return std::span<const KeyValue>(pairs).subspan(first, last - first);
}

std::vector<LookupResult> lookup_levels(LevelStack levels, std::span<const std::uint32_t> keys, QueryTrace* trace) {
  std::vector<LookupResult> results(keys.size());
  std::size_t probes = 0;
  for (std::size_t q = 0; q < keys.size(); ++q) {
    const std::uint32_t key = keys[q];
    for (const auto level : levels) {
      const std::size_t at = lower_bound(level, key, &probes);
      if (at == level.size() || level[at].original_key() != key) continue;
      if (level[at].is_regular()) results[q] = level[at].value;
      break;
    }
  }
  if (trace != nullptr) trace->probes += probes;
  return results;
}

namespace {

struct Candidates {
  std::vector<Record> records;
  SegmentLayout layout;  // one segment per query
};

// Stages 1-4: per-level bounds, scan, gather (most recent level first), then a
// stable per-query sort on the original key.
Candidates gather_candidates(LevelStack levels, std::span<const RangeQuery> queries, QueryTrace* trace) {
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (queries[q].k1 > queries[q].k2) {
      throw Error(Errc::InvalidRange, "query " + std::to_string(q) + " has k1 " + std::to_string(queries[q].k1) +
                                          " > k2 " + std::to_string(queries[q].k2));
    }
  }

  const std::size_t level_count = levels.size();
  std::vector<std::size_t> lower(queries.size() * level_count);
  std::vector<std::size_t> init_count(queries.size() * level_count);
  std::size_t probes = 0;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t i = 0; i < level_count; ++i) {
      const std::size_t l = lower_bound(levels[i], queries[q].k1, &probes);
      const std::size_t u = upper_bound(levels[i], queries[q].k2, &probes);
      lower[q * level_count + i] = l;
      init_count[q * level_count + i] = u - l;
    }
  }

  const std::vector<std::size_t> offset = exclusive_scan(init_count);
  const std::size_t total = init_count.empty() ? 0 : offset.back() + init_count.back();

  std::vector<Record> gathered(total);
  std::vector<std::size_t> segment_offsets(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    segment_offsets[q] = level_count == 0 ? 0 : offset[q * level_count];
    for (std::size_t i = 0; i < level_count; ++i) {
      const std::size_t slot = q * level_count + i;
      const auto source = levels[i].subspan(lower[slot], init_count[slot]);
      std::copy(source.begin(), source.end(), gathered.begin() + static_cast<std::ptrdiff_t>(offset[slot]));
    }
  }

  if (trace != nullptr) {
    trace->probes += probes;
    trace->candidates += total;
  }

  SegmentLayout layout(std::move(segment_offsets), total);
  auto sorted = segmented_sort_records(gathered, layout);
  return {std::move(sorted), std::move(layout)};
}

// Stage 5 marking: the head of each equal-key run decides; it counts only if
// it is a regular record.
std::vector<std::uint8_t> mark_valid(const Candidates& c) {
  std::vector<std::uint8_t> valid(c.records.size(), 0);
  for (std::size_t s = 0; s < c.layout.segment_count(); ++s) {
    const std::size_t first = c.layout.begin(s);
    for (std::size_t i = first; i < c.layout.end(s); ++i) {
      const bool run_head = i == first || c.records[i - 1].original_key() != c.records[i].original_key();
      valid[i] = run_head && c.records[i].is_regular() ? 1 : 0;
    }
  }
  return valid;
}

}  // namespace

std::vector<std::size_t> count_levels(LevelStack levels, std::span<const RangeQuery> queries, QueryTrace* trace) {
  const Candidates c = gather_candidates(levels, queries, trace);
  const auto valid = mark_valid(c);
  std::vector<std::size_t> counts(queries.size(), 0);
  for (std::size_t s = 0; s < c.layout.segment_count(); ++s) {
    for (std::size_t i = c.layout.begin(s); i < c.layout.end(s); ++i) counts[s] += valid[i];
  }
  return counts;
}

RangeResult range_levels(LevelStack levels, std::span<const RangeQuery> queries, QueryTrace* trace) {
  const Candidates c = gather_candidates(levels, queries, trace);
  const auto valid = mark_valid(c);
  const CompactResult compact = segmented_compact(c.records, valid, c.layout);

  RangeResult result;
  result.offsets = exclusive_scan(compact.counts);
  result.pairs.reserve(compact.records.size());
  for (const Record& r : compact.records) result.pairs.push_back({r.original_key(), r.value});
  return result;
}

}  // namespace blsm
