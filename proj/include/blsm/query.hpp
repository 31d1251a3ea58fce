#pragma once

// Stale-tolerant query pipeline over a stack of sorted levels. Levels are
// passed most recent first; each must satisfy the level ordering invariant
// (sorted by original key, equal keys most recent first, same-batch
// tombstones ahead of regulars).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "blsm/record.hpp"

namespace blsm {

/// Value of the live record, or nullopt for keys never inserted or deleted.
using LookupResult = std::optional<std::uint32_t>;

/// Work accounting for a query call. Counts accumulate across calls.
struct QueryTrace {
  std::size_t probes = 0;      // binary-search comparisons
  std::size_t candidates = 0;  // records gathered by count/range stage 3
};

struct RangeResult {
  /// Start of each query's pairs inside `pairs`.
  std::vector<std::size_t> offsets;
  /// Valid pairs of every query, each query's run sorted by key.
  std::vector<KeyValue> pairs;

  std::span<const KeyValue> pairs_of(std::size_t query) const;
};

using LevelStack = std::span<const std::span<const Record>>;

std::vector<LookupResult> lookup_levels(LevelStack levels, std::span<const std::uint32_t> keys,
                                        QueryTrace* trace = nullptr);

std::vector<std::size_t> count_levels(LevelStack levels, std::span<const RangeQuery> queries,
                                      QueryTrace* trace = nullptr);

RangeResult range_levels(LevelStack levels, std::span<const RangeQuery> queries, QueryTrace* trace = nullptr);

}  // namespace blsm
