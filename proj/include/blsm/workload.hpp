#pragma once

// Seeded workload generators and the three-way agreement check used by the
// benchmark harness, the diff-test subcommand and the test suites.

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "blsm/lsm.hpp"
#include "blsm/oracle.hpp"
#include "blsm/sorted_array.hpp"

namespace blsm {

using Rng = std::mt19937_64;

/// Keys drawn from [first, first + size).
struct KeyAlphabet {
  std::uint32_t first = 0;
  std::uint32_t size = 1;
};

std::uint32_t uniform_key(Rng& rng);
std::uint32_t draw_key(Rng& rng, KeyAlphabet alphabet);

/// b entries over `alphabet`; each is a Delete with probability delete_fraction.
std::vector<UpdateEntry> random_mixed_batch(Rng& rng, std::size_t b, KeyAlphabet alphabet, double delete_fraction);

/// `count` distinct keys uniform over [0, 2^31 - 2].
std::vector<std::uint32_t> distinct_uniform_keys(Rng& rng, std::size_t count);

/// Lookup keys over a slightly widened alphabet so misses occur too.
std::vector<std::uint32_t> random_lookup_keys(Rng& rng, std::size_t count, KeyAlphabet alphabet);

/// Queries with k1 drawn from the alphabet and k2 - k1 uniform in [0, max_span].
std::vector<RangeQuery> random_range_queries(Rng& rng, std::size_t count, KeyAlphabet alphabet,
                                             std::uint32_t max_span);

/// Queries with k1 uniform over the user key domain and k2 = k1 + width,
/// clamped to the largest user key.
std::vector<RangeQuery> fixed_width_queries(Rng& rng, std::size_t count, std::uint32_t width);

struct AgreementReport {
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  std::string first_mismatch;

  bool ok() const { return mismatches == 0; }
};

/// Compares lookup, count and range answers against the oracle, and count
/// against range length.
void check_agreement(const Lsm& lsm, const Oracle& oracle, std::span<const std::uint32_t> keys,
                     std::span<const RangeQuery> queries, AgreementReport& report);
void check_agreement(const SortedArray& sa, const Oracle& oracle, std::span<const std::uint32_t> keys,
                     std::span<const RangeQuery> queries, AgreementReport& report);

}  // namespace blsm
