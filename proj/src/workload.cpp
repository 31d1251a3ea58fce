#include "blsm/workload.hpp"

#include <algorithm>
#include <unordered_set>

namespace blsm {

std::uint32_t uniform_key(Rng& rng) {
  return std::uniform_int_distribution<std::uint32_t>(0, kMaxUserKey)(rng);
}

std::uint32_t draw_key(Rng& rng, KeyAlphabet alphabet) {
  return alphabet.first + std::uniform_int_distribution<std::uint32_t>(0, alphabet.size - 1)(rng);
}

std::vector<UpdateEntry> random_mixed_batch(Rng& rng, std::size_t b, KeyAlphabet alphabet, double delete_fraction) {
  std::bernoulli_distribution is_delete(delete_fraction);
  std::vector<UpdateEntry> batch;
  batch.reserve(b);
  for (std::size_t i = 0; i < b; ++i) {
    const std::uint32_t key = draw_key(rng, alphabet);
    if (is_delete(rng)) {
      batch.push_back(UpdateEntry::erase(key));
    } else {
      batch.push_back(UpdateEntry::insert(key, static_cast<std::uint32_t>(rng())));
    }
  }
  return batch;
}

std::vector<std::uint32_t> distinct_uniform_keys(Rng& rng, std::size_t count) {
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(count * 2);
  std::vector<std::uint32_t> keys;
  keys.reserve(count);
  while (keys.size() < count) {
    const std::uint32_t k = uniform_key(rng);
    if (seen.insert(k).second) keys.push_back(k);
  }
  return keys;
}

std::vector<std::uint32_t> random_lookup_keys(Rng& rng, std::size_t count, KeyAlphabet alphabet) {
  const std::uint32_t slack = std::max<std::uint32_t>(1, alphabet.size / 8);
  const std::uint32_t first = alphabet.first >= slack ? alphabet.first - slack : 0;
  const std::uint32_t last =
      std::min<std::uint64_t>(kMaxUserKey, std::uint64_t{alphabet.first} + alphabet.size - 1 + slack);
  std::uniform_int_distribution<std::uint32_t> dist(first, last);
  std::vector<std::uint32_t> keys(count);
  for (auto& k : keys) k = dist(rng);
  return keys;
}

std::vector<RangeQuery> random_range_queries(Rng& rng, std::size_t count, KeyAlphabet alphabet,
                                             std::uint32_t max_span) {
  std::uniform_int_distribution<std::uint32_t> span(0, max_span);
  std::vector<RangeQuery> queries(count);
  for (auto& q : queries) {
    q.k1 = draw_key(rng, alphabet);
    q.k2 = static_cast<std::uint32_t>(std::min<std::uint64_t>(kMaxUserKey, std::uint64_t{q.k1} + span(rng)));
  }
  return queries;
}

std::vector<RangeQuery> fixed_width_queries(Rng& rng, std::size_t count, std::uint32_t width) {
  std::vector<RangeQuery> queries(count);
  for (auto& q : queries) {
    q.k1 = uniform_key(rng);
    q.k2 = static_cast<std::uint32_t>(std::min<std::uint64_t>(kMaxUserKey, std::uint64_t{q.k1} + width));
  }
  return queries;
}

namespace {

std::string describe(const LookupResult& r) {
  return r ? "Found(" + std::to_string(*r) + ")" : std::string("NotFound");
}

void note(AgreementReport& report, const std::string& what) {
  if (report.mismatches++ == 0) report.first_mismatch = what;
}

template <typename Structure>
void compare_one(const char* name, const Structure& s, const Oracle& oracle, std::span<const std::uint32_t> keys,
                 std::span<const RangeQuery> queries, AgreementReport& report) {
  const auto found = s.lookup(keys);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    ++report.checks;
    const auto expected = oracle.lookup(keys[i]);
    if (found[i] != expected) {
      note(report, std::string(name) + " lookup(" + std::to_string(keys[i]) + ") = " + describe(found[i]) +
                       ", oracle " + describe(expected));
    }
  }

  const auto counts = s.count(queries);
  const auto ranged = s.range(queries);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    report.checks += 3;
    const auto expected = oracle.range(queries[q].k1, queries[q].k2);
    const auto got = ranged.pairs_of(q);
    const auto label = std::string(name) + " [" + std::to_string(queries[q].k1) + ", " +
                       std::to_string(queries[q].k2) + "]";
    if (counts[q] != expected.size()) {
      note(report, label + " count " + std::to_string(counts[q]) + ", oracle " + std::to_string(expected.size()));
    }
    if (!std::equal(got.begin(), got.end(), expected.begin(), expected.end())) {
      note(report, label + " range differs from oracle (" + std::to_string(got.size()) + " vs " +
                       std::to_string(expected.size()) + " pairs)");
    }
    if (counts[q] != got.size()) {
      note(report, label + " count " + std::to_string(counts[q]) + " but range returned " +
                       std::to_string(got.size()));
    }
  }
}

}  // namespace

void check_agreement(const Lsm& lsm, const Oracle& oracle, std::span<const std::uint32_t> keys,
                     std::span<const RangeQuery> queries, AgreementReport& report) {
  compare_one("lsm", lsm, oracle, keys, queries, report);
}

void check_agreement(const SortedArray& sa, const Oracle& oracle, std::span<const std::uint32_t> keys,
                     std::span<const RangeQuery> queries, AgreementReport& report) {
  compare_one("sa", sa, oracle, keys, queries, report);
}

}  // namespace blsm
