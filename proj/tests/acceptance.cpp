// Acceptance run: prints one PASS/FAIL line per criterion, exits non-zero if
// any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "blsm/bench.hpp"
#include "blsm/lsm.hpp"
#include "blsm/oracle.hpp"
#include "blsm/sorted_array.hpp"
#include "blsm/workload.hpp"

using namespace blsm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    outcome = body();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!outcome.pass) ++failures;
  std::printf("%s %d %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", id, name, outcome.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string num(double v) { return format_value(v); }

std::uint64_t ceil_log2(std::uint64_t x) { return static_cast<std::uint64_t>(std::bit_width(x - 1)); }

// Inserts r batches of b distinct-ish uniform keys, checking every per-batch
// merge delta against 2b(2^ffz(r) - 1). Returns cumulative merged_records.
std::uint64_t insert_and_check(std::size_t b, std::uint64_t batches, std::uint64_t seed, bool& formula_ok) {
  Lsm lsm(LsmConfig{b});
  Rng rng(seed);
  formula_ok = true;
  for (std::uint64_t r = 0; r < batches; ++r) {
    const auto batch = random_mixed_batch(rng, b, KeyAlphabet{0, kMaxUserKey + 1}, 0.0);
    const auto before = lsm.stats().merged_records;
    lsm.update_batch(batch);
    if (lsm.stats().merged_records - before != 2 * b * ((std::uint64_t{1} << ffz(r)) - 1)) formula_ok = false;
  }
  return lsm.stats().merged_records;
}

double metric(const std::vector<ExperimentRow>& rows, const std::string& structure, const std::string& name) {
  for (const auto& row : rows) {
    if (row.structure == structure && row.metric == name) return row.value;
  }
  throw std::runtime_error("missing metric " + name);
}

}  // namespace

int main() {
  DiffTestReport diff;
  report(1, "differential suite", [&] {
    DiffTestOptions options;  // 200 schedules, b = 256, 1-64 batches, 1000 lookups, 100 count + 100 range
    diff = run_diff_test(options);
    return Outcome{diff.mismatches == 0, std::to_string(diff.schedules) + " schedules, " +
                                             std::to_string(diff.batches) + " batches, " +
                                             std::to_string(diff.checks) + " checks, " +
                                             std::to_string(diff.mismatches) + " mismatches" +
                                             (diff.first_failure.empty() ? "" : "; first: " + diff.first_failure)};
  });

  report(2, "occupancy law", [&] {
    return Outcome{diff.batches > 0 && diff.occupancy_failures == 0,
                   std::to_string(diff.batches) + " mutations checked, " + std::to_string(diff.occupancy_failures) +
                       " failures"};
  });

  std::uint64_t merged_1024 = 0;
  bool formula_1024 = false;
  report(3, "merge-work formula", [&] {
    merged_1024 = insert_and_check(1024, 1024, 3, formula_1024);
    const bool ok = diff.batches > 0 && diff.merge_formula_failures == 0 && formula_1024;
    return Outcome{ok, std::to_string(diff.batches) + " mixed insertions (b=256) and 1024 insertions (b=1024) " +
                           (ok ? "all match" : "mismatch found")};
  });

  report(4, "amortized bound", [&] {
    const std::uint64_t b = 1024, r = 1024;
    const std::uint64_t bound = 2 * b * r * ceil_log2(r + 1);
    const std::uint64_t stated = (std::uint64_t{1} << 21) * 10 * 2;
    const bool ok = merged_1024 <= bound && merged_1024 <= stated;
    return Outcome{ok, "merged " + std::to_string(merged_1024) + " <= 2 b r ceil(log2(r+1)) = " +
                           std::to_string(bound) + " (and <= 2^21*10*2 = " + std::to_string(stated) + ")"};
  });

  report(5, "work ratio vs sorted array", [&] {
    const std::size_t b = 1024;
    const std::uint64_t n = std::uint64_t{1} << 18, r = n / b;
    bool formula_ok = false;
    const std::uint64_t lsm_merged = insert_and_check(b, r, 5, formula_ok);

    SortedArray sa(LsmConfig{b});
    Rng rng(5);
    for (std::uint64_t j = 0; j < r; ++j) sa.update_batch(random_mixed_batch(rng, b, KeyAlphabet{0, kMaxUserKey + 1}, 0.0));
    const std::uint64_t sa_merged = sa.stats().merged_records;

    const std::uint64_t lsm_bound = 2 * n * ceil_log2(r);
    const std::uint64_t sa_expected = b * (r - 1) * (r + 2) / 2;
    const double ratio = static_cast<double>(sa_merged) / static_cast<double>(lsm_merged);
    const bool ok = formula_ok && lsm_merged <= lsm_bound && sa_merged == sa_expected && ratio >= 4.0;
    return Outcome{ok, "lsm " + std::to_string(lsm_merged) + " <= " + std::to_string(lsm_bound) + ", sa " +
                           std::to_string(sa_merged) + " == " + std::to_string(sa_expected) + ", ratio " + num(ratio)};
  });

  report(6, "cleanup transparency", [&] {
    Rng rng(6);
    std::size_t problems = 0, checks = 0;
    std::string first;
    const auto fail = [&](const std::string& what) {
      if (problems++ == 0) first = what;
    };
    for (int s = 0; s < 50; ++s) {
      const std::size_t b = std::size_t{4} << (rng() % 7);  // 4 .. 256
      const KeyAlphabet alphabet{static_cast<std::uint32_t>(rng() % (1u << 20)),
                                 static_cast<std::uint32_t>(std::max<std::size_t>(2, b / 2 << (rng() % 5)))};
      const double delete_fraction = std::uniform_real_distribution<double>(0.3, 0.6)(rng);
      const std::size_t batches = 1 + rng() % 64;
      Lsm lsm(LsmConfig{b});
      Oracle oracle;
      for (std::size_t j = 0; j < batches; ++j) {
        const auto batch = random_mixed_batch(rng, b, alphabet, delete_fraction);
        lsm.update_batch(batch);
        oracle.apply_batch(batch);
      }
      const auto keys = random_lookup_keys(rng, 1000, alphabet);
      const auto queries = random_range_queries(rng, 200, alphabet, std::max(1u, alphabet.size / 8));
      const auto lookups = lsm.lookup(keys);
      const auto counts = lsm.count(queries);
      const auto ranged = lsm.range(queries);
      const std::string where = "schedule " + std::to_string(s);

      lsm.cleanup();
      lsm.check_invariants();
      ++checks;
      if (lsm.lookup(keys) != lookups) fail(where + ": lookups changed");
      if (lsm.count(queries) != counts) fail(where + ": counts changed");
      const auto ranged_after = lsm.range(queries);
      if (ranged_after.offsets != ranged.offsets || ranged_after.pairs != ranged.pairs) fail(where + ": ranges changed");
      AgreementReport agreement;
      check_agreement(lsm, oracle, keys, queries, agreement);
      if (!agreement.ok()) fail(where + ": " + agreement.first_mismatch);

      std::vector<std::uint32_t> seen;
      std::size_t records = 0;
      for (const auto level : lsm.full_levels()) {
        records += level.size();
        for (const Record& rec : level) {
          if (rec.is_placebo()) continue;
          if (rec.is_tombstone()) fail(where + ": tombstone survived cleanup");
          seen.push_back(rec.original_key());
        }
      }
      std::ranges::sort(seen);
      if (std::ranges::adjacent_find(seen) != seen.end()) fail(where + ": duplicate original key after cleanup");
      if (records % b != 0 || records != lsm.resident_records()) fail(where + ": record total not a multiple of b");

      std::vector<std::vector<Record>> once;
      for (const auto level : lsm.full_levels()) once.emplace_back(level.begin(), level.end());
      const auto r_once = lsm.resident_batches();
      lsm.cleanup();
      std::vector<std::vector<Record>> twice;
      for (const auto level : lsm.full_levels()) twice.emplace_back(level.begin(), level.end());
      if (lsm.resident_batches() != r_once || twice != once) fail(where + ": second cleanup changed the structure");
    }
    return Outcome{problems == 0, std::to_string(checks) + " schedules, " + std::to_string(problems) + " problems" +
                                      (first.empty() ? "" : "; first: " + first)};
  });

  report(7, "count/range agreement", [&] {
    Rng rng(7);
    std::size_t queries_checked = 0, disagreements = 0;
    while (queries_checked < 10000) {
      const std::size_t b = std::size_t{2} << (rng() % 8);
      const KeyAlphabet alphabet{static_cast<std::uint32_t>(rng() % 5000), static_cast<std::uint32_t>(2 + rng() % 4000)};
      Lsm lsm(LsmConfig{b});
      const std::size_t batches = 1 + rng() % 40;
      for (std::size_t j = 0; j < batches; ++j) lsm.update_batch(random_mixed_batch(rng, b, alphabet, 0.3));
      if (rng() % 4 == 0) lsm.cleanup();
      const auto queries = random_range_queries(rng, 100, alphabet, alphabet.size / 2);
      const auto counts = lsm.count(queries);
      const auto ranged = lsm.range(queries);
      for (std::size_t q = 0; q < queries.size(); ++q) {
        if (counts[q] != ranged.pairs_of(q).size()) ++disagreements;
      }
      queries_checked += queries.size();
    }
    return Outcome{disagreements == 0,
                   std::to_string(queries_checked) + " queries, " + std::to_string(disagreements) + " disagreements"};
  });

  report(8, "L-scaling", [&] {
    WorkloadSpec spec;
    spec.n = std::size_t{1} << 20;
    spec.b = std::size_t{1} << 16;
    spec.structures = {StructureKind::Lsm};
    spec.max_sampled_r = 1;  // the full structure only
    spec.max_queries = std::size_t{1} << 12;
    spec.range_l = 8.0;
    const double small = metric(run_query_bench(spec, QueryKind::Count), "lsm", "overall_mean_candidates");
    spec.range_l = 1024.0;
    const double large = metric(run_query_bench(spec, QueryKind::Count), "lsm", "overall_mean_candidates");
    const double ratio = large / small;
    return Outcome{std::fabs(ratio - 128.0) <= 0.2 * 128.0,
                   "mean candidates L=8: " + num(small) + ", L=1024: " + num(large) + ", ratio " + num(ratio) +
                       " (target 128 +-20%)"};
  });

  report(9, "throughput trends", [&] {
    WorkloadSpec spec;
    spec.n = std::size_t{1} << 20;
    const auto insert_rows = run_insert_sweep(spec, std::vector<std::size_t>{std::size_t{1} << 12});
    const double lsm_insert = metric(insert_rows, "lsm", "hmean_rate");
    const double sa_insert = metric(insert_rows, "sa", "hmean_rate");

    // Every r in 1..n/b is visited so each batch size is averaged over its
    // whole sequence of level configurations.
    spec.structures = {StructureKind::Lsm};
    spec.max_queries = std::size_t{1} << 13;
    spec.max_sampled_r = 1024;
    spec.b = std::size_t{1} << 16;
    const double lookup_large_b = metric(run_query_bench(spec, QueryKind::Lookup), "lsm", "hmean_rate");
    spec.b = std::size_t{1} << 10;
    const double lookup_small_b = metric(run_query_bench(spec, QueryKind::Lookup), "lsm", "hmean_rate");

    const bool ok = lsm_insert > sa_insert && lookup_large_b > lookup_small_b;
    return Outcome{ok, "insert hmean b=2^12: lsm " + num(std::round(lsm_insert)) + "/s vs sa " +
                           num(std::round(sa_insert)) + "/s; lookup hmean lsm b=2^16 " +
                           num(std::round(lookup_large_b)) + "/s vs b=2^10 " + num(std::round(lookup_small_b)) + "/s"};
  });

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
