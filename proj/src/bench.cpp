#include "blsm/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "blsm/error.hpp"
#include "blsm/lsm.hpp"
#include "blsm/oracle.hpp"
#include "blsm/sorted_array.hpp"
#include "blsm/workload.hpp"

namespace blsm {

const char* to_string(StructureKind kind) { return kind == StructureKind::Lsm ? "lsm" : "sa"; }

const char* to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::Lookup: return "lookup";
    case QueryKind::Count: return "count";
    case QueryKind::Range: return "range";
  }
  return "?";
}

void WorkloadSpec::validate() const {
  const auto fail = [](const std::string& what) { throw Error(Errc::SpecInvalid, what); };
  if (b < 2 || !std::has_single_bit(b)) fail("batch size must be a power of two >= 2");
  if (n == 0 || n % b != 0) fail("total " + std::to_string(n) + " must be a positive multiple of b = " + std::to_string(b));
  if (n > std::size_t{1} << 30) fail("total exceeds the desk-scale limit of 2^30 elements");
  if (!(exist_fraction >= 0.0 && exist_fraction <= 1.0)) fail("exist fraction must lie in [0, 1]");
  if (!(range_l >= 1.0)) fail("expected range L must be >= 1");
  if (!(stale_fraction >= 0.0 && stale_fraction < 1.0)) fail("stale fraction must lie in [0, 1)");
  if (max_queries == 0) fail("max queries must be positive");
  if (max_sampled_r == 0) fail("at least one r value must be sampled");
  if (structures.empty()) fail("no structure selected");
}

std::string format_value(double value) {
  char buf[64];
  if (std::floor(value) == value && std::fabs(value) < 9.0e15) {
    std::snprintf(buf, sizeof buf, "%.0f", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.6f", value);
  }
  return buf;
}

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "experiment,structure,b,r,metric,value\n";
  for (const ExperimentRow& row : rows) {
    out << row.experiment << ',' << row.structure << ',' << row.b << ',' << row.r << ',' << row.metric << ','
        << format_value(row.value) << '\n';
  }
}

double harmonic_mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double inverse_sum = 0.0;
  for (const double v : values) inverse_sum += 1.0 / v;
  return static_cast<double>(values.size()) / inverse_sum;
}

std::uint32_t range_span(double expected_hits, std::size_t resident) {
  const double span = std::ceil(expected_hits * 2147483648.0 / static_cast<double>(resident));
  return static_cast<std::uint32_t>(std::min(span, static_cast<double>(kMaxUserKey)));
}

std::vector<std::uint64_t> sampled_batch_counts(std::uint64_t total_batches, std::size_t max_samples) {
  std::vector<std::uint64_t> out;
  if (total_batches <= max_samples) {
    for (std::uint64_t r = 1; r <= total_batches; ++r) out.push_back(r);
    return out;
  }
  for (std::size_t k = 1; k <= max_samples; ++k) {
    const std::uint64_t r = (total_batches * k + max_samples / 2) / max_samples;
    if (r >= 1 && (out.empty() || out.back() != r)) out.push_back(r);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Keeps checksums exactly representable in a double.
constexpr std::uint64_t kChecksumMask = (std::uint64_t{1} << 52) - 1;

std::vector<UpdateEntry> uniform_inserts(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<UpdateEntry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t key = uniform_key(rng);
    entries.push_back(UpdateEntry::insert(key, static_cast<std::uint32_t>(rng())));
  }
  return entries;
}

std::vector<UpdateEntry> distinct_inserts(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  const auto keys = distinct_uniform_keys(rng, n);
  std::vector<UpdateEntry> entries;
  entries.reserve(n);
  for (const std::uint32_t key : keys) entries.push_back(UpdateEntry::insert(key, static_cast<std::uint32_t>(rng())));
  return entries;
}

struct InsertTrace {
  std::vector<double> seconds;
  std::vector<std::uint64_t> merged;  // per-batch merged_records delta
};

template <typename Structure>
void verify_against_oracle(const Structure& s, const Oracle& oracle, std::uint64_t seed, const std::string& context) {
  Rng rng(seed);
  // Half the probe keys are resident, half uniform.
  std::vector<std::uint32_t> resident;
  resident.reserve(oracle.entries().size());
  for (const auto& [k, e] : oracle.entries()) resident.push_back(k);
  std::vector<std::uint32_t> keys;
  keys.reserve(4096);
  for (std::size_t i = 0; i < 4096; ++i) {
    if (!resident.empty() && i % 2 == 0) {
      keys.push_back(resident[std::uniform_int_distribution<std::size_t>(0, resident.size() - 1)(rng)]);
    } else {
      keys.push_back(uniform_key(rng));
    }
  }
  const auto span = range_span(64.0, std::max<std::size_t>(1, resident.size()));
  const auto queries = random_range_queries(rng, 256, KeyAlphabet{0, kMaxUserKey + 1}, span);

  AgreementReport report;
  check_agreement(s, oracle, keys, queries, report);
  if (!report.ok()) {
    throw Error(Errc::InvariantViolation, context + ": oracle cross-check failed: " + report.first_mismatch);
  }
}

template <typename Structure>
InsertTrace insert_all(Structure& s, std::span<const UpdateEntry> entries, std::size_t b, Oracle& oracle) {
  InsertTrace trace;
  const std::size_t batches = entries.size() / b;
  trace.seconds.reserve(batches);
  trace.merged.reserve(batches);
  for (std::size_t j = 0; j < batches; ++j) {
    const auto batch = entries.subspan(j * b, b);
    const std::uint64_t before = s.stats().merged_records;
    const auto start = Clock::now();
    s.update_batch(batch);
    trace.seconds.push_back(seconds_since(start));
    trace.merged.push_back(s.stats().merged_records - before);
    oracle.apply_batch(batch);
  }
  return trace;
}

std::uint64_t expected_lsm_merge(std::uint64_t r_before, std::size_t b) {
  return 2 * std::uint64_t{b} * ((std::uint64_t{1} << ffz(r_before)) - 1);
}

std::uint64_t expected_sa_merge(std::uint64_t r_before, std::size_t b) {
  return r_before == 0 ? 0 : (r_before + 1) * b;
}

void check_merge_formula(StructureKind kind, const InsertTrace& trace, std::size_t b) {
  for (std::uint64_t j = 0; j < trace.merged.size(); ++j) {
    const std::uint64_t expected = kind == StructureKind::Lsm ? expected_lsm_merge(j, b) : expected_sa_merge(j, b);
    if (trace.merged[j] != expected) {
      throw Error(Errc::InvariantViolation, std::string(to_string(kind)) + " insertion at r = " + std::to_string(j) +
                                                " merged " + std::to_string(trace.merged[j]) + " records, expected " +
                                                std::to_string(expected));
    }
  }
}

InsertTrace run_structure_inserts(StructureKind kind, std::span<const UpdateEntry> entries, std::size_t b,
                                  std::uint64_t seed, std::uint64_t& cumulative_merged) {
  Oracle oracle;
  InsertTrace trace;
  if (kind == StructureKind::Lsm) {
    Lsm lsm(LsmConfig{b});
    trace = insert_all(lsm, entries, b, oracle);
    lsm.check_invariants();
    verify_against_oracle(lsm, oracle, seed, "insert lsm b=" + std::to_string(b));
    cumulative_merged = lsm.stats().merged_records;
  } else {
    SortedArray sa(LsmConfig{b});
    trace = insert_all(sa, entries, b, oracle);
    sa.check_invariants();
    verify_against_oracle(sa, oracle, seed, "insert sa b=" + std::to_string(b));
    cumulative_merged = sa.stats().merged_records;
    const std::uint64_t r = entries.size() / b;
    if (r > 0 && cumulative_merged != b * (r - 1) * (r + 2) / 2) {
      throw Error(Errc::InvariantViolation, "sorted array cumulative merge work breaks b(r-1)(r+2)/2");
    }
  }
  check_merge_formula(kind, trace, b);
  return trace;
}

void check_batch_sizes(const WorkloadSpec& spec, std::span<const std::size_t> batch_sizes) {
  if (batch_sizes.empty()) throw Error(Errc::SpecInvalid, "no batch sizes given");
  for (const std::size_t b : batch_sizes) {
    WorkloadSpec copy = spec;
    copy.b = b;
    copy.validate();
  }
}

}  // namespace

std::vector<ExperimentRow> run_insert_sweep(const WorkloadSpec& spec, std::span<const std::size_t> batch_sizes) {
  check_batch_sizes(spec, batch_sizes);
  const auto entries = uniform_inserts(spec.seed, spec.n);
  std::vector<ExperimentRow> rows;
  for (const std::size_t b : batch_sizes) {
    for (const StructureKind kind : spec.structures) {
      std::uint64_t cumulative = 0;
      const InsertTrace trace = run_structure_inserts(kind, entries, b, spec.seed, cumulative);
      const std::string name = to_string(kind);
      std::vector<double> rates;
      for (std::size_t j = 0; j < trace.seconds.size(); ++j) {
        rows.push_back({"insert-sweep", name, b, j + 1, "batch_ms", trace.seconds[j] * 1e3});
        rows.push_back({"insert-sweep", name, b, j + 1, "batch_merged", static_cast<double>(trace.merged[j])});
        rates.push_back(static_cast<double>(b) / std::max(trace.seconds[j], 1e-9));
      }
      const std::uint64_t r = trace.seconds.size();
      rows.push_back({"insert-sweep", name, b, r, "min_rate", *std::ranges::min_element(rates)});
      rows.push_back({"insert-sweep", name, b, r, "max_rate", *std::ranges::max_element(rates)});
      rows.push_back({"insert-sweep", name, b, r, "hmean_rate", harmonic_mean(rates)});
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_effective_rate(const WorkloadSpec& spec, std::span<const std::size_t> batch_sizes) {
  check_batch_sizes(spec, batch_sizes);
  const auto entries = uniform_inserts(spec.seed, spec.n);
  std::vector<ExperimentRow> rows;
  for (const std::size_t b : batch_sizes) {
    for (const StructureKind kind : spec.structures) {
      std::uint64_t cumulative_total = 0;
      const InsertTrace trace = run_structure_inserts(kind, entries, b, spec.seed, cumulative_total);
      const std::string name = to_string(kind);
      double elapsed = 0.0;
      std::uint64_t merged = 0;
      for (std::size_t j = 0; j < trace.seconds.size(); ++j) {
        elapsed += trace.seconds[j];
        merged += trace.merged[j];
        const double resident = static_cast<double>((j + 1) * b);
        rows.push_back({"effective-rate", name, b, j + 1, "effective_rate", resident / std::max(elapsed, 1e-9)});
        rows.push_back({"effective-rate", name, b, j + 1, "cumulative_merged", static_cast<double>(merged)});
      }
    }
  }
  return rows;
}

namespace {

template <typename Structure>
struct QueryRun {
  std::size_t count = 0;
  double seconds = 0.0;
  std::uint64_t checksum = 0;
  QueryTrace trace;
};

template <typename Structure>
QueryRun<Structure> run_queries(const Structure& s, QueryKind kind, std::span<const std::uint32_t> keys,
                                std::span<const RangeQuery> queries, const Oracle& oracle, bool expect_all_found,
                                const std::string& context) {
  QueryRun<Structure> run;
  const auto fail = [&](const std::string& what) {
    throw Error(Errc::InvariantViolation, context + ": " + what);
  };

  // Warm-up pass doubles as the oracle cross-check; the timed pass follows.
  if (kind == QueryKind::Lookup) {
    const auto results = s.lookup(keys, &run.trace);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (results[i] != oracle.lookup(keys[i])) fail("lookup(" + std::to_string(keys[i]) + ") disagrees with oracle");
      if (expect_all_found && !results[i]) fail("lookup(" + std::to_string(keys[i]) + ") missed a resident key");
      if (results[i]) run.checksum += std::uint64_t{*results[i]} + 1;
    }
    const auto start = Clock::now();
    const auto timed = s.lookup(keys);
    run.seconds = seconds_since(start);
    run.count = keys.size();
    if (timed != results) fail("lookup results differ between passes");
  } else if (kind == QueryKind::Count) {
    const auto results = s.count(queries, &run.trace);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (results[q] != oracle.count(queries[q].k1, queries[q].k2)) {
        fail("count query " + std::to_string(q) + " disagrees with oracle");
      }
      run.checksum += results[q];
    }
    const auto start = Clock::now();
    const auto timed = s.count(queries);
    run.seconds = seconds_since(start);
    run.count = queries.size();
    if (timed != results) fail("count results differ between passes");
  } else {
    const auto results = s.range(queries, &run.trace);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const auto expected = oracle.range(queries[q].k1, queries[q].k2);
      const auto got = results.pairs_of(q);
      if (!std::equal(got.begin(), got.end(), expected.begin(), expected.end())) {
        fail("range query " + std::to_string(q) + " disagrees with oracle");
      }
      for (const KeyValue& kv : got) run.checksum += (std::uint64_t{kv.key} << 20) ^ kv.value;
    }
    const auto start = Clock::now();
    const auto timed = s.range(queries);
    run.seconds = seconds_since(start);
    run.count = queries.size();
    if (timed.offsets != results.offsets || timed.pairs != results.pairs) fail("range results differ between passes");
  }
  run.checksum &= kChecksumMask;
  return run;
}

std::vector<std::uint32_t> lookup_workload(Rng& rng, std::size_t count, double exist_fraction,
                                           std::span<const UpdateEntry> inserted, const Oracle& oracle) {
  std::bernoulli_distribution exists(exist_fraction);
  std::uniform_int_distribution<std::size_t> pick(0, inserted.size() - 1);
  std::vector<std::uint32_t> keys;
  keys.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (exists(rng)) {
      keys.push_back(inserted[pick(rng)].key);
    } else {
      std::uint32_t k = uniform_key(rng);
      while (oracle.entries().contains(k)) k = uniform_key(rng);
      keys.push_back(k);
    }
  }
  return keys;
}

template <typename Structure>
void query_bench_for(Structure& s, StructureKind structure_kind, const WorkloadSpec& spec, QueryKind kind,
                     std::vector<ExperimentRow>& rows) {
  const std::string experiment = std::string(to_string(kind)) + "-bench";
  const std::string name = to_string(structure_kind);
  const auto entries = distinct_inserts(spec.seed, spec.n);
  const std::uint64_t total_batches = spec.n / spec.b;
  const auto samples = sampled_batch_counts(total_batches, spec.max_sampled_r);

  Oracle oracle;
  std::uint64_t r = 0;
  std::vector<double> rates;
  double candidate_sum = 0.0;
  std::size_t query_sum = 0;
  for (const std::uint64_t target : samples) {
    while (r < target) {
      const auto batch = std::span<const UpdateEntry>(entries).subspan(r * spec.b, spec.b);
      s.update_batch(batch);
      oracle.apply_batch(batch);
      ++r;
    }
    const std::size_t resident = static_cast<std::size_t>(r) * spec.b;
    const std::size_t count = std::min(resident, spec.max_queries);
    Rng rng(spec.seed ^ (0x9e3779b97f4a7c15ull * (r + 1)));

    std::vector<std::uint32_t> keys;
    std::vector<RangeQuery> queries;
    if (kind == QueryKind::Lookup) {
      keys = lookup_workload(rng, count, spec.exist_fraction,
                             std::span<const UpdateEntry>(entries).subspan(0, resident), oracle);
    } else {
      queries = fixed_width_queries(rng, count, range_span(spec.range_l, resident));
    }

    const auto run = run_queries(s, kind, keys, queries, oracle, spec.exist_fraction == 1.0,
                                 experiment + " " + name + " b=" + std::to_string(spec.b) + " r=" + std::to_string(r));
    const double rate = static_cast<double>(run.count) / std::max(run.seconds, 1e-9);
    rates.push_back(rate);

    std::size_t full_levels = 1;
    if constexpr (std::is_same_v<Structure, Lsm>) full_levels = s.full_level_count();
    rows.push_back({experiment, name, spec.b, r, "rate", rate});
    rows.push_back({experiment, name, spec.b, r, "full_levels", static_cast<double>(full_levels)});
    rows.push_back({experiment, name, spec.b, r, "checksum", static_cast<double>(run.checksum)});
    if (kind == QueryKind::Lookup) {
      rows.push_back({experiment, name, spec.b, r, "probes_per_query",
                      static_cast<double>(run.trace.probes) / static_cast<double>(run.count)});
    } else {
      const double mean = static_cast<double>(run.trace.candidates) / static_cast<double>(run.count);
      rows.push_back({experiment, name, spec.b, r, "mean_candidates", mean});
      candidate_sum += static_cast<double>(run.trace.candidates);
      query_sum += run.count;
    }
  }

  rows.push_back({experiment, name, spec.b, r, "min_rate", *std::ranges::min_element(rates)});
  rows.push_back({experiment, name, spec.b, r, "max_rate", *std::ranges::max_element(rates)});
  rows.push_back({experiment, name, spec.b, r, "hmean_rate", harmonic_mean(rates)});
  if (kind != QueryKind::Lookup) {
    rows.push_back({experiment, name, spec.b, r, "overall_mean_candidates", candidate_sum / static_cast<double>(query_sum)});
  }
}

}  // namespace

std::vector<ExperimentRow> run_query_bench(const WorkloadSpec& spec, QueryKind kind) {
  spec.validate();
  std::vector<ExperimentRow> rows;
  for (const StructureKind structure : spec.structures) {
    if (structure == StructureKind::Lsm) {
      Lsm lsm(LsmConfig{spec.b});
      query_bench_for(lsm, structure, spec, kind, rows);
    } else {
      SortedArray sa(LsmConfig{spec.b});
      query_bench_for(sa, structure, spec, kind, rows);
    }
  }
  return rows;
}

std::vector<ExperimentRow> run_cleanup_bench(const WorkloadSpec& spec) {
  spec.validate();
  const std::size_t b = spec.b;
  const auto entries = distinct_inserts(spec.seed, spec.n);
  Lsm lsm(LsmConfig{b});
  Oracle oracle;
  for (std::size_t j = 0; j < spec.n / b; ++j) {
    const auto batch = std::span<const UpdateEntry>(entries).subspan(j * b, b);
    lsm.update_batch(batch);
    oracle.apply_batch(batch);
  }

  // Make a fraction of the keys stale: even picks are deleted, odd picks
  // overwritten with a fresh value.
  Rng rng(spec.seed + 1);
  std::vector<std::size_t> order(spec.n);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::ranges::shuffle(order, rng);
  const auto stale = static_cast<std::size_t>(std::llround(spec.stale_fraction * static_cast<double>(spec.n)));
  std::vector<UpdateEntry> updates;
  updates.reserve(stale);
  for (std::size_t i = 0; i < stale; ++i) {
    const std::uint32_t key = entries[order[i]].key;
    updates.push_back(i % 2 == 0 ? UpdateEntry::erase(key)
                                 : UpdateEntry::insert(key, static_cast<std::uint32_t>(rng())));
  }
  for (std::size_t first = 0; first < updates.size(); first += b) {
    const auto chunk = std::span<const UpdateEntry>(updates).subspan(first, std::min(b, updates.size() - first));
    const auto batch = chunk.size() == b ? std::vector<UpdateEntry>(chunk.begin(), chunk.end())
                                         : pad_partial_batch(chunk, b);
    lsm.update_batch(batch);
    oracle.apply_batch(batch);
  }

  const std::size_t query_count = std::min(spec.n, spec.max_queries);
  Rng query_rng(spec.seed + 2);
  const auto keys = lookup_workload(query_rng, query_count, 0.5, entries, oracle);
  const auto queries = fixed_width_queries(query_rng, std::min<std::size_t>(query_count, 4096),
                                           range_span(spec.range_l, spec.n));

  const std::string context = "cleanup-bench b=" + std::to_string(b);
  const auto before = run_queries(lsm, QueryKind::Lookup, keys, {}, oracle, false, context + " before");
  const auto lookups_before = lsm.lookup(keys);
  const auto counts_before = lsm.count(queries);
  const auto ranges_before = lsm.range(queries);
  const std::uint64_t r_before = lsm.resident_batches();
  const std::size_t levels_before = lsm.full_level_count();
  const std::size_t records_before = lsm.resident_records();

  auto start = Clock::now();
  lsm.cleanup();
  const double cleanup_seconds = seconds_since(start);
  lsm.check_invariants();

  const auto after = run_queries(lsm, QueryKind::Lookup, keys, {}, oracle, false, context + " after");
  const auto ranges_after = lsm.range(queries);
  if (lsm.lookup(keys) != lookups_before || lsm.count(queries) != counts_before ||
      ranges_after.offsets != ranges_before.offsets || ranges_after.pairs != ranges_before.pairs) {
    throw Error(Errc::InvariantViolation, context + ": query results changed across cleanup");
  }

  // Rebuild the surviving set from scratch for comparison.
  std::vector<UpdateEntry> survivors;
  for (const KeyValue& kv : oracle.live_pairs()) survivors.push_back(UpdateEntry::insert(kv.key, kv.value));
  if (survivors.size() % b != 0) {
    const std::size_t full = survivors.size() / b * b;
    const auto padded = pad_partial_batch(std::span<const UpdateEntry>(survivors).subspan(full), b);
    survivors.resize(full);
    survivors.insert(survivors.end(), padded.begin(), padded.end());
  }
  start = Clock::now();
  const Lsm rebuilt = bulk_build(survivors, LsmConfig{b});
  const double rebuild_seconds = seconds_since(start);
  if (rebuilt.lookup(keys) != lookups_before) {
    throw Error(Errc::InvariantViolation, context + ": rebuilt structure disagrees with the original");
  }

  std::size_t placebos = 0;
  for (const auto level : lsm.full_levels()) {
    placebos += static_cast<std::size_t>(std::ranges::count_if(level, [](const Record& rec) { return rec.is_placebo(); }));
  }

  std::vector<ExperimentRow> rows;
  const std::uint64_t r_after = lsm.resident_batches();
  const auto row = [&](std::uint64_t r, const char* metric, double value) {
    rows.push_back({"cleanup-bench", "lsm", b, r, metric, value});
  };
  row(r_before, "stale_fraction", spec.stale_fraction);
  row(r_before, "records_before", static_cast<double>(records_before));
  row(r_before, "full_levels_before", static_cast<double>(levels_before));
  row(r_after, "records_after", static_cast<double>(lsm.resident_records()));
  row(r_after, "full_levels_after", static_cast<double>(lsm.full_level_count()));
  row(r_after, "placebos", static_cast<double>(placebos));
  row(r_after, "cleanup_ms", cleanup_seconds * 1e3);
  row(r_after, "rebuild_ms", rebuild_seconds * 1e3);
  row(r_before, "query_before_ms", before.seconds * 1e3);
  row(r_after, "query_after_ms", after.seconds * 1e3);
  row(r_after, "query_checksum", static_cast<double>(after.checksum));
  return rows;
}

DiffTestReport run_diff_test(const DiffTestOptions& options) {
  LsmConfig{options.b}.validate();
  DiffTestReport report;
  Rng rng(options.seed);
  const std::uint32_t b = static_cast<std::uint32_t>(options.b);
  const std::uint32_t alphabet_sizes[] = {std::max(2u, b / 8), std::max(2u, b / 2), 2 * b, 8 * b};

  const auto fail = [&report](std::size_t& counter, const std::string& what) {
    if (counter++ == 0 && report.first_failure.empty()) report.first_failure = what;
  };

  for (std::size_t s = 0; s < options.schedules; ++s) {
    const std::size_t batches = std::uniform_int_distribution<std::size_t>(1, options.max_batches)(rng);
    KeyAlphabet alphabet;
    alphabet.size = alphabet_sizes[std::uniform_int_distribution<int>(0, 3)(rng)];
    // A quarter of the schedules live at the top of the key domain.
    alphabet.first = std::bernoulli_distribution(0.25)(rng) ? kMaxUserKey - alphabet.size + 1
                                                            : std::uniform_int_distribution<std::uint32_t>(0, 1u << 20)(rng);
    const double delete_fraction = std::uniform_real_distribution<double>(0.0, 0.6)(rng);

    Lsm lsm(LsmConfig{options.b});
    SortedArray sa(LsmConfig{options.b});
    Oracle oracle;
    for (std::size_t j = 0; j < batches; ++j) {
      const auto batch = random_mixed_batch(rng, options.b, alphabet, delete_fraction);
      const std::uint64_t r_before = lsm.resident_batches();
      const std::uint64_t merged_before = lsm.stats().merged_records;
      lsm.update_batch(batch);
      sa.update_batch(batch);
      oracle.apply_batch(batch);
      ++report.batches;

      if (lsm.stats().merged_records - merged_before != expected_lsm_merge(r_before, options.b)) {
        fail(report.merge_formula_failures, "merge formula broken at r = " + std::to_string(r_before));
      }
      if (options.check_occupancy) {
        for (std::size_t i = 0; i < std::max<std::size_t>(lsm.level_slots(), 64); ++i) {
          const bool bit = i < 64 && ((lsm.resident_batches() >> i) & 1u) != 0;
          if (lsm.is_full(i) != bit) {
            fail(report.occupancy_failures, "level " + std::to_string(i) + " occupancy disagrees with r = " +
                                                std::to_string(lsm.resident_batches()));
            break;
          }
        }
      }

      const auto keys = random_lookup_keys(rng, options.lookups, alphabet);
      const auto queries = random_range_queries(rng, options.counts, alphabet, std::max(1u, alphabet.size / 8));
      AgreementReport agreement;
      check_agreement(lsm, oracle, keys, queries, agreement);
      check_agreement(sa, oracle, keys, queries, agreement);
      report.checks += agreement.checks;
      if (!agreement.ok()) {
        if (report.mismatches == 0 && report.first_failure.empty()) {
          report.first_failure = "schedule " + std::to_string(s) + " batch " + std::to_string(j) + ": " +
                                 agreement.first_mismatch;
        }
        report.mismatches += agreement.mismatches;
      }
    }
    ++report.schedules;
  }
  return report;
}

}  // namespace blsm
