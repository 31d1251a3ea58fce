#pragma once

// Desk-scale experiment drivers. Every driver cross-checks the structure
// against the oracle (or a formula) before it emits timing rows, and every
// run is reproducible from (seed, spec) apart from the timing values.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace blsm {

enum class StructureKind { Lsm, SortedArray };
enum class QueryKind { Lookup, Count, Range };

const char* to_string(StructureKind kind);
const char* to_string(QueryKind kind);

struct WorkloadSpec {
  std::uint64_t seed = 1;
  std::size_t n = std::size_t{1} << 20;
  std::size_t b = std::size_t{1} << 16;
  double exist_fraction = 1.0;
  double range_l = 8.0;
  double stale_fraction = 0.0;
  /// Queries per configuration: min(resident elements, max_queries).
  std::size_t max_queries = std::size_t{1} << 16;
  /// Query benches visit every r in [1, n/b] when n/b is at most this,
  /// otherwise this many evenly spaced r values.
  std::size_t max_sampled_r = 64;
  std::vector<StructureKind> structures = {StructureKind::Lsm, StructureKind::SortedArray};

  /// Throws Error(SpecInvalid).
  void validate() const;
};

struct ExperimentRow {
  std::string experiment;
  std::string structure;
  std::size_t b = 0;
  std::uint64_t r = 0;
  std::string metric;
  double value = 0.0;
};

void write_csv(std::ostream& out, std::span<const ExperimentRow> rows);
std::string format_value(double value);

/// Harmonic mean of positive values; 0 for an empty input.
double harmonic_mean(std::span<const double> values);

/// Width of a range query whose expected number of resident uniform keys is
/// `expected_hits` when `resident` keys are spread over [0, 2^31).
std::uint32_t range_span(double expected_hits, std::size_t resident);

/// The r values a query bench visits for `total_batches` batches.
std::vector<std::uint64_t> sampled_batch_counts(std::uint64_t total_batches, std::size_t max_samples);

/// Per batch size: insert n/b batches into each requested structure, emitting
/// batch_ms and batch_merged per batch plus min_rate, max_rate, hmean_rate.
std::vector<ExperimentRow> run_insert_sweep(const WorkloadSpec& spec, std::span<const std::size_t> batch_sizes);

/// Per batch size: effective_rate (resident / cumulative seconds) and
/// cumulative_merged after every batch.
std::vector<ExperimentRow> run_effective_rate(const WorkloadSpec& spec, std::span<const std::size_t> batch_sizes);

/// Builds every sampled r incrementally and times `kind` queries at each.
std::vector<ExperimentRow> run_query_bench(const WorkloadSpec& spec, QueryKind kind);

/// Cleanup vs. rebuild-from-scratch, and query time before vs. after cleanup,
/// on an LSM where spec.stale_fraction of the keys were deleted or overwritten.
std::vector<ExperimentRow> run_cleanup_bench(const WorkloadSpec& spec);

struct DiffTestOptions {
  std::uint64_t seed = 1;
  std::size_t b = 256;
  std::size_t schedules = 200;
  std::size_t max_batches = 64;
  std::size_t lookups = 1000;
  std::size_t counts = 100;  // also the number of range queries
  bool check_occupancy = true;
};

struct DiffTestReport {
  std::size_t schedules = 0;
  std::size_t batches = 0;
  std::size_t checks = 0;
  std::size_t mismatches = 0;
  std::size_t occupancy_failures = 0;
  std::size_t merge_formula_failures = 0;
  std::string first_failure;

  bool ok() const { return mismatches == 0 && occupancy_failures == 0 && merge_formula_failures == 0; }
};

/// Random mixed schedules over duplicate-heavy alphabets; after every batch
/// the LSM, the sorted array and the oracle must agree exactly.
DiffTestReport run_diff_test(const DiffTestOptions& options);

}  // namespace blsm
