#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rrb/harness/aggregate.hpp"
#include "rrb/harness/config.hpp"

namespace rrb::harness {

/// Runs job(i) for i in [0, count) on `workers` threads and rethrows the
/// first failure after all workers have joined.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& job);

struct ToyPoint {
  std::uint64_t seed;
  std::uint64_t step;
  std::uint64_t cumulative_samples;
  double x_hat;
  double distance;
};

struct ToyRun {
  std::uint64_t seed;
  double x_hat;
  double distance;
  std::uint64_t total_samples;
  std::vector<ToyPoint> trace;
};

struct ToyResult {
  double x_star;
  std::vector<ToyRun> runs;
};

/// One toy run per seed; the distance is to the minimizer of the smooth
/// function, recomputed from the recommendation after every step.
ToyResult run_toy(const ExperimentSpec& spec);

struct VqaRun {
  unsigned size;
  std::uint64_t seed;
  bool crossed;
  /// Samples drawn when the incumbent first met the threshold, or the total
  /// drawn for a censored run.
  std::uint64_t n_total;
  /// All samples the optimizer drew.
  std::uint64_t samples;
  std::uint64_t oracle_calls;
  std::uint64_t steps;
  double initial_cost;
  double final_cost;
  std::string stop;
  /// Edge count of the sampled graph; zero for pqc.
  std::size_t edges;
  unsigned maxcut;
};

struct VqaAggregate {
  std::string optimizer;
  unsigned size;
  Summary summary;
};

/// The columns of an external runs.csv row that aggregation needs.
struct ImportedRun {
  std::string optimizer;
  unsigned size;
  std::uint64_t seed;
  bool crossed;
  std::uint64_t n_total;
};

/// Reads a runs.csv with at least the columns experiment, optimizer, size,
/// seed, crossed and n_total, in any order. Rows for other experiments are
/// an error. Errors name the file and line.
std::vector<ImportedRun> read_imported_runs(const std::filesystem::path& path, Experiment experiment);

/// One aggregate per (optimizer, size), in order of first appearance.
std::vector<VqaAggregate> aggregate_imported(std::span<const ImportedRun> runs);

struct VqaResult {
  std::vector<VqaRun> runs;
  std::vector<VqaAggregate> aggregates;
};

/// Problem instance and start of one (size, seed) pair. Independent of the
/// optimizer, so every optimizer sees the same graphs and initial points.
VqaRun run_vqa_once(const ExperimentSpec& spec, unsigned size, std::uint64_t seed);
VqaResult run_vqa(const ExperimentSpec& spec);

struct BoundsRow {
  std::string instance;
  double epsilon;
  double delta;
  double lipschitz;
  double lower;
  double upper;
  double trivial;
  double beta_fit;
  double c_fit;
};

std::vector<BoundsRow> run_bounds(const ExperimentSpec& spec);

/// %.17g, with "inf" and "nan" spelled out.
std::string format_number(double v);

void write_toy_csv(const std::filesystem::path& dir, const ExperimentSpec& spec, const ToyResult& r);
void write_vqa_csv(const std::filesystem::path& dir, const ExperimentSpec& spec, const VqaResult& r);
void write_bounds_csv(const std::filesystem::path& dir, const std::vector<BoundsRow>& rows);
/// The resolved configuration, pretty-printed with sorted keys.
void write_manifest(const std::filesystem::path& dir, const ExperimentSpec& spec);

/// Runs the experiment and writes its CSVs and manifest under spec.output.
/// Returns the files written.
std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec);

}  // namespace rrb::harness
