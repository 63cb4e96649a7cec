#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rrb/baselines/powell_brent.hpp"
#include "rrb/baselines/spsa.hpp"
#include "rrb/line/drivers.hpp"
#include "rrb/rr/reject_refine.hpp"

namespace rrb::harness {

enum class Experiment { toy, pqc, qaoa, bounds };
enum class Optimizer { rr, rr_powell, rr_reject, rr_aim, spsa, powell_brent };

std::string to_string(Experiment e);
std::string to_string(Optimizer o);
Experiment parse_experiment(const std::string& name);
Optimizer parse_optimizer(const std::string& name);

struct ToySettings {
  double sigma = 1.0;
  double start = 0.5;
};

struct QaoaSettings {
  unsigned layers = 2;
  double edge_prob = 0.5;
};

struct BoundsSettings {
  /// Instance files, resolved against the spec file's directory.
  std::vector<std::string> instances;
  double epsilon = 1.0 / 32.0;
  double delta = 0.1;
  /// Zero means the steepest slope of each instance.
  double lipschitz = 0.0;
  /// Radii for the zooming-dimension fit.
  std::vector<double> radii = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
};

/// Initial parameters of a pqc or qaoa run.
enum class StartPoint { uniform, zero };

/// Fully resolved experiment description.
struct ExperimentSpec {
  Experiment experiment = Experiment::toy;
  Optimizer optimizer = Optimizer::rr;
  std::vector<unsigned> sizes;
  std::vector<std::uint64_t> seeds;
  double threshold = 0.2;
  std::uint64_t budget = 10'000'000;
  std::string output = "results";
  /// Parallel (size, seed) runs; output does not depend on it.
  unsigned workers = 1;
  StartPoint start = StartPoint::uniform;
  /// runs.csv files produced elsewhere (for example by an external
  /// optimizer); their rows are aggregated next to the native ones.
  std::vector<std::string> import_runs;

  rr::RRConfig rr;
  line::DriverConfig driver;
  baselines::SpsaConfig spsa;
  baselines::PowellBrentConfig powell_brent;
  ToySettings toy;
  QaoaSettings qaoa;
  BoundsSettings bounds;

  /// The merged configuration the spec was built from.
  nlohmann::json resolved;
};

/// Every recognised key with its default value.
nlohmann::json default_config();

/// "a..b" (inclusive), a single integer, or a list of either.
std::vector<std::uint64_t> expand_seeds(const nlohmann::json& value);

/// Applies "--key=value" overrides; dotted keys address nested sections.
/// Values parse as JSON when they can and as plain strings otherwise.
void apply_overrides(nlohmann::json& config, const std::vector<std::string>& overrides);

/// Merges file contents and overrides onto the defaults and validates the
/// result. Unknown keys and ill-typed values raise ConfigError.
ExperimentSpec build_spec(const nlohmann::json& file_config,
                          const std::vector<std::string>& overrides,
                          const std::filesystem::path& base_dir = ".");

/// Reads a JSON spec file. When `experiment` is given it must agree with the
/// file's "experiment" entry, or fills it in when the file has none.
ExperimentSpec load_spec(const std::filesystem::path& path,
                         const std::vector<std::string>& overrides,
                         std::optional<Experiment> experiment = std::nullopt);

}  // namespace rrb::harness
