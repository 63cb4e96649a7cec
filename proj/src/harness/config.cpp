#include "rrb/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "rrb/core/error.hpp"

namespace rrb::harness {

using nlohmann::json;

namespace {

constexpr std::pair<Experiment, const char*> kExperiments[] = {
    {Experiment::toy, "toy"}, {Experiment::pqc, "pqc"},
    {Experiment::qaoa, "qaoa"}, {Experiment::bounds, "bounds"}};

constexpr std::pair<Optimizer, const char*> kOptimizers[] = {
    {Optimizer::rr, "rr"},           {Optimizer::rr_powell, "rr_powell"},
    {Optimizer::rr_reject, "rr_reject"}, {Optimizer::rr_aim, "rr_aim"},
    {Optimizer::spsa, "spsa"},       {Optimizer::powell_brent, "powell_brent"}};

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

void merge(json& target, const json& source, const std::string& prefix) {
  if (!source.is_object()) fail(prefix.empty() ? "<root>" : prefix, "expected an object");
  for (const auto& [key, value] : source.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!target.contains(key)) fail(path, "unknown key");
    json& slot = target[key];
    if (slot.is_object()) {
      merge(slot, value, path);
    } else {
      slot = value;
    }
  }
}

// Typed readers. Each names the full key on failure.
double get_double(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(key, "must be finite");
  return v;
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) fail(key, "must be non-negative");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19) fail(key, "expected a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }
  fail(key, "expected a non-negative integer");
}

unsigned get_unsigned(const json& j, const std::string& key) {
  const auto v = get_u64(j, key);
  if (v > std::numeric_limits<unsigned>::max()) fail(key, "too large");
  return static_cast<unsigned>(v);
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) fail(key, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) fail(key, "expected a string");
  return j.get<std::string>();
}

line::Wrap get_wrap(const json& j, const std::string& key) {
  const auto s = get_string(j, key);
  if (s == "periodic") return line::Wrap::periodic;
  if (s == "truncated") return line::Wrap::truncated;
  fail(key, "expected \"periodic\" or \"truncated\", got \"" + s + "\"");
}

// Every library-level validate() failure is reported against its section.
template <typename F>
void validated(const std::string& section, F&& check) {
  try {
    check();
  } catch (const InvalidArgument& e) {
    fail(section, e.what());
  }
}

}  // namespace

std::string to_string(Experiment e) {
  for (auto [value, name] : kExperiments) {
    if (value == e) return name;
  }
  return "?";
}

std::string to_string(Optimizer o) {
  for (auto [value, name] : kOptimizers) {
    if (value == o) return name;
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (auto [value, n] : kExperiments) {
    if (name == n) return value;
  }
  fail("experiment", "unknown experiment \"" + name + "\"");
}

Optimizer parse_optimizer(const std::string& name) {
  for (auto [value, n] : kOptimizers) {
    if (name == n) return value;
  }
  fail("optimizer", "unknown optimizer \"" + name + "\"");
}

json default_config() {
  return json{
      {"experiment", "toy"},
      {"optimizer", "rr"},
      {"sizes", json::array()},
      {"seeds", "0..19"},
      {"threshold", 0.2},
      {"budget", 10'000'000},
      {"output", "results"},
      {"workers", 1},
      {"init", "uniform"},
      {"import_runs", json::array()},
      {"rr",
       {{"epsilon", 1.0 / 128.0},
        {"delta", 0.1},
        {"lipschitz", 2.0},
        {"max_depth", nullptr},
        {"threads", 1}}},
      {"driver",
       {{"q", 400.0},
        {"d_max", 1},
        {"delta", 20.0},
        {"lipschitz", 0.5},
        {"epsilon_line", 1.0 / 256.0},
        {"acceptance", "value_difference"},
        {"wrap", "periodic"},
        {"early_stop_depth1", true},
        {"max_steps", nullptr},
        {"threads", 1}}},
      {"spsa",
       {{"a", 0.0},
        {"c", 0.1},
        {"A", -1.0},
        {"alpha", 0.602},
        {"gamma", 0.101},
        {"shots", 10'000},
        {"max_iters", 0},
        {"target_step", 0.1},
        {"calibration_draws", 5},
        {"wrap", "periodic"}}},
      {"powell_brent",
       {{"shots", 10'000},
        {"max_iters", 100},
        {"xtol", 1e-4},
        {"ftol", 1e-6},
        {"max_line_evaluations", 100},
        {"wrap", "periodic"}}},
      {"toy", {{"sigma", 1.0}, {"start", 0.5}}},
      {"qaoa", {{"layers", 2}, {"edge_prob", 0.5}}},
      {"bounds",
       {{"instances", json::array()},
        {"epsilon", 1.0 / 32.0},
        {"delta", 0.1},
        {"lipschitz", 0.0},
        {"radii", {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}}}},
  };
}

std::vector<std::uint64_t> expand_seeds(const json& value) {
  std::vector<std::uint64_t> seeds;
  auto add_one = [&](const json& item) {
    if (item.is_string()) {
      const auto s = item.get<std::string>();
      const auto dots = s.find("..");
      try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
          seeds.push_back(std::stoull(s, &used));
          if (used != s.size()) throw std::invalid_argument(s);
          return;
        }
        const auto lo_text = s.substr(0, dots), hi_text = s.substr(dots + 2);
        const std::uint64_t lo = std::stoull(lo_text, &used);
        if (used != lo_text.size()) throw std::invalid_argument(s);
        const std::uint64_t hi = std::stoull(hi_text, &used);
        if (used != hi_text.size()) throw std::invalid_argument(s);
        if (hi < lo) fail("seeds", "empty range \"" + s + "\"");
        for (std::uint64_t v = lo; v <= hi; ++v) seeds.push_back(v);
      } catch (const std::logic_error&) {
        fail("seeds", "cannot parse \"" + s + "\"; expected an integer or \"a..b\"");
      }
      return;
    }
    seeds.push_back(get_u64(item, "seeds"));
  };
  if (value.is_array()) {
    for (const auto& item : value) add_one(item);
  } else {
    add_one(value);
  }
  if (seeds.empty()) fail("seeds", "no seeds given");
  return seeds;
}

void apply_overrides(json& config, const std::vector<std::string>& overrides) {
  for (const auto& raw : overrides) {
    std::string text = raw;
    if (text.rfind("--", 0) == 0) text.erase(0, 2);
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override \"" + raw + "\": expected --key=value");
    }
    const std::string key = text.substr(0, eq);
    const std::string value_text = text.substr(eq + 1);
    json value = json::parse(value_text, nullptr, false);
    if (value.is_discarded()) value = value_text;

    json* slot = &config;
    std::size_t start = 0;
    while (true) {
      const auto dot = key.find('.', start);
      const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
      if (!slot->is_object() || !slot->contains(part)) fail(key, "unknown key");
      slot = &(*slot)[part];
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (slot->is_object()) fail(key, "is a section; override its fields instead");
    *slot = std::move(value);
  }
}

ExperimentSpec build_spec(const json& file_config, const std::vector<std::string>& overrides,
                          const std::filesystem::path& base_dir) {
  json c = default_config();
  merge(c, file_config, "");
  apply_overrides(c, overrides);

  ExperimentSpec spec;
  spec.resolved = c;
  spec.experiment = parse_experiment(get_string(c["experiment"], "experiment"));
  spec.optimizer = parse_optimizer(get_string(c["optimizer"], "optimizer"));
  if (!c["sizes"].is_array()) fail("sizes", "expected a list of integers");
  for (const auto& s : c["sizes"]) spec.sizes.push_back(get_unsigned(s, "sizes"));
  spec.seeds = expand_seeds(c["seeds"]);
  spec.threshold = get_double(c["threshold"], "threshold");
  spec.budget = get_u64(c["budget"], "budget");
  spec.output = get_string(c["output"], "output");
  spec.workers = std::max(1U, get_unsigned(c["workers"], "workers"));
  const auto init = get_string(c["init"], "init");
  if (init == "uniform") {
    spec.start = StartPoint::uniform;
  } else if (init == "zero") {
    spec.start = StartPoint::zero;
  } else {
    fail("init", "expected uniform or zero, got '" + init + "'");
  }
  if (!c["import_runs"].is_array()) fail("import_runs", "expected a list of paths");
  for (const auto& item : c["import_runs"]) {
    std::filesystem::path path = get_string(item, "import_runs");
    if (path.is_relative()) path = base_dir / path;
    spec.import_runs.push_back(path.lexically_normal().string());
  }

  const json& r = c["rr"];
  spec.rr.epsilon = get_double(r["epsilon"], "rr.epsilon");
  spec.rr.delta = get_double(r["delta"], "rr.delta");
  spec.rr.lipschitz = get_double(r["lipschitz"], "rr.lipschitz");
  if (!r["max_depth"].is_null()) {
    spec.rr.max_depth = static_cast<int>(get_unsigned(r["max_depth"], "rr.max_depth"));
  }
  spec.rr.threads = std::max(1U, get_unsigned(r["threads"], "rr.threads"));

  const json& d = c["driver"];
  spec.driver.q = get_double(d["q"], "driver.q");
  spec.driver.d_max = static_cast<int>(get_unsigned(d["d_max"], "driver.d_max"));
  spec.driver.delta = get_double(d["delta"], "driver.delta");
  spec.driver.lipschitz = get_double(d["lipschitz"], "driver.lipschitz");
  spec.driver.epsilon_line = get_double(d["epsilon_line"], "driver.epsilon_line");
  const auto acceptance = get_string(d["acceptance"], "driver.acceptance");
  if (acceptance == "value_difference") {
    spec.driver.acceptance = line::AcceptanceRule::value_difference;
  } else if (acceptance == "location_difference") {
    spec.driver.acceptance = line::AcceptanceRule::location_difference;
  } else {
    fail("driver.acceptance", "expected \"value_difference\" or \"location_difference\"");
  }
  spec.driver.wrap = get_wrap(d["wrap"], "driver.wrap");
  spec.driver.early_stop_depth1 = get_bool(d["early_stop_depth1"], "driver.early_stop_depth1");
  if (!d["max_steps"].is_null()) spec.driver.max_steps = get_u64(d["max_steps"], "driver.max_steps");
  spec.driver.threads = std::max(1U, get_unsigned(d["threads"], "driver.threads"));
  spec.driver.budget = spec.budget;
  switch (spec.optimizer) {
    case Optimizer::rr_reject: spec.driver.policy = line::Policy::reject; break;
    case Optimizer::rr_aim: spec.driver.policy = line::Policy::aim; break;
    default: spec.driver.policy = line::Policy::rr_powell; break;
  }

  const json& s = c["spsa"];
  spec.spsa.a = get_double(s["a"], "spsa.a");
  spec.spsa.c = get_double(s["c"], "spsa.c");
  spec.spsa.A = get_double(s["A"], "spsa.A");
  spec.spsa.alpha = get_double(s["alpha"], "spsa.alpha");
  spec.spsa.gamma = get_double(s["gamma"], "spsa.gamma");
  spec.spsa.shots = get_u64(s["shots"], "spsa.shots");
  spec.spsa.max_iters = get_u64(s["max_iters"], "spsa.max_iters");
  spec.spsa.target_step = get_double(s["target_step"], "spsa.target_step");
  spec.spsa.calibration_draws =
      static_cast<int>(get_unsigned(s["calibration_draws"], "spsa.calibration_draws"));
  spec.spsa.wrap = get_wrap(s["wrap"], "spsa.wrap");
  spec.spsa.budget = spec.budget;
  if (spec.spsa.max_iters == 0) {
    // Enough iterations to spend the budget at two evaluations per step.
    if (spec.spsa.shots == 0) fail("spsa.shots", "must be positive");
    spec.spsa.max_iters = std::max<std::uint64_t>(1, spec.budget / (2 * spec.spsa.shots));
  }

  const json& p = c["powell_brent"];
  spec.powell_brent.shots = get_u64(p["shots"], "powell_brent.shots");
  spec.powell_brent.max_iters = get_u64(p["max_iters"], "powell_brent.max_iters");
  spec.powell_brent.xtol = get_double(p["xtol"], "powell_brent.xtol");
  spec.powell_brent.ftol = get_double(p["ftol"], "powell_brent.ftol");
  spec.powell_brent.max_line_evaluations = static_cast<int>(
      get_unsigned(p["max_line_evaluations"], "powell_brent.max_line_evaluations"));
  spec.powell_brent.wrap = get_wrap(p["wrap"], "powell_brent.wrap");
  spec.powell_brent.budget = spec.budget;

  spec.toy.sigma = get_double(c["toy"]["sigma"], "toy.sigma");
  spec.toy.start = get_double(c["toy"]["start"], "toy.start");

  spec.qaoa.layers = get_unsigned(c["qaoa"]["layers"], "qaoa.layers");
  spec.qaoa.edge_prob = get_double(c["qaoa"]["edge_prob"], "qaoa.edge_prob");

  const json& b = c["bounds"];
  if (!b["instances"].is_array()) fail("bounds.instances", "expected a list of paths");
  for (const auto& item : b["instances"]) {
    std::filesystem::path path = get_string(item, "bounds.instances");
    if (path.is_relative()) path = base_dir / path;
    spec.bounds.instances.push_back(path.lexically_normal().string());
  }
  spec.bounds.epsilon = get_double(b["epsilon"], "bounds.epsilon");
  spec.bounds.delta = get_double(b["delta"], "bounds.delta");
  spec.bounds.lipschitz = get_double(b["lipschitz"], "bounds.lipschitz");
  if (!b["radii"].is_array()) fail("bounds.radii", "expected a list of numbers");
  spec.bounds.radii.clear();
  for (const auto& item : b["radii"]) spec.bounds.radii.push_back(get_double(item, "bounds.radii"));

  // Cross-field checks.
  switch (spec.experiment) {
    case Experiment::toy:
      if (spec.optimizer != Optimizer::rr && spec.optimizer != Optimizer::spsa &&
          spec.optimizer != Optimizer::powell_brent) {
        fail("optimizer", "the toy experiment runs rr, spsa or powell_brent");
      }
      if (!(spec.toy.start >= 0.0 && spec.toy.start <= 1.0)) fail("toy.start", "must lie in [0, 1]");
      if (!(spec.toy.sigma >= 0.0 && spec.toy.sigma <= 1.0)) fail("toy.sigma", "must lie in [0, 1]");
      break;
    case Experiment::pqc:
    case Experiment::qaoa:
      if (spec.optimizer == Optimizer::rr) {
        fail("optimizer", "plain rr is one-dimensional; use rr_powell, rr_reject or rr_aim");
      }
      if (!(spec.threshold > 0.0 && spec.threshold < 1.0)) fail("threshold", "must lie in (0, 1)");
      if (spec.sizes.empty()) fail("sizes", "at least one size is required");
      for (unsigned n : spec.sizes) {
        if (n < 2 || n > 20) fail("sizes", "sizes must lie in [2, 20]");
      }
      if (spec.qaoa.layers < 1) fail("qaoa.layers", "must be at least 1");
      if (!(spec.qaoa.edge_prob > 0.0 && spec.qaoa.edge_prob <= 1.0)) {
        fail("qaoa.edge_prob", "must lie in (0, 1]");
      }
      break;
    case Experiment::bounds:
      if (spec.bounds.instances.empty()) fail("bounds.instances", "no instance files given");
      {
        int exponent = 0;
        const double e = spec.bounds.epsilon;
        if (!(e > 0.0 && e < 1.0) || std::frexp(e, &exponent) != 0.5) {
          fail("bounds.epsilon", "must be 2^-D for an integer D >= 1");
        }
      }
      if (!(spec.bounds.delta > 0.0)) fail("bounds.delta", "must be positive");
      break;
  }
  validated("rr", [&] { spec.rr.validate(); });
  validated("driver", [&] { spec.driver.validate(); });
  validated("spsa", [&] { spec.spsa.validate(); });
  validated("powell_brent", [&] { spec.powell_brent.validate(); });
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path,
                         const std::vector<std::string>& overrides,
                         std::optional<Experiment> experiment) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file " + path.string());
  json file = json::parse(in, nullptr, false, true);
  if (file.is_discarded()) throw ParseError(path.string() + ": not valid JSON");
  if (!file.is_object()) throw ParseError(path.string() + ": top level must be an object");
  if (experiment) {
    const std::string name = to_string(*experiment);
    if (file.contains("experiment") && file["experiment"] != name) {
      throw ConfigError("experiment: spec file describes " + file["experiment"].dump() +
                        ", not \"" + name + "\"");
    }
    file["experiment"] = name;
  }
  return build_spec(file, overrides, path.parent_path());
}

}  // namespace rrb::harness
