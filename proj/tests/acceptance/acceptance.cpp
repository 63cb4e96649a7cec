// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "random_instances.hpp"
#include "rrb/bounds/bounds.hpp"
#include "rrb/core/bandit.hpp"
#include "rrb/harness/config.hpp"
#include "rrb/harness/experiments.hpp"
#include "rrb/harness/toy.hpp"
#include "rrb/qsim/circuits.hpp"
#include "rrb/qsim/quantum_bandit.hpp"
#include "rrb/rr/reject_refine.hpp"

namespace {

using namespace rrb;
namespace fs = std::filesystem;

// Tolerances and sizes, fixed here so that they cannot drift.
constexpr double kToyXStar = 0.8675;
constexpr double kToyEpsilon = 1.0 / 128;
constexpr int kToyRequired = 18;
constexpr double kToyStuckDistance = 0.05;

constexpr int kPacInstances = 5;
constexpr int kPacRuns = 100;
constexpr double kPacEpsilon = 1.0 / 32;
constexpr double kPacDelta = 0.1;

constexpr double kSlopeTarget = 2.0;
constexpr double kSlopeTolerance = 0.3;
constexpr int kSlopeSeeds = 20;

constexpr int kSoundnessInstances = 1000;
constexpr double kSoundnessEpsilon = 1.0 / 64;

constexpr double kBoundRelTol = 1e-9;
constexpr int kBoundRandomInstances = 1000;
constexpr int kIntegrationPoints = 1'000'000;
constexpr double kIntegrationTol = 1e-5;

constexpr int kNormGates = 100000;
constexpr double kNormTol = 1e-10;
constexpr int kBornShots = 1'000'000;
constexpr double kBornSigmas = 5.0;
constexpr int kMaxcutGraphs = 1000;

constexpr unsigned kVarianceDraws = 200;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

bool close_rel(double got, double want) {
  return std::abs(got - want) <= kBoundRelTol * std::max(std::abs(want), 1e-300);
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

GaussianBandit profile_bandit(const bounds::BoundInstance& inst, double sigma) {
  return GaussianBandit([inst](std::span<const double> x) { return inst.value_at(x[0]); }, sigma,
                        inst.lipschitz);
}

rr::RRConfig rr_config(double eps, double delta, double L) {
  rr::RRConfig c;
  c.epsilon = eps;
  c.delta = delta;
  c.lipschitz = L;
  return c;
}

// ------------------------------------------------------------------ 1

Outcome toy_convergence() {
  const fs::path dir = RRB_TEST_DATA_DIR;
  auto rr_spec = harness::load_spec(dir / "toy_rr.json", {});
  rr_spec.rr.epsilon = kToyEpsilon;
  rr_spec.rr.delta = 0.1;
  rr_spec.rr.lipschitz = 2.0;
  rr_spec.workers = workers();
  int rr_hits = 0;
  for (const auto& r : harness::run_toy(rr_spec).runs) {
    rr_hits += std::abs(r.x_hat - kToyXStar) <= kToyEpsilon;
  }

  auto spsa_spec = harness::load_spec(dir / "toy_spsa.json", {});
  spsa_spec.toy.start = 0.5;
  spsa_spec.workers = workers();
  int stuck = 0;
  for (const auto& r : harness::run_toy(spsa_spec).runs) {
    stuck += std::abs(r.x_hat - kToyXStar) > kToyStuckDistance;
  }
  const std::size_t n = rr_spec.seeds.size();
  return {n == 20 && rr_hits >= kToyRequired && stuck >= kToyRequired,
          fmt("rr within 2^-7: %d/%zu, spsa stuck: %d/%zu (need >= %d)", rr_hits, n, stuck,
              spsa_spec.seeds.size(), kToyRequired)};
}

// ------------------------------------------------------------------ 2, 3

struct PacData {
  std::vector<bounds::BoundInstance> instances;
  std::vector<int> failures;
  std::vector<std::vector<std::uint64_t>> tau;
};

PacData pac_runs() {
  PacData d;
  Rng gen(20240601);
  for (int i = 0; i < kPacInstances; ++i) {
    auto inst = testing::random_unimodal(gen, 1.0, 0.2, 0.05);
    inst.epsilon = kPacEpsilon;
    inst.delta = kPacDelta;
    d.instances.push_back(inst);
  }
  d.failures.assign(kPacInstances, 0);
  d.tau.assign(kPacInstances, std::vector<std::uint64_t>(kPacRuns));
  harness::parallel_for(kPacInstances * kPacRuns, workers(), [&](std::size_t job) {
    const std::size_t i = job / kPacRuns, r = job % kPacRuns;
    const auto& inst = d.instances[i];
    const auto bandit = profile_bandit(inst, 1.0);
    const auto res = rr::run(bandit, rr_config(kPacEpsilon, kPacDelta, inst.lipschitz),
                             Rng(1000 * i + r));
    d.tau[i][r] = res.state.total_samples;
    if (std::abs(res.recommendation - testing::argmin_of(inst)) > kPacEpsilon) {
      __atomic_add_fetch(&d.failures[i], 1, __ATOMIC_RELAXED);
    }
  });
  return d;
}

Outcome pac_guarantee(const PacData& d) {
  const double slack = 3.0 * std::sqrt(kPacDelta * (1 - kPacDelta) / kPacRuns);
  bool ok = true;
  std::string rates;
  for (int i = 0; i < kPacInstances; ++i) {
    const double rate = static_cast<double>(d.failures[i]) / kPacRuns;
    ok = ok && rate <= kPacDelta + slack;
    rates += fmt("%s%.2f", i ? " " : "", rate);
  }
  return {ok, fmt("failure rates [%s] vs limit %.3f", rates.c_str(), kPacDelta + slack)};
}

Outcome budget_bound(const PacData& d) {
  bool within = true;
  double worst = 0.0;
  for (int i = 0; i < kPacInstances; ++i) {
    const double bound = bounds::upper_bound(d.instances[i]);
    for (auto t : d.tau[i]) {
      within = within && static_cast<double>(t) <= bound;
      worst = std::max(worst, static_cast<double>(t) / bound);
    }
  }

  const double x_star = 0.4321;
  bounds::BoundInstance wedge;
  wedge.points = {{0.0, x_star}, {x_star, 0.0}, {1.0, 1.0 - x_star}};
  wedge.lipschitz = 1.0;
  const auto bandit = profile_bandit(wedge, 1.0);
  std::vector<double> xs, ys;
  for (int D = 3; D <= 7; ++D) {
    const double eps = std::ldexp(1.0, -D);
    double mean_tau = 0.0;
    for (int s = 0; s < kSlopeSeeds; ++s) {
      mean_tau += rr::run(bandit, rr_config(eps, kPacDelta, 1.0), Rng(s)).state.total_samples;
    }
    xs.push_back(std::log(1.0 / eps));
    ys.push_back(std::log(mean_tau / kSlopeSeeds));
  }
  const double k = slope(xs, ys);
  return {within && std::abs(k - kSlopeTarget) <= kSlopeTolerance,
          fmt("max tau/upper %.3g, wedge slope %.3f (target %.1f +- %.1f)", worst, k,
              kSlopeTarget, kSlopeTolerance)};
}

// ------------------------------------------------------------------ 4

Outcome exclusion_soundness() {
  Rng gen(77);
  std::vector<bounds::BoundInstance> instances;
  for (int i = 0; i < kSoundnessInstances; ++i) instances.push_back(testing::random_unimodal(gen));
  std::vector<int> violated(instances.size(), 0);
  harness::parallel_for(instances.size(), workers(), [&](std::size_t i) {
    const auto& inst = instances[i];
    const auto bandit = profile_bandit(inst, 0.0);
    const auto cfg = rr_config(kSoundnessEpsilon, kPacDelta, inst.lipschitz);
    const double x_star = testing::argmin_of(inst);
    rr::RRState s;
    while (s.round <= cfg.rounds()) {
      s = rr::run_round(s, bandit, cfg, Rng(i));
      if (!s.surviving.contains(x_star)) violated[i] = 1;
    }
  });
  int total = 0;
  for (int v : violated) total += v;
  return {total == 0, fmt("%d violations over %d instances", total, kSoundnessInstances)};
}

// ------------------------------------------------------------------ 5

Outcome bound_formulas() {
  struct Hand {
    const char* name;
    bounds::BoundInstance inst;
    double lower, upper, trivial;
  };
  auto make = [](std::vector<bounds::Breakpoint> p, double L, double eps, double delta) {
    bounds::BoundInstance b;
    b.points = std::move(p);
    b.lipschitz = L;
    b.epsilon = eps;
    b.delta = delta;
    return b;
  };
  const double ln10 = std::log(10.0), ln20 = std::log(20.0);
  // Level-set measures and sums worked out by hand:
  //   ramp v = x, eps 1/8:          m = 1/2, 1/4, 1/8        S = 0.1640625
  //   wedge at 1/2, eps 1/16:       m = 0, 1/2, 1/4, 1/8     S = 0.1640625
  //   skewed 0.3 - x | x - 0.3, eps 1/4: m = 0.2, 0.3        S = 0.325
  const std::vector<Hand> hand = {
      {"ramp", make({{0, 0}, {1, 1}}, 1.0, 1.0 / 8, 0.1), ln10 * 6.4 * 0.1640625,
       32768.0 * 512.0 * 0.1640625 * (3.0 + ln10), 1.0 / 64},
      {"wedge", make({{0, 0.5}, {0.5, 0}, {1, 0.5}}, 1.0, 1.0 / 16, 0.05),
       ln20 * 51.2 * 0.1640625, 32768.0 * 4096.0 * 0.1640625 * (4.0 + ln20), 1.0 / 256},
      {"skewed", make({{0, 0.3}, {0.3, 0}, {1, 0.7}}, 1.0, 1.0 / 4, 0.1), ln10 * 0.8 * 0.325,
       32768.0 * 64.0 * 0.325 * (2.0 + ln10), 1.0 / 16},
  };
  bool hand_ok = true;
  for (const auto& h : hand) {
    hand_ok = hand_ok && close_rel(bounds::lower_bound(h.inst), h.lower) &&
              close_rel(bounds::upper_bound(h.inst), h.upper) &&
              close_rel(bounds::trivial_bound(h.inst.epsilon), h.trivial);
  }

  Rng gen(31);
  int ordered = 0;
  for (int i = 0; i < kBoundRandomInstances; ++i) {
    auto inst = testing::random_unimodal(gen, gen.uniform(0.5, 4.0));
    inst.epsilon = std::ldexp(1.0, -(1 + static_cast<int>(gen.uniform() * 10)));
    inst.delta = gen.uniform(0.001, 0.9);
    ordered += bounds::lower_bound(inst) <= bounds::upper_bound(inst);
  }

  double worst = 0.0;
  std::vector<bounds::BoundInstance> checks;
  for (const auto& h : hand) checks.push_back(h.inst);
  for (int i = 0; i < 5; ++i) {
    auto inst = testing::random_unimodal(gen, 2.0);
    inst.epsilon = 1.0 / 32;
    checks.push_back(inst);
  }
  for (const auto& inst : checks) {
    for (int t = 1; t <= inst.depth(); ++t) {
      const double lo = std::ldexp(1.0, -t), hi = std::ldexp(1.0, 1 - t);
      int inside = 0;
      for (int i = 0; i < kIntegrationPoints; ++i) {
        const double v = inst.value_at((i + 0.5) / kIntegrationPoints);
        inside += v > lo && v <= hi;
      }
      const double brute = static_cast<double>(inside) / kIntegrationPoints;
      worst = std::max(worst, std::abs(brute - bounds::level_set_measure(inst, t)));
    }
  }
  return {hand_ok && ordered == kBoundRandomInstances && worst <= kIntegrationTol,
          fmt("hand values %s, lower<=upper %d/%d, level-set error %.2g", hand_ok ? "match" : "differ",
              ordered, kBoundRandomInstances, worst)};
}

// ------------------------------------------------------------------ 6

qsim::Gate random_gate(unsigned n, Rng& rng) {
  constexpr double pi = std::numbers::pi;
  const unsigned q = static_cast<unsigned>(rng.uniform() * n);
  switch (static_cast<unsigned>(rng.uniform() * 5)) {
    case 0: return qsim::Rotation{qsim::Axis::x, q, rng.uniform(-pi, pi)};
    case 1: return qsim::Rotation{qsim::Axis::y, q, rng.uniform(-pi, pi)};
    case 2: return qsim::Rotation{qsim::Axis::z, q, rng.uniform(-pi, pi)};
    case 3: return qsim::Hadamard{q};
    default:
      if (n == 1) return qsim::Hadamard{q};
      return qsim::ControlledZ{q, (q + 1 + static_cast<unsigned>(rng.uniform() * (n - 1))) % n};
  }
}

Outcome simulator_fidelity() {
  Rng rng(6);
  qsim::StateVector state(6);
  double drift = 0.0;
  double previous = state.norm_squared();
  for (int i = 0; i < kNormGates; ++i) {
    state.apply(random_gate(6, rng));
    const double now = state.norm_squared();
    drift = std::max(drift, std::abs(now - previous));
    previous = now;
  }
  const double total_drift = std::abs(previous - 1.0);

  bool born = true;
  for (unsigned n = 1; n <= 4; ++n) {
    qsim::StateVector s(n);
    for (int i = 0; i < 40; ++i) s.apply(random_gate(n, rng));
    const auto probs = s.probabilities();
    const qsim::OutcomeSampler sampler(probs);
    std::vector<long> counts(probs.size(), 0);
    for (int i = 0; i < kBornShots; ++i) ++counts[sampler.draw(rng)];
    for (std::size_t z = 0; z < probs.size(); ++z) {
      const double mean = kBornShots * probs[z];
      const double sd = std::sqrt(kBornShots * probs[z] * (1 - probs[z]));
      born = born && std::abs(counts[z] - mean) <= kBornSigmas * sd + 1e-9;
    }
  }

  bool pqc_zero = true;
  for (unsigned n = 1; n <= 8; ++n) {
    const auto ansatz = qsim::PqcAnsatz::square(n);
    pqc_zero = pqc_zero &&
               qsim::expected_cost(std::vector<double>(ansatz.parameter_count(), 0.0), ansatz) == 0.0;
  }

  const auto k3 = qsim::QaoaInstance::make(qsim::Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 1);
  const std::vector<double> zero = {0.0};
  const double k3_cost = qsim::expected_cost(zero, zero, k3);

  int maxcut_ok = 0;
  for (int i = 0; i < kMaxcutGraphs; ++i) {
    const unsigned n = 1 + static_cast<unsigned>(rng.uniform() * 12);
    const auto g = qsim::erdos_renyi(n, rng.uniform(0.1, 0.9), rng);
    unsigned best = 0;
    for (std::uint64_t z = 0; z < (std::uint64_t{1} << n); ++z) {
      unsigned c = 0;
      for (const auto& [u, v] : g.edges()) c += ((z >> u) ^ (z >> v)) & 1;
      best = std::max(best, c);
    }
    maxcut_ok += qsim::maxcut_bruteforce(g) == best;
  }

  const bool ok = drift <= kNormTol && total_drift <= kNormTol && born && pqc_zero &&
                  k3_cost == 0.25 && maxcut_ok == kMaxcutGraphs;
  return {ok, fmt("norm drift per gate %.2g (total %.2g), born %s, pqc(0) %s, K3 %.17g, "
                  "maxcut %d/%d",
                  drift, total_drift, born ? "ok" : "off", pqc_zero ? "0" : "nonzero", k3_cost,
                  maxcut_ok, kMaxcutGraphs)};
}

// ------------------------------------------------------------------ 7

Outcome vqa_reproduction() {
  const fs::path dir = RRB_TEST_DATA_DIR;
  auto rr_spec = harness::load_spec(dir / "qaoa_rr_powell.json", {});
  auto spsa_spec = harness::load_spec(dir / "qaoa_spsa.json", {});
  for (auto* s : {&rr_spec, &spsa_spec}) {
    s->sizes = {5, 6, 7, 8};
    s->qaoa.layers = 2;
    s->threshold = 0.2;
    s->budget = 10'000'000;
    s->workers = workers();
  }
  spsa_spec.spsa.shots = 10'000;
  const auto rr_res = harness::run_vqa(rr_spec);
  const auto spsa_res = harness::run_vqa(spsa_spec);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < rr_res.aggregates.size(); ++i) {
    const auto& a = rr_res.aggregates[i].summary;
    const auto& b = spsa_res.aggregates[i].summary;
    ok = ok && std::isfinite(a.median) && a.success_rate >= b.success_rate;
    detail += fmt("n=%u rr_powell median %.0f success %.2f vs spsa %.2f; ",
                  rr_res.aggregates[i].size, a.median, a.success_rate, b.success_rate);
  }
  ok = ok && rr_spec.seeds.size() == 20;

  std::vector<double> variances;
  for (unsigned n = 4; n <= 10; ++n) {
    const auto ansatz = qsim::PqcAnsatz::square(n);
    Rng rng(Rng(500).child(n));
    std::vector<double> costs;
    for (unsigned k = 0; k < kVarianceDraws; ++k) {
      std::vector<double> theta(ansatz.parameter_count());
      for (double& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);
      costs.push_back(qsim::expected_cost(theta, ansatz));
    }
    double mean = 0.0;
    for (double c : costs) mean += c / costs.size();
    double var = 0.0;
    for (double c : costs) var += (c - mean) * (c - mean) / (costs.size() - 1);
    variances.push_back(var);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < variances.size(); ++i) {
    decreasing = decreasing && variances[i] < variances[i - 1];
  }
  detail += "pqc variance n=4..10:";
  for (double v : variances) detail += fmt(" %.3g", v);
  return {ok && decreasing, detail};
}

// ------------------------------------------------------------------ 8

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path configs = RRB_TEST_DATA_DIR;
  const fs::path root = fs::temp_directory_path() / "rrb_acceptance_determinism";
  fs::remove_all(root);
  struct Case {
    const char* file;
    std::vector<std::string> overrides;
  };
  const std::vector<Case> cases = {
      {"toy_rr.json", {}},
      {"toy_spsa.json", {"budget=2000000"}},
      {"qaoa_rr_powell.json", {"sizes=[5,6]", "seeds=0..4", "budget=1000000"}},
      {"qaoa_spsa.json", {"sizes=[5]", "seeds=0..4", "budget=1000000"}},
      {"pqc_rr_powell.json", {"sizes=[4]", "seeds=0..4", "budget=1000000"}},
      {"bounds.json", {}},
  };
  int identical = 0, compared = 0;
  for (std::size_t c = 0; c < cases.size(); ++c) {
    std::vector<std::vector<fs::path>> written;
    for (unsigned pass = 0; pass < 2; ++pass) {
      auto spec = harness::load_spec(configs / cases[c].file, cases[c].overrides);
      spec.output = (root / std::to_string(c) / std::to_string(pass)).string();
      spec.workers = pass == 0 ? 1 : workers() + 1;
      written.push_back(harness::run_experiment(spec));
    }
    for (std::size_t f = 0; f < written[0].size(); ++f) {
      if (written[0][f].extension() != ".csv") continue;
      ++compared;
      const auto a = slurp(written[0][f]);
      identical += !a.empty() && a == slurp(written[1][f]);
    }
  }
  fs::remove_all(root);
  return {compared > 0 && identical == compared,
          fmt("%d/%d CSV files byte-identical across reruns", identical, compared)};
}

}  // namespace

int main() {
  const auto clock = [] { return std::chrono::steady_clock::now(); };
  int failed = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = clock();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock() - t0).count();
    std::printf("criterion %d %s: %s (%s) [%.1fs]\n", id, name, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  };

  report(1, "toy convergence", toy_convergence);
  PacData pac;
  report(2, "pac guarantee", [&] {
    pac = pac_runs();
    return pac_guarantee(pac);
  });
  report(3, "sample budget", [&] { return budget_bound(pac); });
  report(4, "exclusion soundness", exclusion_soundness);
  report(5, "bound formulas", bound_formulas);
  report(6, "simulator fidelity", simulator_fidelity);
  report(7, "vqa reproduction", vqa_reproduction);
  report(8, "determinism", determinism);
  return failed == 0 ? 0 : 1;
}
