#include "rrb/harness/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "rrb/bounds/bounds.hpp"
#include "rrb/core/error.hpp"
#include "rrb/harness/toy.hpp"
#include "rrb/qsim/quantum_bandit.hpp"

namespace rrb::harness {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- toy

namespace {

ToyRun toy_rr(const ExperimentSpec& spec, const Bandit& bandit, double x_star, std::uint64_t seed) {
  const auto res = rr::run(bandit, spec.rr, Rng(seed));
  ToyRun run{seed, res.recommendation, std::abs(res.recommendation - x_star), res.state.total_samples,
             {}};
  double best_loc = 0.0, best_mean = std::numeric_limits<double>::infinity();
  for (const auto& row : res.trace) {
    if (row.best_mean < best_mean || (row.best_mean == best_mean && row.best_location < best_loc)) {
      best_mean = row.best_mean;
      best_loc = row.best_location;
    }
    run.trace.push_back({seed, static_cast<std::uint64_t>(row.round), row.cumulative_samples,
                         best_loc, std::abs(best_loc - x_star)});
  }
  return run;
}

ToyRun toy_baseline(const ExperimentSpec& spec, const Bandit& bandit, double x_star,
                    std::uint64_t seed) {
  ToyRun run{seed, 0.0, 0.0, 0, {}};
  auto record = [&](const StepRecord& rec) {
    const double x = rec.incumbent.at(0);
    run.trace.push_back({seed, rec.step, rec.cumulative_samples, x, std::abs(x - x_star)});
    return false;
  };
  const Point start{spec.toy.start};
  OptimizeResult res;
  if (spec.optimizer == Optimizer::spsa) {
    auto cfg = spec.spsa;
    cfg.wrap = line::Wrap::truncated;
    res = baselines::spsa(bandit, start, cfg, Rng(seed), record);
  } else {
    auto cfg = spec.powell_brent;
    cfg.wrap = line::Wrap::truncated;
    res = baselines::powell_brent(bandit, start, cfg, Rng(seed), record);
  }
  run.x_hat = res.best_point.at(0);
  run.distance = std::abs(run.x_hat - x_star);
  run.total_samples = res.total_samples;
  return run;
}

}  // namespace

ToyResult run_toy(const ExperimentSpec& spec) {
  const double x_star = toy_minimizer();
  const auto bandit = make_toy_bandit(spec.toy.sigma);
  ToyResult out{x_star, std::vector<ToyRun>(spec.seeds.size())};
  parallel_for(spec.seeds.size(), spec.workers, [&](std::size_t i) {
    const auto seed = spec.seeds[i];
    out.runs[i] = spec.optimizer == Optimizer::rr ? toy_rr(spec, *bandit, x_star, seed)
                                                  : toy_baseline(spec, *bandit, x_star, seed);
  });
  return out;
}

// ---------------------------------------------------------------- vqa

namespace {

qsim::Graph draw_graph(unsigned n, double edge_prob, const Rng& rng) {
  // Redraw the rare edgeless graph; the approximation ratio needs maxcut > 0.
  for (std::uint64_t attempt = 0;; ++attempt) {
    Rng r = rng.child(attempt);
    auto g = qsim::erdos_renyi(n, edge_prob, r);
    if (g.n_edges() > 0) return g;
  }
}

OptimizeResult optimize(const ExperimentSpec& spec, const Bandit& bandit, const Point& start,
                        const Rng& rng, const StepCallback& cb) {
  switch (spec.optimizer) {
    case Optimizer::rr_powell:
    case Optimizer::rr_reject:
    case Optimizer::rr_aim: return line::run_driver(bandit, start, spec.driver, rng, cb);
    case Optimizer::spsa: return baselines::spsa(bandit, start, spec.spsa, rng, cb);
    case Optimizer::powell_brent:
      return baselines::powell_brent(bandit, start, spec.powell_brent, rng, cb);
    case Optimizer::rr: break;
  }
  throw ConfigError("optimizer: rr cannot run a multi-parameter experiment");
}

}  // namespace

VqaRun run_vqa_once(const ExperimentSpec& spec, unsigned size, std::uint64_t seed) {
  const Rng root = Rng(seed).child(size);
  std::unique_ptr<qsim::QuantumBandit> bandit;
  VqaRun run{size, seed, false, 0, 0, 0, 0, 0.0, 0.0, "", 0, 0};
  if (spec.experiment == Experiment::pqc) {
    bandit = qsim::make_pqc_bandit(size);
  } else {
    auto qb = qsim::make_qaoa_bandit(draw_graph(size, spec.qaoa.edge_prob, root.child(1)),
                                     spec.qaoa.layers);
    run.edges = qb->instance().graph.n_edges();
    run.maxcut = qb->instance().maxcut;
    bandit = std::move(qb);
  }
  CountingBandit counted(*bandit);

  Rng start_rng = root.child(2);
  Point start(bandit->dimension(), 0.0);
  if (spec.start == StartPoint::uniform) {
    for (double& v : start) v = start_rng.uniform();
  }

  run.initial_cost = *counted.mean(start);
  if (run.initial_cost <= spec.threshold) {
    run.crossed = true;
    run.final_cost = run.initial_cost;
    run.stop = "threshold";
    run.oracle_calls = counted.oracle_calls();
    return run;
  }

  auto on_step = [&](const StepRecord& rec) {
    ++run.steps;
    if (*counted.mean(rec.incumbent) <= spec.threshold) {
      run.crossed = true;
      run.n_total = counted.samples();
      return true;
    }
    return false;
  };
  const auto res = optimize(spec, counted, start, root.child(3), on_step);
  run.samples = counted.samples();
  if (!run.crossed) run.n_total = run.samples;
  run.final_cost = *counted.mean(res.best_point);
  run.stop = run.crossed ? "threshold" : std::string(to_string(res.stop));
  run.oracle_calls = counted.oracle_calls();
  return run;
}

VqaResult run_vqa(const ExperimentSpec& spec) {
  VqaResult out;
  const std::size_t per_size = spec.seeds.size();
  out.runs.resize(spec.sizes.size() * per_size);
  parallel_for(out.runs.size(), spec.workers, [&](std::size_t i) {
    out.runs[i] = run_vqa_once(spec, spec.sizes[i / per_size], spec.seeds[i % per_size]);
  });
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    std::vector<double> n;
    for (std::size_t k = 0; k < per_size; ++k) {
      const auto& r = out.runs[s * per_size + k];
      n.push_back(r.crossed ? static_cast<double>(r.n_total)
                            : std::numeric_limits<double>::infinity());
    }
    out.aggregates.push_back({to_string(spec.optimizer), spec.sizes[s], summarize(n)});
  }
  for (const auto& path : spec.import_runs) {
    const auto imported = read_imported_runs(path, spec.experiment);
    for (auto& a : aggregate_imported(imported)) out.aggregates.push_back(std::move(a));
  }
  return out;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t begin = 0;
  for (;;) {
    const auto comma = line.find(',', begin);
    cells.push_back(line.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return cells;
}

std::uint64_t parse_count(const std::string& cell, const std::string& where) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(cell, &used);
  } catch (const std::logic_error&) {
    used = std::string::npos;
  }
  if (used != cell.size() || cell.empty() || cell[0] == '-') {
    throw ParseError(where + "expected a non-negative integer, got '" + cell + "'");
  }
  return v;
}

}  // namespace

std::vector<ImportedRun> read_imported_runs(const std::filesystem::path& path,
                                            Experiment experiment) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open imported runs " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ":1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParseError(path.string() + ":1: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_exp = column("experiment"), c_opt = column("optimizer"),
                    c_size = column("size"), c_seed = column("seed"),
                    c_crossed = column("crossed"), c_n = column("n_total");
  const std::string want = to_string(experiment);

  std::vector<ImportedRun> runs;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no) + ": ";
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw ParseError(where + "expected " + std::to_string(header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    if (cells[c_exp] != want) {
      throw ParseError(where + "experiment '" + cells[c_exp] + "' does not match '" + want + "'");
    }
    if (cells[c_opt].empty()) throw ParseError(where + "empty optimizer name");
    if (cells[c_crossed] != "0" && cells[c_crossed] != "1") {
      throw ParseError(where + "crossed must be 0 or 1");
    }
    const auto size = parse_count(cells[c_size], where);
    if (size > 0xFFFFFFFFu) throw ParseError(where + "size out of range");
    runs.push_back({cells[c_opt], static_cast<unsigned>(size), parse_count(cells[c_seed], where),
                    cells[c_crossed] == "1", parse_count(cells[c_n], where)});
  }
  return runs;
}

std::vector<VqaAggregate> aggregate_imported(std::span<const ImportedRun> runs) {
  std::vector<std::pair<std::string, unsigned>> keys;
  for (const auto& r : runs) {
    const std::pair<std::string, unsigned> key{r.optimizer, r.size};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<VqaAggregate> out;
  for (const auto& [opt, size] : keys) {
    std::vector<double> n;
    for (const auto& r : runs) {
      if (r.optimizer != opt || r.size != size) continue;
      n.push_back(r.crossed ? static_cast<double>(r.n_total)
                            : std::numeric_limits<double>::infinity());
    }
    out.push_back({opt, size, summarize(n)});
  }
  return out;
}

// ---------------------------------------------------------------- bounds

namespace {

double steepest_slope(const bounds::BoundInstance& inst) {
  double slope = 0.0;
  for (std::size_t i = 1; i < inst.points.size(); ++i) {
    const auto& a = inst.points[i - 1];
    const auto& b = inst.points[i];
    slope = std::max(slope, std::abs(b.v - a.v) / (b.x - a.x));
  }
  return slope;
}

}  // namespace

std::vector<BoundsRow> run_bounds(const ExperimentSpec& spec) {
  std::vector<BoundsRow> rows;
  for (const auto& path : spec.bounds.instances) {
    auto inst = bounds::read_instance(path);
    inst.epsilon = spec.bounds.epsilon;
    inst.delta = spec.bounds.delta;
    inst.lipschitz = spec.bounds.lipschitz > 0.0 ? spec.bounds.lipschitz : steepest_slope(inst);
    try {
      inst.validate();
    } catch (const InvalidArgument& e) {
      throw ParseError(path + ": " + e.what());
    }
    const auto fit = bounds::zooming_fit(inst, spec.bounds.radii);
    rows.push_back({std::filesystem::path(path).filename().string(), inst.epsilon, inst.delta,
                    inst.lipschitz, bounds::lower_bound(inst), bounds::upper_bound(inst),
                    bounds::trivial_bound(inst.epsilon), fit.beta, fit.C});
  }
  return rows;
}

// ---------------------------------------------------------------- output

namespace {

std::ofstream open_csv(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_toy_csv(const std::filesystem::path& dir, const ExperimentSpec& spec,
                   const ToyResult& r) {
  const std::string opt = to_string(spec.optimizer);
  auto trace = open_csv(dir / "toy_trace.csv");
  trace << "optimizer,seed,step,cumulative_samples,x_hat,distance\n";
  for (const auto& run : r.runs) {
    for (const auto& p : run.trace) {
      trace << opt << ',' << p.seed << ',' << p.step << ',' << p.cumulative_samples << ','
            << format_number(p.x_hat) << ',' << format_number(p.distance) << '\n';
    }
  }
  auto summary = open_csv(dir / "toy_summary.csv");
  summary << "optimizer,seed,x_star,x_hat,distance,total_samples\n";
  for (const auto& run : r.runs) {
    summary << opt << ',' << run.seed << ',' << format_number(r.x_star) << ','
            << format_number(run.x_hat) << ',' << format_number(run.distance) << ','
            << run.total_samples << '\n';
  }
}

void write_vqa_csv(const std::filesystem::path& dir, const ExperimentSpec& spec,
                   const VqaResult& r) {
  const std::string exp = to_string(spec.experiment);
  const std::string opt = to_string(spec.optimizer);
  auto runs = open_csv(dir / "runs.csv");
  runs << "experiment,optimizer,size,seed,crossed,n_total,samples,oracle_calls,steps,"
          "initial_cost,final_cost,stop,edges,maxcut\n";
  for (const auto& x : r.runs) {
    runs << exp << ',' << opt << ',' << x.size << ',' << x.seed << ',' << (x.crossed ? 1 : 0)
         << ',' << x.n_total << ',' << x.samples << ',' << x.oracle_calls << ',' << x.steps << ','
         << format_number(x.initial_cost) << ',' << format_number(x.final_cost) << ',' << x.stop
         << ',' << x.edges << ',' << x.maxcut << '\n';
  }
  auto agg = open_csv(dir / "aggregate.csv");
  agg << "experiment,optimizer,size,runs,crossed,success_rate,median,q25,q75,status\n";
  for (const auto& a : r.aggregates) {
    const auto& s = a.summary;
    agg << exp << ',' << a.optimizer << ',' << a.size << ',' << s.runs << ',' << s.crossed << ','
        << format_number(s.success_rate) << ',' << format_number(s.median) << ','
        << format_number(s.q25) << ',' << format_number(s.q75) << ','
        << (s.failed ? "failed" : "ok") << '\n';
  }
}

void write_bounds_csv(const std::filesystem::path& dir, const std::vector<BoundsRow>& rows) {
  auto out = open_csv(dir / "bounds.csv");
  out << "instance,epsilon,delta,lipschitz,lower,upper,trivial,beta_fit,c_fit\n";
  for (const auto& b : rows) {
    out << b.instance << ',' << format_number(b.epsilon) << ',' << format_number(b.delta) << ','
        << format_number(b.lipschitz) << ',' << format_number(b.lower) << ','
        << format_number(b.upper) << ',' << format_number(b.trivial) << ','
        << format_number(b.beta_fit) << ',' << format_number(b.c_fit) << '\n';
  }
}

void write_manifest(const std::filesystem::path& dir, const ExperimentSpec& spec) {
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw Error("cannot write " + (dir / "manifest.json").string());
  nlohmann::json m = spec.resolved;
  m["seeds"] = spec.seeds;
  // Instances are regenerated from (seed, size); record the derivation.
  if (spec.experiment == Experiment::qaoa || spec.experiment == Experiment::pqc) {
    m["instance_rng"] = "Rng(seed).child(size): graph child(1), start child(2), optimizer child(3)";
  }
  out << m.dump(2) << '\n';
}

std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec) {
  const std::filesystem::path dir = spec.output;
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  switch (spec.experiment) {
    case Experiment::toy:
      write_toy_csv(dir, spec, run_toy(spec));
      files = {dir / "toy_trace.csv", dir / "toy_summary.csv"};
      break;
    case Experiment::pqc:
    case Experiment::qaoa:
      write_vqa_csv(dir, spec, run_vqa(spec));
      files = {dir / "runs.csv", dir / "aggregate.csv"};
      break;
    case Experiment::bounds:
      write_bounds_csv(dir, run_bounds(spec));
      files = {dir / "bounds.csv"};
      break;
  }
  write_manifest(dir, spec);
  files.push_back(dir / "manifest.json");
  return files;
}

}  // namespace rrb::harness
