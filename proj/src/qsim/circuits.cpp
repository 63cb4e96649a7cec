#include "rrb/qsim/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "rrb/core/error.hpp"

namespace rrb::qsim {

namespace {

// P(bit q of the outcome is 1) summed directly over the probability vector.
double marginal_one(std::span<const double> probs, unsigned q) {
  const std::size_t bit = std::size_t{1} << q;
  double total = 0.0;
  for (std::size_t z = 0; z < probs.size(); ++z) {
    if (z & bit) total += probs[z];
  }
  return total;
}

double zz_correlator(std::span<const double> probs, unsigned u, unsigned v) {
  double total = 0.0;
  for (std::size_t z = 0; z < probs.size(); ++z) {
    const bool differ = ((z >> u) ^ (z >> v)) & 1U;
    total += differ ? -probs[z] : probs[z];
  }
  return total;
}

}  // namespace

PqcAnsatz PqcAnsatz::square(unsigned n_qubits) {
  PqcAnsatz a;
  a.n_qubits = n_qubits;
  a.layers = n_qubits;
  return a;
}

void PqcAnsatz::validate() const {
  if (n_qubits < 1 || n_qubits > StateVector::kMaxQubits) {
    throw InvalidArgument("ansatz qubit count out of range");
  }
  if (layers < 1) throw InvalidArgument("ansatz needs at least one layer");
  if (!axes.empty() && axes.size() != layers) {
    throw InvalidArgument("ansatz axis list must have one entry per layer");
  }
}

StateVector prepare_pqc(std::span<const double> theta, const PqcAnsatz& ansatz) {
  ansatz.validate();
  if (theta.size() != ansatz.parameter_count()) {
    throw InvalidArgument("expected " + std::to_string(ansatz.parameter_count()) +
                          " ansatz parameters, got " + std::to_string(theta.size()));
  }
  StateVector state(ansatz.n_qubits);
  const unsigned n = ansatz.n_qubits;
  for (unsigned l = 0; l < ansatz.layers; ++l) {
    const Axis axis = ansatz.axis(l);
    for (unsigned i = 0; i < n; ++i) {
      state.apply_1q(i, rotation_matrix(axis, theta[std::size_t{l} * n + i]));
    }
    for (unsigned i = 0; i + 1 < n; ++i) state.apply_cz(i, i + 1);
  }
  return state;
}

double pqc_cost_of(std::uint64_t z, unsigned n_qubits) {
  return static_cast<double>(std::popcount(z)) / n_qubits;
}

double pqc_cost_shot(std::span<const double> theta, const PqcAnsatz& ansatz, Rng& rng) {
  const auto state = prepare_pqc(theta, ansatz);
  const auto probs = state.probabilities();
  return pqc_cost_of(OutcomeSampler(probs).draw(rng), ansatz.n_qubits);
}

double expected_cost(std::span<const double> theta, const PqcAnsatz& ansatz) {
  const auto probs = prepare_pqc(theta, ansatz).probabilities();
  double total = 0.0;
  for (unsigned q = 0; q < ansatz.n_qubits; ++q) total += marginal_one(probs, q);
  return total / ansatz.n_qubits;
}

Graph::Graph(unsigned n_vertices, std::vector<std::pair<unsigned, unsigned>> edges)
    : n_(n_vertices) {
  std::set<std::pair<unsigned, unsigned>> seen;
  edges_.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n_ || v >= n_) {
      throw InvalidArgument("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") references a vertex outside [0, " + std::to_string(n_) + ")");
    }
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    const auto e = std::minmax(u, v);
    if (!seen.insert(e).second) {
      throw InvalidArgument("duplicate edge (" + std::to_string(e.first) + ", " +
                            std::to_string(e.second) + ")");
    }
    edges_.emplace_back(e.first, e.second);
  }
}

unsigned Graph::cut(std::uint64_t z) const {
  unsigned c = 0;
  for (auto [u, v] : edges_) c += ((z >> u) ^ (z >> v)) & 1U;
  return c;
}

Graph erdos_renyi(unsigned n, double edge_prob, Rng& rng) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw InvalidArgument("edge probability must lie in [0, 1]");
  }
  std::vector<std::pair<unsigned, unsigned>> edges;
  for (unsigned u = 0; u < n; ++u) {
    for (unsigned v = u + 1; v < n; ++v) {
      if (rng.bernoulli(edge_prob)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, std::move(edges));
}

unsigned maxcut_bruteforce(const Graph& graph) {
  const unsigned n = graph.n_vertices();
  if (n < 1 || n > 24) throw InvalidArgument("brute-force max cut needs 1 <= n <= 24");
  // Vertex n-1 stays on side 0; flipping every bit leaves the cut unchanged.
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  unsigned best = 0;
  for (std::uint64_t z = 0; z < count; ++z) best = std::max(best, graph.cut(z));
  return best;
}

Graph parse_graph(std::istream& in, const std::string& source) {
  auto fail = [&](std::size_t line, const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + what);
  };
  std::string text;
  std::size_t line_no = 0;
  long long n = -1, m = -1;
  std::vector<std::pair<unsigned, unsigned>> edges;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(text);
    long long a = 0, b = 0;
    std::string extra;
    if (!(ls >> a >> b) || (ls >> extra)) fail(line_no, "expected two integers");
    if (n < 0) {
      if (a < 1 || a > 64 || b < 0) fail(line_no, "bad header \"" + text + "\"");
      n = a;
      m = b;
      continue;
    }
    if (a < 0 || b < 0 || a >= n || b >= n) fail(line_no, "vertex out of range");
    edges.emplace_back(static_cast<unsigned>(a), static_cast<unsigned>(b));
  }
  if (n < 0) fail(line_no, "missing header");
  if (static_cast<long long>(edges.size()) != m) {
    fail(line_no, "header announces " + std::to_string(m) + " edges, found " +
                      std::to_string(edges.size()));
  }
  try {
    return Graph(static_cast<unsigned>(n), std::move(edges));
  } catch (const InvalidArgument& e) {
    throw ParseError(source + ": " + e.what());
  }
}

Graph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open graph file " + path);
  return parse_graph(in, path);
}

void write_graph(std::ostream& out, const Graph& graph) {
  out << graph.n_vertices() << ' ' << graph.n_edges() << '\n';
  for (auto [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

QaoaInstance QaoaInstance::make(Graph graph, unsigned layers) {
  if (graph.n_edges() == 0) throw InvalidArgument("QAOA needs a graph with at least one edge");
  if (graph.n_vertices() > StateVector::kMaxQubits) {
    throw InvalidArgument("graph has more vertices than the simulator supports");
  }
  if (layers < 1) throw InvalidArgument("QAOA needs at least one layer");
  QaoaInstance inst;
  inst.layers = layers;
  inst.maxcut = maxcut_bruteforce(graph);
  inst.cut_table.resize(std::size_t{1} << graph.n_vertices());
  for (std::size_t z = 0; z < inst.cut_table.size(); ++z) inst.cut_table[z] = graph.cut(z);
  inst.graph = std::move(graph);
  return inst;
}

StateVector prepare_qaoa(std::span<const double> gammas, std::span<const double> betas,
                         const QaoaInstance& inst) {
  if (gammas.size() != inst.layers || betas.size() != inst.layers) {
    throw InvalidArgument("QAOA expects " + std::to_string(inst.layers) +
                          " gammas and betas");
  }
  const unsigned n = inst.graph.n_vertices();
  StateVector state(n);
  const Mat2 h = hadamard_matrix();
  for (unsigned q = 0; q < n; ++q) state.apply_1q(q, h);
  std::vector<Amplitude> diag(state.size());
  for (unsigned l = 0; l < inst.layers; ++l) {
    for (std::size_t z = 0; z < diag.size(); ++z) {
      const double phi = -gammas[l] * inst.cut_table[z];
      diag[z] = {std::cos(phi), std::sin(phi)};
    }
    state.apply_diagonal(diag);
    const Mat2 mixer = rotation_matrix(Axis::x, 2.0 * betas[l]);
    for (unsigned q = 0; q < n; ++q) state.apply_1q(q, mixer);
  }
  return state;
}

double qaoa_cost_shot(std::span<const double> gammas, std::span<const double> betas,
                      const QaoaInstance& inst, Rng& rng) {
  const auto probs = prepare_qaoa(gammas, betas, inst).probabilities();
  const auto z = OutcomeSampler(probs).draw(rng);
  return 1.0 - inst.cut_table[z] / inst.maxcut;
}

double expected_cost(std::span<const double> gammas, std::span<const double> betas,
                     const QaoaInstance& inst) {
  const auto probs = prepare_qaoa(gammas, betas, inst).probabilities();
  double expected_cut = 0.0;
  for (auto [u, v] : inst.graph.edges()) {
    expected_cut += 0.5 * (1.0 - zz_correlator(probs, u, v));
  }
  return 1.0 - expected_cut / inst.maxcut;
}

}  // namespace rrb::qsim
