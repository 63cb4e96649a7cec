#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rrb/core/rng.hpp"
#include "rrb/qsim/state_vector.hpp"

namespace rrb::qsim {

/// Layered hardware-efficient ansatz: each layer rotates every qubit about
/// its layer axis, then applies CZ on the ladder (0,1), (1,2), ..., (n-2,n-1).
struct PqcAnsatz {
  unsigned n_qubits = 1;
  unsigned layers = 1;
  /// One axis per layer; empty means R_y everywhere.
  std::vector<Axis> axes;

  /// The usual configuration with as many layers as qubits.
  static PqcAnsatz square(unsigned n_qubits);

  std::size_t parameter_count() const { return std::size_t{n_qubits} * layers; }
  Axis axis(unsigned layer) const { return axes.empty() ? Axis::y : axes.at(layer); }
  void validate() const;
};

/// V(theta)|0>; theta[l * n + i] is the angle of qubit i in layer l.
StateVector prepare_pqc(std::span<const double> theta, const PqcAnsatz& ansatz);

/// Local cost of a basis state: the fraction of qubits measured as 1.
double pqc_cost_of(std::uint64_t z, unsigned n_qubits);

/// One measurement of the local cost 1 - (#zero bits)/n.
double pqc_cost_shot(std::span<const double> theta, const PqcAnsatz& ansatz, Rng& rng);

/// Exact local cost, (1/n) sum_i P(qubit i reads 1).
double expected_cost(std::span<const double> theta, const PqcAnsatz& ansatz);

/// Simple undirected graph with canonical edges (u < v).
class Graph {
 public:
  Graph() = default;
  /// Orients each pair as (min, max); rejects self-loops, duplicates and
  /// out-of-range vertices.
  Graph(unsigned n_vertices, std::vector<std::pair<unsigned, unsigned>> edges);

  unsigned n_vertices() const { return n_; }
  const std::vector<std::pair<unsigned, unsigned>>& edges() const { return edges_; }
  std::size_t n_edges() const { return edges_.size(); }

  /// Number of edges whose endpoints get different bits of z.
  unsigned cut(std::uint64_t z) const;

 private:
  unsigned n_ = 0;
  std::vector<std::pair<unsigned, unsigned>> edges_;
};

Graph erdos_renyi(unsigned n, double edge_prob, Rng& rng);

unsigned maxcut_bruteforce(const Graph& graph);

/// "n m" on the first line, then m lines "u v" with 0-based vertices.
Graph parse_graph(std::istream& in, const std::string& source = "<graph>");
Graph read_graph(const std::string& path);
void write_graph(std::ostream& out, const Graph& graph);

struct QaoaInstance {
  Graph graph;
  unsigned layers = 2;
  unsigned maxcut = 0;
  /// cut(z) for every basis state.
  std::vector<double> cut_table;

  /// Precomputes the maximum cut; rejects graphs without edges.
  static QaoaInstance make(Graph graph, unsigned layers);
};

/// H^n |0>, then per layer exp(-i gamma C) and exp(-i beta sum_j X_j).
StateVector prepare_qaoa(std::span<const double> gammas, std::span<const double> betas,
                         const QaoaInstance& inst);

/// One measurement of 1 - cut(z)/maxcut.
double qaoa_cost_shot(std::span<const double> gammas, std::span<const double> betas,
                      const QaoaInstance& inst, Rng& rng);

/// Exact 1 - E[cut]/maxcut, with E[cut] assembled from the edge
/// correlators <Z_u Z_v>.
double expected_cost(std::span<const double> gammas, std::span<const double> betas,
                     const QaoaInstance& inst);

}  // namespace rrb::qsim
