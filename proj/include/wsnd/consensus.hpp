#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wsnd/model.hpp"

namespace wsnd {

/// Undirected, simple, connected communication graph between sensors.
class Graph {
public:
  using Edge = std::pair<int, int>;

  /// Throws UsageError on self-loops, duplicates or out-of-range vertices and
  /// TopologyError if the graph is not connected.
  Graph(int vertices, std::vector<Edge> edges);

  static Graph complete(int vertices);
  static Graph path(int vertices);

  int vertices() const { return vertices_; }
  /// Edges with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

  friend bool operator==(const Graph&, const Graph&) = default;

private:
  int vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

bool is_connected(int vertices, std::span<const Graph::Edge> edges);

/// Vertices uniform in the unit square, edge iff distance <= radius.
/// Redrawn up to `max_attempts` times until connected, else TopologyError.
Graph random_geometric_graph(int vertices, double radius, Rng& rng, int max_attempts = 1000);

/// Edge-list text: optional "# vertices M" header, then one "u v" pair per line.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

enum class ConsensusStop {
  /// Stop once every state is within tol of the true initial average.
  /// Needs global knowledge; used for testing.
  kOracle,
  /// Stop once, at every node, both the successive change and the geometric
  /// tail estimate c r / (1 - r) (r = ratio of the node's last two changes)
  /// have stayed within tol for `window` consecutive rounds. Needs only
  /// local information.
  kLocalWindow,
};

struct ConsensusOptions {
  double tol = 1e-10; ///< absolute
  int max_iter = 1000;
  ConsensusStop stop = ConsensusStop::kOracle;
  int window = 5;
};

struct ConsensusResult {
  std::vector<double> values;
  int iterations = 0;
  double max_deviation = 0.0; ///< max_i |values_i - mean(x0)|
};

class ConsensusError : public std::runtime_error {
public:
  ConsensusError(const std::string& what, ConsensusResult last)
      : std::runtime_error(what), last_(std::move(last)) {}
  const ConsensusResult& last_state() const { return last_; }

private:
  ConsensusResult last_;
};

/// Metropolis-Hastings weight for edge (u, v): 1 / (1 + max(d_u, d_v)).
double metropolis_weight(const Graph& g, int u, int v);

/// One synchronous round x <- W x with Metropolis weights.
void consensus_round(const Graph& g, std::span<const double> in, std::span<double> out);

/// Iterate consensus rounds from x0 until the stop rule fires.
/// Throws ConsensusError (carrying the last state) after max_iter rounds.
ConsensusResult consensus_average(const Graph& g, std::span<const double> x0,
                                  const ConsensusOptions& opts);

} // namespace wsnd
