#include "wsnd/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wsnd/errors.hpp"

namespace wsnd {

bool is_connected(int vertices, std::span<const Graph::Edge> edges) {
  if (vertices <= 1) return vertices == 1;
  std::vector<std::vector<int>> adj(vertices);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<char> seen(vertices, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == vertices;
}

Graph::Graph(int vertices, std::vector<Edge> edges) : vertices_(vertices) {
  if (vertices < 1) throw UsageError("Graph: need at least one vertex");
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertices || v >= vertices) {
      throw UsageError("Graph: edge endpoint out of range");
    }
    if (u == v) throw UsageError("Graph: self-loop on vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw UsageError("Graph: duplicate edge");
  }
  if (!is_connected(vertices, edges)) throw TopologyError("Graph: not connected");
  edges_ = std::move(edges);
  adjacency_.assign(vertices, {});
  for (const auto& [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
}

Graph Graph::complete(int vertices) {
  std::vector<Edge> e;
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v) e.emplace_back(u, v);
  return Graph(vertices, std::move(e));
}

Graph Graph::path(int vertices) {
  std::vector<Edge> e;
  for (int u = 0; u + 1 < vertices; ++u) e.emplace_back(u, u + 1);
  return Graph(vertices, std::move(e));
}

Graph random_geometric_graph(int vertices, double radius, Rng& rng, int max_attempts) {
  if (vertices < 1) throw UsageError("random_geometric_graph: need at least one vertex");
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<double> x(vertices), y(vertices);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    for (int i = 0; i < vertices; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
    }
    std::vector<Graph::Edge> edges;
    for (int u = 0; u < vertices; ++u) {
      for (int v = u + 1; v < vertices; ++v) {
        if (std::hypot(x[u] - x[v], y[u] - y[v]) <= radius) edges.emplace_back(u, v);
      }
    }
    if (is_connected(vertices, edges)) return Graph(vertices, std::move(edges));
  }
  throw TopologyError("random_geometric_graph: no connected graph after " +
                      std::to_string(max_attempts) + " attempts");
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << "# vertices " << g.vertices() << '\n';
  for (const auto& [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_edge_list(std::istream& is) {
  std::vector<Graph::Edge> edges;
  int declared = -1;
  int max_index = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first[0] == '#') {
      std::string key;
      if (ls >> key && key == "vertices") ls >> declared;
      continue;
    }
    int u = 0, v = 0;
    std::istringstream pair(line);
    if (!(pair >> u >> v)) {
      throw UsageError("edge list line " + std::to_string(lineno) + ": expected 'u v'");
    }
    edges.emplace_back(u, v);
    max_index = std::max({max_index, u, v});
  }
  const int n = declared > 0 ? declared : max_index + 1;
  return Graph(n, std::move(edges));
}

double metropolis_weight(const Graph& g, int u, int v) {
  return 1.0 / (1.0 + std::max(g.degree(u), g.degree(v)));
}

void consensus_round(const Graph& g, std::span<const double> in, std::span<double> out) {
  std::copy(in.begin(), in.end(), out.begin());
  for (const auto& [u, v] : g.edges()) {
    const double flux = metropolis_weight(g, u, v) * (in[v] - in[u]);
    out[u] += flux;
    out[v] -= flux;
  }
}

ConsensusResult consensus_average(const Graph& g, std::span<const double> x0,
                                  const ConsensusOptions& opts) {
  const int m = g.vertices();
  if (static_cast<int>(x0.size()) != m) {
    throw UsageError("consensus_average: state length does not match vertex count");
  }
  if (!(opts.tol > 0.0)) throw UsageError("consensus_average: tol must be positive");

  double mean = 0.0;
  for (double v : x0) mean += v;
  mean /= m;
  const double tol = opts.tol;

  ConsensusResult r;
  r.values.assign(x0.begin(), x0.end());
  auto deviation = [&](std::span<const double> x) {
    double d = 0.0;
    for (double v : x) d = std::max(d, std::abs(v - mean));
    return d;
  };
  r.max_deviation = deviation(r.values);
  if (opts.stop == ConsensusStop::kOracle && r.max_deviation <= tol) return r;

  std::vector<double> next(m);
  // Each node's previous successive change, for its local contraction estimate.
  std::vector<double> prev_change(m, std::numeric_limits<double>::infinity());
  int quiet_rounds = 0;
  while (r.iterations < opts.max_iter) {
    consensus_round(g, r.values, next);
    bool quiet = true;
    for (int i = 0; i < m; ++i) {
      const double c = std::abs(next[i] - r.values[i]);
      // Remaining error of a geometric tail c r / (1 - r), r from two changes.
      const double ratio = c / prev_change[i];
      const double tail = c == 0.0 ? 0.0
                          : ratio < 1.0 ? c * ratio / (1.0 - ratio)
                                        : std::numeric_limits<double>::infinity();
      quiet = quiet && c <= tol && tail <= tol;
      prev_change[i] = c;
    }
    r.values.swap(next);
    ++r.iterations;
    r.max_deviation = deviation(r.values);
    if (opts.stop == ConsensusStop::kOracle) {
      if (r.max_deviation <= tol) return r;
    } else {
      quiet_rounds = quiet ? quiet_rounds + 1 : 0;
      if (quiet_rounds >= opts.window) return r;
    }
  }
  throw ConsensusError("consensus_average: not converged after " +
                           std::to_string(opts.max_iter) + " rounds",
                       std::move(r));
}

} // namespace wsnd
