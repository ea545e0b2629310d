#include "sucag/graph.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sucag {

long Graph::edge_count() const {
  long twice = 0;
  for (const auto& nbrs : adjacency) twice += static_cast<long>(nbrs.size());
  return twice / 2;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adjacency[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

namespace {

void add_edge(Graph& g, int u, int v) {
  g.adjacency[u].push_back(v);
  g.adjacency[v].push_back(u);
}

}  // namespace

Graph generate_topology(TopologyKind kind, int n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_topology: n must be >= 2, got " + std::to_string(n));
  if (kind == TopologyKind::ErdosRenyi) {
    if (!(p > 0.0 && p <= 1.0))
      throw std::invalid_argument("generate_topology: erdos_renyi needs p in (0,1], got " + std::to_string(p));
  }

  Graph g;
  g.n = n;
  g.adjacency.assign(static_cast<std::size_t>(n), {});

  switch (kind) {
    case TopologyKind::ErdosRenyi: {
      Rng rng(seed);
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j)
          if (uniform01(rng) < p) add_edge(g, i, j);
      break;
    }
    case TopologyKind::Ring: {
      if (n == 2) {
        add_edge(g, 0, 1);  // a 2-ring would double the single edge
      } else {
        for (int i = 0; i < n; ++i) add_edge(g, i, (i + 1) % n);
      }
      break;
    }
    case TopologyKind::Star: {
      for (int i = 1; i < n; ++i) add_edge(g, 0, i);
      break;
    }
    case TopologyKind::Complete: {
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j) add_edge(g, i, j);
      break;
    }
  }

  for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

Graph generate_topology(TopologyKind kind, int n, std::uint64_t seed) {
  if (kind == TopologyKind::ErdosRenyi)
    throw std::invalid_argument("generate_topology: erdos_renyi requires an edge probability p");
  return generate_topology(kind, n, 1.0, seed);
}

bool is_connected(const Graph& g) {
  if (g.n == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : g.adjacency[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == g.n;
}

int random_walk_step(const Graph& g, int current, Rng& rng) {
  if (current < 0 || current >= g.n)
    throw std::invalid_argument("random_walk_step: node " + std::to_string(current) + " out of range");
  const auto& nbrs = g.adjacency[current];
  if (nbrs.empty())
    throw std::runtime_error("random_walk_step: node " + std::to_string(current) + " is isolated");
  return nbrs[uniform_index(rng, nbrs.size())];
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (int i = 0; i < g.n; ++i)
    for (int j : g.adjacency[i])
      if (i < j) out << i << ' ' << j << '\n';
}

}  // namespace sucag
