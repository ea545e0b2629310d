#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sucag/rng.hpp"

namespace sucag {

enum class TopologyKind { ErdosRenyi, Ring, Star, Complete };

// Simple undirected graph over nodes 0..n-1. Adjacency lists are kept sorted;
// the structure is immutable after construction and safe to share across
// threads.
struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adjacency;

  int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
  long edge_count() const;
  bool has_edge(int u, int v) const;
};

// Builds a topology deterministically from (kind, n, p, seed).
//   erdos_renyi: each pair i<j, swept in lexicographic order, gets one
//                Bernoulli(p) draw from mt19937_64(seed)
//   ring:        node i adjacent to (i±1) mod n
//   star:        node 0 adjacent to every other node
//   complete:    all pairs adjacent
// p is required (and must lie in (0,1]) iff kind == erdos_renyi.
Graph generate_topology(TopologyKind kind, int n, double p, std::uint64_t seed);
Graph generate_topology(TopologyKind kind, int n, std::uint64_t seed);

// BFS reachability of all nodes from node 0.
bool is_connected(const Graph& g);

// One step of the simple random walk: a neighbor of `current`, chosen
// uniformly. Consumes exactly one draw from rng. Throws if `current` is
// isolated (possible only on disconnected graphs).
int random_walk_step(const Graph& g, int current, Rng& rng);

// Edge-list dump, one "i j" pair per line with i<j, sorted.
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace sucag
