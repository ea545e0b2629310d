#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sucag/graph.hpp"
#include "sucag/rng.hpp"

namespace sucag {

enum class ActivationKind { IidUniform, Cyclic, RandomWalk, StarCoordinator };

const char* activation_name(ActivationKind k);
ActivationKind activation_from_name(const std::string& name);

// Produces the agent index activated at each iteration.
//   iid_uniform:      independent uniform draws over [0, n)
//   cyclic:           k mod n
//   random_walk:      token passed along a simple random walk on `graph`;
//                     the first activated agent is uniform over all nodes
//   star_coordinator: a virtual hub (not an agent) activates one of the n
//                     leaf agents independently and uniformly per iteration
class ActivationProcess {
 public:
  ActivationProcess(ActivationKind kind, int n_agents, std::uint64_t seed);
  ActivationProcess(ActivationKind kind, int n_agents, std::uint64_t seed, Graph walk_graph);

  int next_agent();
  ActivationKind kind() const { return kind_; }
  int agents() const { return n_; }

 private:
  ActivationKind kind_;
  int n_;
  Rng rng_;
  Graph graph_;       // random_walk only
  int current_ = -1;  // random_walk token position, -1 before the first call
  long counter_ = 0;  // cyclic position
};

// Tracks last-access iterations tau_i and the realized delay profile
//   m_k = max_i (k - tau_i^{k-1}),
// where unvisited agents (tau = -1) contribute k+1. Calls must come with
// strictly increasing k.
class DelayTracker {
 public:
  explicit DelayTracker(int n_agents);

  struct Delays {
    long m_k;          // worst staleness across agents entering iteration k
    long agent_delay;  // k - tau_{i_k} for the activated agent
  };
  Delays record(long k, int agent);

  const std::vector<long>& tau() const { return tau_; }
  const std::vector<long>& m_series() const { return m_series_; }

 private:
  std::vector<long> tau_;
  std::vector<long> m_series_;
  long last_k_ = -1;
  long min_tau_ = -1;
  int unvisited_;
};

// Smallest c0 with 4*log(m_k) <= c0 + log(k) for every k >= 1 in the series
// (index k into `m_series`). The fit certifies the polynomial delay-growth
// envelope m_k <= exp(c0/4) * k^{1/4} realized by a run.
double fit_delay_envelope(std::span<const long> m_series);

}  // namespace sucag
