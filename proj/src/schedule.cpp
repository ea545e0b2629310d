#include "sucag/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sucag {

const char* activation_name(ActivationKind k) {
  switch (k) {
    case ActivationKind::IidUniform: return "iid_uniform";
    case ActivationKind::Cyclic: return "cyclic";
    case ActivationKind::RandomWalk: return "random_walk";
    case ActivationKind::StarCoordinator: return "star_coordinator";
  }
  return "?";
}

ActivationKind activation_from_name(const std::string& name) {
  if (name == "iid_uniform") return ActivationKind::IidUniform;
  if (name == "cyclic") return ActivationKind::Cyclic;
  if (name == "random_walk") return ActivationKind::RandomWalk;
  if (name == "star_coordinator") return ActivationKind::StarCoordinator;
  throw std::invalid_argument("unknown activation kind '" + name + "'");
}

ActivationProcess::ActivationProcess(ActivationKind kind, int n_agents, std::uint64_t seed)
    : kind_(kind), n_(n_agents), rng_(seed) {
  if (n_ <= 0) throw std::invalid_argument("ActivationProcess: need at least one agent");
  if (kind_ == ActivationKind::RandomWalk)
    throw std::invalid_argument("ActivationProcess: random_walk needs a graph");
}

ActivationProcess::ActivationProcess(ActivationKind kind, int n_agents, std::uint64_t seed, Graph walk_graph)
    : kind_(kind), n_(n_agents), rng_(seed), graph_(std::move(walk_graph)) {
  if (n_ <= 0) throw std::invalid_argument("ActivationProcess: need at least one agent");
  if (kind_ != ActivationKind::RandomWalk)
    throw std::invalid_argument("ActivationProcess: only random_walk takes a graph");
  if (graph_.n != n_)
    throw std::invalid_argument("ActivationProcess: graph has " + std::to_string(graph_.n) + " nodes for " +
                                std::to_string(n_) + " agents");
}

int ActivationProcess::next_agent() {
  switch (kind_) {
    case ActivationKind::IidUniform:
    case ActivationKind::StarCoordinator:
      return static_cast<int>(uniform_index(rng_, static_cast<std::size_t>(n_)));
    case ActivationKind::Cyclic:
      return static_cast<int>(counter_++ % n_);
    case ActivationKind::RandomWalk:
      if (current_ < 0) {
        current_ = static_cast<int>(uniform_index(rng_, static_cast<std::size_t>(n_)));
      } else {
        current_ = random_walk_step(graph_, current_, rng_);
      }
      return current_;
  }
  throw std::logic_error("ActivationProcess: bad kind");
}

DelayTracker::DelayTracker(int n_agents) : unvisited_(n_agents) {
  if (n_agents <= 0) throw std::invalid_argument("DelayTracker: need at least one agent");
  tau_.assign(static_cast<std::size_t>(n_agents), -1);
}

DelayTracker::Delays DelayTracker::record(long k, int agent) {
  if (k <= last_k_)
    throw std::invalid_argument("DelayTracker: iteration index must be strictly increasing (got " +
                                std::to_string(k) + " after " + std::to_string(last_k_) + ")");
  if (agent < 0 || agent >= static_cast<int>(tau_.size()))
    throw std::invalid_argument("DelayTracker: agent index out of range");

  Delays d;
  d.m_k = k - min_tau_;
  d.agent_delay = k - tau_[static_cast<std::size_t>(agent)];

  long old_tau = tau_[static_cast<std::size_t>(agent)];
  if (old_tau < 0) --unvisited_;
  tau_[static_cast<std::size_t>(agent)] = k;
  // min_tau changes only when the oldest record is the one refreshed.
  if (old_tau == min_tau_) {
    if (unvisited_ > 0) {
      min_tau_ = -1;
    } else {
      min_tau_ = *std::min_element(tau_.begin(), tau_.end());
    }
  }
  last_k_ = k;
  m_series_.push_back(d.m_k);
  return d;
}

double fit_delay_envelope(std::span<const long> m_series) {
  if (m_series.size() < 2) throw std::invalid_argument("fit_delay_envelope: need at least two iterations");
  double c0 = 0.0;
  for (std::size_t k = 1; k < m_series.size(); ++k) {
    double m = static_cast<double>(m_series[k]);
    if (m < 1.0) throw std::invalid_argument("fit_delay_envelope: delays must be >= 1");
    c0 = std::max(c0, 4.0 * std::log(m) - std::log(static_cast<double>(k)));
  }
  return c0;
}

}  // namespace sucag
