#include "sucag/theory.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

namespace sucag {

ErrorTermConstants error_term_constants(double L_H_bar, double L) {
  if (L_H_bar < 0.0 || L <= 0.0) throw std::invalid_argument("error_term_constants: need L_H_bar >= 0, L > 0");
  ErrorTermConstants c;
  c.q[0] = 2.0 * L_H_bar * L * L;
  c.q[1] = 32.0 * L_H_bar * L_H_bar * L_H_bar;
  c.q[2] = 8.0 * L_H_bar * L_H_bar * L * L * L * L;
  c.q[3] = 2048.0 * std::pow(L_H_bar, 6);
  c.eta[0] = 1.5;
  c.eta[1] = 2.5;
  c.eta[2] = 2.0;
  c.eta[3] = 4.0;
  return c;
}

double theorem1_stepsize(const StepSizeInputs& in) {
  if (!(in.mu >= 1.0))
    throw std::invalid_argument("theorem1_stepsize: mu must be >= 1 (rescale the objective first), got " +
                                std::to_string(in.mu));
  if (!(in.L >= in.mu)) throw std::invalid_argument("theorem1_stepsize: need L >= mu");
  if (!(in.L_H_bar >= 0.0)) throw std::invalid_argument("theorem1_stepsize: need L_H_bar >= 0");
  if (!(in.Delta > 0.0 && in.Delta < 1.0)) throw std::invalid_argument("theorem1_stepsize: Delta must lie in (0,1)");
  if (!(in.Delta < (in.mu + in.L) * (in.mu + in.L) / (4.0 * in.mu * in.L)))
    throw std::invalid_argument("theorem1_stepsize: Delta violates the consistency bound (mu+L)^2/(4muL)");
  if (!(in.c0 >= 0.0)) throw std::invalid_argument("theorem1_stepsize: need c0 >= 0");
  if (!(in.beta > 0.0 && in.beta < 1.0 / 3.0)) throw std::invalid_argument("theorem1_stepsize: beta must lie in (0,1/3)");
  if (!(in.m0 > 0.0)) throw std::invalid_argument("theorem1_stepsize: need m0 > 0");
  if (!(in.R0 >= 0.0)) throw std::invalid_argument("theorem1_stepsize: need R0 >= 0");

  const double harmonic = in.mu * in.L / (in.mu + in.L);
  double gamma = 2.0 / (in.mu + in.L);
  ErrorTermConstants c = error_term_constants(in.L_H_bar, in.L);
  for (int j = 0; j < 4; ++j) {
    double weight = c.q[j] * std::pow(in.R0, c.eta[j] - 1.0);
    if (weight == 0.0) continue;  // term vanishes: no constraint
    double cj = std::exp(1.0 - in.c0) * in.beta * in.Delta * (1.0 - in.Delta) / (4.0 * weight) *
                (2.0 * harmonic) * (2.0 * harmonic);
    double bound = 1.0 / (1.5 * in.m0 * harmonic * in.Delta + 1.0 / cj);
    gamma = std::min(gamma, bound);
  }
  return gamma;
}

double theorem1_stepsize_general(const SmoothnessConstants& sc, double Delta, double c0, double beta,
                                 double m0, double R0) {
  StepSizeInputs in;
  in.Delta = Delta;
  in.c0 = c0;
  in.beta = beta;
  in.m0 = m0;
  in.R0 = R0;
  if (sc.mu >= 1.0) {
    in.mu = sc.mu;
    in.L = sc.L;
    in.L_H_bar = sc.L_H_bar;
    return theorem1_stepsize(in);
  }
  if (!(sc.mu > 0.0)) throw std::invalid_argument("theorem1_stepsize_general: need mu > 0");
  in.mu = 1.0;
  in.L = sc.L / sc.mu;
  in.L_H_bar = sc.L_H_bar / sc.mu;
  return theorem1_stepsize(in) / sc.mu;
}

double default_delta(double mu, double L) {
  if (!(mu > 0.0 && L >= mu)) throw std::invalid_argument("default_delta: need 0 < mu <= L");
  return std::min(0.1, (mu + L) * (mu + L) / (8.0 * mu * L));
}

RatePair convergence_rate(double gamma, double mu, double L, double Delta) {
  if (!(mu > 0.0 && L >= mu)) throw std::invalid_argument("convergence_rate: need 0 < mu <= L");
  if (!(gamma > 0.0 && gamma <= 2.0 / (mu + L)))
    throw std::invalid_argument("convergence_rate: gamma must lie in (0, 2/(mu+L)]");
  if (!(Delta > 0.0 && Delta < 1.0)) throw std::invalid_argument("convergence_rate: Delta must lie in (0,1)");
  RatePair r;
  double pull = 2.0 * gamma * mu * L / (mu + L);
  r.delta = 1.0 - Delta * pull;
  r.asymptotic_rate = 1.0 - pull;
  return r;
}

double hitting_time_tail_raw(double tau_bar, double x) {
  if (!(tau_bar > 0.0)) throw std::invalid_argument("hitting_time_tail: need tau_bar > 0");
  if (!(x >= 0.0)) throw std::invalid_argument("hitting_time_tail: need x >= 0");
  constexpr double e = 2.718281828459045;
  return std::exp(1.0 - x / (1.0 + e * tau_bar));
}

double hitting_time_tail(double tau_bar, double x) {
  return std::min(1.0, hitting_time_tail_raw(tau_bar, x));
}

double xi_star(double delta, const DelaySequence& m1, const DelaySequence& m2, double eta, long k_max) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("xi_star: delta must lie in (0,1)");
  if (!(eta > 1.0)) throw std::invalid_argument("xi_star: need eta > 1");
  if (k_max < 1) throw std::invalid_argument("xi_star: need k_max >= 1");
  const double log_delta = std::log(delta);
  double best = std::numeric_limits<double>::infinity();
  long argmin = 0;
  for (long k = 0; k <= k_max; ++k) {
    double m1k = m1(k);
    if (!(m1k >= 1.0)) throw std::invalid_argument("xi_star: m1(k) must be >= 1 (k=" + std::to_string(k) + ")");
    double m2k = m2(k);
    if (!(m2k >= 0.0)) throw std::invalid_argument("xi_star: m2(k) must be >= 0 (k=" + std::to_string(k) + ")");
    double value = std::log(m1k) / log_delta + eta * std::max(0.0, static_cast<double>(k) - m2k) -
                   static_cast<double>(k);
    if (value < best) {
      best = value;
      argmin = k;
    }
  }
  if (argmin == k_max)
    throw std::runtime_error("xi_star: minimizer at the scan boundary k_max=" + std::to_string(k_max) +
                             "; enlarge the scan range");
  return best;
}

bool check_q_condition(const RecursionSpec& spec, double delta, long k_max) {
  if (!(spec.p >= 0.0 && spec.p < 1.0)) throw std::invalid_argument("check_q_condition: p must lie in [0,1)");
  if (!(delta > spec.p && delta < 1.0))
    throw std::invalid_argument("check_q_condition: delta must lie in (p, 1)");
  if (!(spec.R0 > 0.0)) throw std::invalid_argument("check_q_condition: need R0 > 0");
  const double J = static_cast<double>(spec.terms.size());
  for (const auto& term : spec.terms) {
    if (term.q < 0.0) throw std::invalid_argument("check_q_condition: q must be >= 0");
    if (term.q == 0.0) continue;
    double xi = xi_star(delta, term.m1, term.m2, term.eta, k_max);
    double threshold = std::pow(spec.R0, 1.0 - term.eta) * std::pow(delta, -xi) * (delta - spec.p) / J;
    if (term.q > threshold) return false;
  }
  return true;
}

namespace {

// Sliding-window max over R(l)^eta; window starts are non-decreasing for the
// admissible delay profiles, with a direct-scan fallback otherwise.
struct WindowMax {
  std::deque<std::pair<long, double>> q;
  long last_lower = 0;

  void push(long idx, double value) {
    while (!q.empty() && q.back().second <= value) q.pop_back();
    q.emplace_back(idx, value);
  }
  double query(long lower, const std::vector<double>& all) {
    if (lower < last_lower) {
      double best = 0.0;
      for (std::size_t l = static_cast<std::size_t>(lower); l < all.size(); ++l) best = std::max(best, all[l]);
      return best;
    }
    last_lower = lower;
    while (!q.empty() && q.front().first < lower) q.pop_front();
    return q.front().second;
  }
};

}  // namespace

std::vector<double> simulate_recursion(const RecursionSpec& spec, long horizon) {
  if (!(spec.p >= 0.0 && spec.p < 1.0)) throw std::invalid_argument("simulate_recursion: p must lie in [0,1)");
  if (!(spec.R0 >= 0.0)) throw std::invalid_argument("simulate_recursion: need R0 >= 0");
  if (horizon < 0) throw std::invalid_argument("simulate_recursion: need horizon >= 0");

  std::vector<double> R;
  R.reserve(static_cast<std::size_t>(horizon) + 1);
  R.push_back(spec.R0);
  std::vector<WindowMax> windows(spec.terms.size());

  for (long k = 0; k < horizon; ++k) {
    double rk = R[static_cast<std::size_t>(k)];
    for (auto& w : windows) w.push(k, rk);
    double next = spec.p * rk;
    for (std::size_t j = 0; j < spec.terms.size(); ++j) {
      const auto& term = spec.terms[j];
      if (term.q == 0.0) continue;
      double m2k = term.m2(k);
      if (!(m2k >= 0.0)) throw std::invalid_argument("simulate_recursion: m2(k) must be >= 0");
      long lower = std::max(0L, static_cast<long>(std::ceil(static_cast<double>(k) - m2k - 1e-12)));
      double peak = windows[j].query(lower, R);
      double m1k = term.m1(k);
      if (!(m1k >= 1.0)) throw std::invalid_argument("simulate_recursion: m1(k) must be >= 1");
      next += term.q * m1k * std::pow(peak, term.eta);
    }
    if (!std::isfinite(next))
      throw std::overflow_error("simulate_recursion: sequence diverged at k=" + std::to_string(k + 1));
    R.push_back(next);
  }
  return R;
}

RecursionSpec curvature_error_recursion(double gamma, double mu, double L, double L_H_bar,
                                        const DelaySequence& m_profile, double R0) {
  if (!(gamma > 0.0)) throw std::invalid_argument("curvature_error_recursion: need gamma > 0");
  if (!(mu > 0.0 && L >= mu)) throw std::invalid_argument("curvature_error_recursion: need 0 < mu <= L");
  ErrorTermConstants c = error_term_constants(L_H_bar, L);
  RecursionSpec spec;
  spec.p = 1.0 - 2.0 * gamma * mu * L / (mu + L);
  spec.R0 = R0;
  const double g3 = gamma * gamma * gamma;
  const double g6 = g3 * g3;
  for (int j = 0; j < 4; ++j) {
    RecursionTerm term;
    term.q = (j < 2 ? g3 : g6) * c.q[j];
    term.eta = c.eta[j];
    int power = j < 2 ? 2 : 4;
    term.m1 = [m_profile, power](long k) { return std::pow(m_profile(k), power); };
    term.m2 = [m_profile](long k) { return 2.0 * m_profile(k); };
    spec.terms.push_back(std::move(term));
  }
  return spec;
}

double descent_rhs(double gamma, double mu, double L, double L_H_bar, long m_k,
                   std::span<const double> window) {
  if (window.empty()) throw std::invalid_argument("descent_rhs: window of past distances is empty");
  if (!(gamma > 0.0)) throw std::invalid_argument("descent_rhs: need gamma > 0");
  if (!(mu > 0.0 && L >= mu)) throw std::invalid_argument("descent_rhs: need 0 < mu <= L");
  if (m_k < 0) throw std::invalid_argument("descent_rhs: need m_k >= 0");

  ErrorTermConstants c = error_term_constants(L_H_bar, L);
  double cubic_peak = 0.0, sextic_peak = 0.0;
  for (double r : window) {
    if (!(r >= 0.0)) throw std::invalid_argument("descent_rhs: distances must be >= 0");
    cubic_peak = std::max(cubic_peak, c.q[0] * std::pow(r, 1.5) + c.q[1] * std::pow(r, 2.5));
    sextic_peak = std::max(sextic_peak, c.q[2] * r * r + c.q[3] * r * r * r * r);
  }
  const double rk = window.back();
  const double m2 = static_cast<double>(m_k) * static_cast<double>(m_k);
  const double g3 = gamma * gamma * gamma;
  return (1.0 - 2.0 * gamma * mu * L / (mu + L)) * rk + g3 * m2 * cubic_peak + g3 * g3 * m2 * m2 * sextic_peak;
}

}  // namespace sucag
