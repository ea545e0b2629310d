#pragma once

#include <functional>
#include <span>
#include <vector>

#include "sucag/objectives.hpp"

namespace sucag {

// Constants of the four higher-order error terms produced by curvature-aided
// tracking with Hessian-Lipschitz modulus L_H_bar and gradient modulus L:
//   q1 = 2*L_H_bar*L^2, q2 = 32*L_H_bar^3, q3 = 8*L_H_bar^2*L^4,
//   q4 = 2048*L_H_bar^6, paired with exponents eta = (3/2, 5/2, 2, 4).
struct ErrorTermConstants {
  double q[4];
  double eta[4];
};
ErrorTermConstants error_term_constants(double L_H_bar, double L);

struct StepSizeInputs {
  double mu = 1.0;      // strong convexity, must be >= 1 (normalized scale)
  double L = 1.0;       // gradient Lipschitz constant, >= mu
  double L_H_bar = 0.0; // worst component Hessian Lipschitz constant
  double Delta = 0.1;   // rate-split parameter in (0, 1)
  double c0 = 1.0;      // delay-envelope offset, >= 0
  double beta = 0.1;    // delay slack in (0, 1/3)
  double m0 = 1.0;      // delay offset, > 0
  double R0 = 0.0;      // ||theta^0 - theta*||^2
};

// Largest admissible step size
//   gamma = min( 2/(mu+L), min_j ( (3*m0/2)*(mu*L/(mu+L))*Delta + 1/C'_j )^{-1} ),
//   C'_j  = e^{1-c0} * beta * Delta * (1-Delta) / (4*q_j*R0^{eta_j - 1})
//           * (2*mu*L/(mu+L))^2.
// A term with q_j = 0 or R0 = 0 imposes no constraint and is skipped (its
// error term vanishes), so a purely quadratic suite yields exactly 2/(mu+L).
double theorem1_stepsize(const StepSizeInputs& in);

// Same bound for un-normalized problems: when mu < 1 the objective report is
// rescaled to mu' = 1, L' = L/mu, L_H_bar' = L_H_bar/mu (distances and hence
// R0 are unchanged) and the resulting step is mapped back as gamma = gamma'/mu.
double theorem1_stepsize_general(const SmoothnessConstants& sc, double Delta, double c0, double beta,
                                 double m0, double R0);

// Default rate-split parameter: min(0.1, (mu+L)^2 / (8*mu*L)).
double default_delta(double mu, double L);

struct RatePair {
  double delta;            // finite-horizon contraction 1 - Delta*gamma*2muL/(mu+L)
  double asymptotic_rate;  // 1 - 2*gamma*mu*L/(mu+L)
};
RatePair convergence_rate(double gamma, double mu, double L, double Delta);

// Tail bound on the staleness of an agent's record under a stationary
// activation chain with mean revisit time tau_bar:
//   P(delay > x) <= exp(1 - x/(1 + e*tau_bar)).
// The raw value exceeds 1 for small x; the reporting form clamps it.
double hitting_time_tail_raw(double tau_bar, double x);
double hitting_time_tail(double tau_bar, double x);

using DelaySequence = std::function<double(long)>;

// xi*(delta) = min_{0<=k<=k_max} [ log(m1(k))/log(delta) + eta*(k - m2(k))_+ - k ].
// The minimand eventually grows linearly, so a finite scan suffices; if the
// minimizer lands on k_max the scan range was too small and this throws.
double xi_star(double delta, const DelaySequence& m1, const DelaySequence& m2, double eta, long k_max);

struct RecursionTerm {
  double q = 0.0;    // coefficient, >= 0
  double eta = 2.0;  // exponent, > 1
  DelaySequence m1;  // multiplicative delay factor, >= 1
  DelaySequence m2;  // window reach, >= 0
};

// R(k+1) <= p*R(k) + sum_j q_j*m1_j(k) * max_{(k-m2_j(k))_+ <= l <= k} R(l)^{eta_j}
struct RecursionSpec {
  double p = 0.0;  // linear contraction in (0, 1)
  std::vector<RecursionTerm> terms;
  double R0 = 1.0;
};

// True iff every term satisfies
//   q_j <= (1/R0^{eta_j-1}) * delta^{-xi_j*(delta)} * (delta - p)/J,
// which guarantees R(k) <= delta^k * R0 for all k. Requires p < delta < 1.
bool check_q_condition(const RecursionSpec& spec, double delta, long k_max = 200000);

// Iterates the recursion with equality for `horizon` steps; returns
// R(0..horizon). Throws std::overflow_error when the sequence diverges
// beyond double range.
std::vector<double> simulate_recursion(const RecursionSpec& spec, long horizon);

// Builds the recursion the curvature-aided estimator obeys at step size gamma:
//   p = 1 - 2*gamma*mu*L/(mu+L), q_j = gamma^3*{q1,q2} and gamma^6*{q3,q4},
//   m1_j(k) = m(k)^2 for the cubic terms and m(k)^4 for the sextic ones,
//   m2_j(k) = 2*m(k).
RecursionSpec curvature_error_recursion(double gamma, double mu, double L, double L_H_bar,
                                        const DelaySequence& m_profile, double R0);

// One-step distance bound: with r_l = ||theta^l - theta*||^2 over the window
// l in [(k-2m_k)_+, k] (window.back() = r_k),
//   rhs = (1 - 2*gamma*mu*L/(mu+L)) * r_k
//       + gamma^3*m_k^2 * max_l (q1*r_l^{3/2} + q2*r_l^{5/2})
//       + gamma^6*m_k^4 * max_l (q3*r_l^2   + q4*r_l^4).
double descent_rhs(double gamma, double mu, double L, double L_H_bar, long m_k,
                   std::span<const double> window);

}  // namespace sucag
