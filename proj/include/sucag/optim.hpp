#pragma once

#include <vector>

#include "sucag/objectives.hpp"

namespace sucag {

enum class Method { Sucag, Sg, Sag, Saga, Ciag };

const char* method_name(Method m);
Method method_from_name(const std::string& name);

// Per-component memory: the iterate, gradient and Hessian captured the last
// time the component was activated. tau = -1 marks "never visited"; the
// stored arrays are zero-initialized so cold-start aggregates vanish.
struct ComponentRecord {
  long tau = -1;
  Vector theta;
  Vector grad;
  Matrix hess;
};

// Running averages over the records:
//   b = (1/N) sum_i (grad_i - hess_i * theta_i),  H = (1/N) sum_i hess_i
// so that b + H*theta is the average first-order expansion of the stale
// component gradients around their stored iterates.
struct AggregateState {
  Vector b;
  Matrix H;
};

struct EstimatorResult {
  Vector g;           // the gradient estimate driving the update
  double value;       // f_{i_k}(theta^k)
  Vector fresh_grad;  // grad f_{i_k}(theta^k)
  Matrix fresh_hess;  // hess f_{i_k}(theta^k), zero when curvature is unused
};

struct OptimizerOptions {
  double gamma = 0.0;
  // When false, Hessians are never evaluated and every stored/fresh Hessian is
  // identically zero: Sucag degrades exactly to Saga and Ciag to gradient-only
  // incremental averaging. Useful as a cheap mode and as an equivalence check.
  bool use_curvature = true;
  // Every `recompute_interval` steps the running aggregates are replaced by
  // direct sums over the records to cancel float drift. 0 disables.
  long recompute_interval = 0;
};

// One optimizer instance = method + iterate + component memory. The update is
//   theta^{k+1} = theta^k - gamma * g(i_k),
// where g depends on the method:
//   Sucag: (fresh_grad - taylor_{i_k}(theta)) + b + H*theta
//   Sg:    fresh_grad
//   Sag:   (fresh_grad - stored_grad_{i_k})/N + mean stored grad
//   Saga:  (fresh_grad - stored_grad_{i_k})   + mean stored grad
//   Ciag:  b + H*theta with component i_k's record already refreshed at theta^k
// Sucag and Saga estimates are unbiased over a uniformly random i_k; Sag and
// Ciag are biased but lower-variance.
class Optimizer {
 public:
  Optimizer(const ObjectiveSuite& suite, Method method, OptimizerOptions opt);

  // Pure: computes the estimate the next step would use. Does not mutate.
  EstimatorResult estimator(int i_k) const;

  // Applies one update with component i_k, refreshes that record (tau <- k)
  // and the running aggregates, then advances the iteration counter.
  void step(int i_k);

  // Aggregates recomputed from scratch over the records (the drift oracle).
  AggregateState recompute_aggregates() const;

  // The recursion used by step(): aggregates with record i_k replaced by the
  // fresh evaluation at theta_k. Pure.
  AggregateState update_aggregates(int i_k, const Vector& theta_k, const Vector& fresh_grad,
                                   const Matrix& fresh_hess) const;

  const Vector& theta() const { return theta_; }
  void set_theta(const Vector& theta0);
  long iteration() const { return k_; }
  Method method() const { return method_; }
  const OptimizerOptions& options() const { return opt_; }
  const std::vector<ComponentRecord>& records() const { return records_; }
  const AggregateState& aggregates() const { return agg_; }
  const Vector& grad_average() const { return grad_avg_; }
  bool all_visited() const;

 private:
  bool needs_curvature() const;
  bool uses_aggregates() const { return method_ == Method::Sucag || method_ == Method::Ciag; }

  const ObjectiveSuite* suite_;
  Method method_;
  OptimizerOptions opt_;
  Vector theta_;
  long k_ = 0;
  std::vector<ComponentRecord> records_;
  AggregateState agg_;
  Vector grad_avg_;  // (1/N) sum_i stored_grad_i, kept recursively for Sag/Saga
};

}  // namespace sucag
