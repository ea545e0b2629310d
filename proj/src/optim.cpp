#include "sucag/optim.hpp"

#include <stdexcept>
#include <string>

namespace sucag {

const char* method_name(Method m) {
  switch (m) {
    case Method::Sucag: return "sucag";
    case Method::Sg: return "sg";
    case Method::Sag: return "sag";
    case Method::Saga: return "saga";
    case Method::Ciag: return "ciag";
  }
  return "?";
}

Method method_from_name(const std::string& name) {
  if (name == "sucag") return Method::Sucag;
  if (name == "sg") return Method::Sg;
  if (name == "sag") return Method::Sag;
  if (name == "saga") return Method::Saga;
  if (name == "ciag") return Method::Ciag;
  throw std::invalid_argument("unknown method '" + name + "'");
}

Optimizer::Optimizer(const ObjectiveSuite& suite, Method method, OptimizerOptions opt)
    : suite_(&suite), method_(method), opt_(opt) {
  if (!(opt_.gamma >= 0.0)) throw std::invalid_argument("Optimizer: gamma must be >= 0");
  if (opt_.recompute_interval < 0) throw std::invalid_argument("Optimizer: recompute interval must be >= 0");
  const int d = suite.dim();
  theta_ = Vector::Zero(d);
  records_.resize(static_cast<std::size_t>(suite.components()));
  for (auto& rec : records_) {
    rec.tau = -1;
    rec.theta = Vector::Zero(d);
    rec.grad = Vector::Zero(d);
    rec.hess = Matrix::Zero(d, d);
  }
  agg_.b = Vector::Zero(d);
  agg_.H = Matrix::Zero(d, d);
  grad_avg_ = Vector::Zero(d);
}

void Optimizer::set_theta(const Vector& theta0) {
  if (theta0.size() != suite_->dim()) throw std::invalid_argument("Optimizer::set_theta: dimension mismatch");
  if (k_ != 0) throw std::logic_error("Optimizer::set_theta: only valid before the first step");
  theta_ = theta0;
}

bool Optimizer::needs_curvature() const {
  return opt_.use_curvature && (method_ == Method::Sucag || method_ == Method::Ciag);
}

bool Optimizer::all_visited() const {
  for (const auto& rec : records_) {
    if (rec.tau < 0) return false;
  }
  return true;
}

EstimatorResult Optimizer::estimator(int i_k) const {
  if (i_k < 0 || i_k >= suite_->components())
    throw std::invalid_argument("Optimizer::estimator: component index " + std::to_string(i_k) + " out of range");

  EstimatorResult res;
  if (needs_curvature()) {
    Evaluation ev = suite_->component_eval(i_k, theta_);
    res.value = ev.value;
    res.fresh_grad = std::move(ev.grad);
    res.fresh_hess = std::move(ev.hess);
  } else {
    ValueGrad vg = suite_->component_value_grad(i_k, theta_);
    res.value = vg.value;
    res.fresh_grad = std::move(vg.grad);
    res.fresh_hess = Matrix::Zero(suite_->dim(), suite_->dim());
  }

  const auto& rec = records_[static_cast<std::size_t>(i_k)];
  const double n = static_cast<double>(records_.size());
  switch (method_) {
    case Method::Sucag: {
      Vector taylor = rec.grad + rec.hess * (theta_ - rec.theta);
      res.g = (res.fresh_grad - taylor) + agg_.b + agg_.H * theta_;
      break;
    }
    case Method::Sg:
      res.g = res.fresh_grad;
      break;
    case Method::Sag:
      res.g = (res.fresh_grad - rec.grad) / n + grad_avg_;
      break;
    case Method::Saga:
      res.g = (res.fresh_grad - rec.grad) + grad_avg_;
      break;
    case Method::Ciag: {
      AggregateState upd = update_aggregates(i_k, theta_, res.fresh_grad, res.fresh_hess);
      res.g = upd.b + upd.H * theta_;
      break;
    }
  }
  return res;
}

AggregateState Optimizer::update_aggregates(int i_k, const Vector& theta_k, const Vector& fresh_grad,
                                            const Matrix& fresh_hess) const {
  const auto& rec = records_[static_cast<std::size_t>(i_k)];
  const double n = static_cast<double>(records_.size());
  AggregateState upd;
  upd.b = agg_.b + ((fresh_grad - fresh_hess * theta_k) - (rec.grad - rec.hess * rec.theta)) / n;
  upd.H = agg_.H + (fresh_hess - rec.hess) / n;
  return upd;
}

AggregateState Optimizer::recompute_aggregates() const {
  const int d = suite_->dim();
  const double n = static_cast<double>(records_.size());
  AggregateState direct;
  direct.b = Vector::Zero(d);
  direct.H = Matrix::Zero(d, d);
  for (const auto& rec : records_) {
    direct.b += rec.grad - rec.hess * rec.theta;
    direct.H += rec.hess;
  }
  direct.b /= n;
  direct.H /= n;
  return direct;
}

void Optimizer::step(int i_k) {
  EstimatorResult est = estimator(i_k);
  Vector theta_next = theta_ - opt_.gamma * est.g;

  if (uses_aggregates()) agg_ = update_aggregates(i_k, theta_, est.fresh_grad, est.fresh_hess);
  auto& rec = records_[static_cast<std::size_t>(i_k)];
  grad_avg_ += (est.fresh_grad - rec.grad) / static_cast<double>(records_.size());

  rec.tau = k_;
  rec.theta = theta_;
  rec.grad = std::move(est.fresh_grad);
  rec.hess = std::move(est.fresh_hess);

  theta_ = std::move(theta_next);
  ++k_;

  if (opt_.recompute_interval > 0 && k_ % opt_.recompute_interval == 0) {
    if (uses_aggregates()) agg_ = recompute_aggregates();
    Vector sum = Vector::Zero(suite_->dim());
    for (const auto& r : records_) sum += r.grad;
    grad_avg_ = sum / static_cast<double>(records_.size());
  }
}

}  // namespace sucag
