#include "sucag/objectives.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sucag/rng.hpp"

namespace sucag {

namespace {

constexpr double kSigmoidThirdDerivMax = 0.09622504486493763;  // 1/(6*sqrt(3))

// sigma(-t) = 1/(1+exp(t)) without overflow.
double sigmoid_neg(double t) {
  if (t >= 0.0) {
    double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

// log(1 + exp(-t)) without overflow.
double log1p_exp_neg(double t) {
  return std::log1p(std::exp(-std::abs(t))) + std::max(0.0, -t);
}

}  // namespace

ObjectiveSuite ObjectiveSuite::logistic(Dataset data) {
  if (data.n_agents <= 0 || data.batch <= 0 || data.dim <= 0)
    throw std::invalid_argument("ObjectiveSuite::logistic: empty dataset");
  if (data.features.rows() != data.rows() || data.features.cols() != data.dim)
    throw std::invalid_argument("ObjectiveSuite::logistic: feature matrix shape mismatch");
  if (data.labels.size() != data.rows())
    throw std::invalid_argument("ObjectiveSuite::logistic: label count mismatch");
  for (int r = 0; r < data.rows(); ++r)
    if (data.labels[r] != 1.0 && data.labels[r] != -1.0)
      throw std::invalid_argument("ObjectiveSuite::logistic: labels must be +-1");

  ObjectiveSuite s;
  s.kind_ = ObjectiveKind::Logistic;
  s.n_ = data.n_agents;
  s.d_ = data.dim;
  s.reg_weight_ = static_cast<double>(data.batch) / (2.0 * data.n_agents);
  s.data_ = std::move(data);
  return s;
}

ObjectiveSuite ObjectiveSuite::quadratic(std::vector<Matrix> A, std::vector<Vector> c) {
  if (A.empty() || A.size() != c.size())
    throw std::invalid_argument("ObjectiveSuite::quadratic: need matching non-empty A and c lists");
  const auto d = A.front().rows();
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (A[i].rows() != d || A[i].cols() != d || c[i].size() != d)
      throw std::invalid_argument("ObjectiveSuite::quadratic: dimension mismatch at component " + std::to_string(i));
    double asym = (A[i] - A[i].transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * (1.0 + A[i].cwiseAbs().maxCoeff()))
      throw std::invalid_argument("ObjectiveSuite::quadratic: component matrix " + std::to_string(i) + " is not symmetric");
  }

  ObjectiveSuite s;
  s.kind_ = ObjectiveKind::Quadratic;
  s.n_ = static_cast<int>(A.size());
  s.d_ = static_cast<int>(d);
  s.A_ = std::move(A);
  s.c_ = std::move(c);
  return s;
}

const Dataset& ObjectiveSuite::dataset() const {
  if (kind_ != ObjectiveKind::Logistic)
    throw std::logic_error("ObjectiveSuite::dataset: not a logistic suite");
  return data_;
}

void ObjectiveSuite::check_component(int i, const Vector& theta) const {
  if (i < 0 || i >= n_)
    throw std::invalid_argument("ObjectiveSuite: component index " + std::to_string(i) + " out of range");
  if (theta.size() != d_)
    throw std::invalid_argument("ObjectiveSuite: theta has dimension " + std::to_string(theta.size()) +
                                ", expected " + std::to_string(d_));
}

Evaluation ObjectiveSuite::component_eval(int i, const Vector& theta) const {
  check_component(i, theta);
  Evaluation ev;
  if (kind_ == ObjectiveKind::Quadratic) {
    ev.hess = A_[static_cast<std::size_t>(i)];
    ev.grad = ev.hess * theta - c_[static_cast<std::size_t>(i)];
    ev.value = 0.5 * theta.dot(ev.hess * theta) - c_[static_cast<std::size_t>(i)].dot(theta);
  } else {
    ev.value = 0.0;
    ev.grad = Vector::Zero(d_);
    ev.hess = Matrix::Zero(d_, d_);
    for (int b = 0; b < data_.batch; ++b) {
      int r = data_.row_index(i, b);
      auto x = data_.features.row(r).transpose();
      double y = data_.labels[r];
      double t = y * x.dot(theta);
      double s = sigmoid_neg(t);
      ev.value += log1p_exp_neg(t);
      ev.grad.noalias() += (-y * s) * x;
      ev.hess.noalias() += (s * (1.0 - s)) * (x * x.transpose());
    }
    ev.value += reg_weight_ * theta.squaredNorm();
    ev.grad.noalias() += (2.0 * reg_weight_) * theta;
    ev.hess.diagonal().array() += 2.0 * reg_weight_;
  }
  ev.hess = 0.5 * (ev.hess + ev.hess.transpose()).eval();
  return ev;
}

ValueGrad ObjectiveSuite::component_value_grad(int i, const Vector& theta) const {
  check_component(i, theta);
  ValueGrad vg;
  if (kind_ == ObjectiveKind::Quadratic) {
    const auto& A = A_[static_cast<std::size_t>(i)];
    const auto& c = c_[static_cast<std::size_t>(i)];
    vg.grad = A * theta - c;
    vg.value = 0.5 * theta.dot(A * theta) - c.dot(theta);
  } else {
    vg.value = 0.0;
    vg.grad = Vector::Zero(d_);
    for (int b = 0; b < data_.batch; ++b) {
      int r = data_.row_index(i, b);
      auto x = data_.features.row(r).transpose();
      double y = data_.labels[r];
      double t = y * x.dot(theta);
      vg.value += log1p_exp_neg(t);
      vg.grad.noalias() += (-y * sigmoid_neg(t)) * x;
    }
    vg.value += reg_weight_ * theta.squaredNorm();
    vg.grad.noalias() += (2.0 * reg_weight_) * theta;
  }
  return vg;
}

ValueGrad ObjectiveSuite::full_eval(const Vector& theta) const {
  ValueGrad acc;
  acc.value = 0.0;
  acc.grad = Vector::Zero(d_);
  for (int i = 0; i < n_; ++i) {
    ValueGrad vg = component_value_grad(i, theta);
    acc.value += vg.value;
    acc.grad += vg.grad;
  }
  acc.value /= n_;
  acc.grad /= n_;
  return acc;
}

Matrix ObjectiveSuite::full_hessian(const Vector& theta) const {
  Matrix H = Matrix::Zero(d_, d_);
  for (int i = 0; i < n_; ++i) H += component_eval(i, theta).hess;
  return H / n_;
}

SmoothnessConstants ObjectiveSuite::smoothness_constants() const {
  SmoothnessConstants sc;
  if (kind_ == ObjectiveKind::Quadratic) {
    Matrix avg = Matrix::Zero(d_, d_);
    for (const auto& A : A_) {
      Eigen::SelfAdjointEigenSolver<Matrix> comp(A, Eigen::EigenvaluesOnly);
      if (comp.eigenvalues().minCoeff() < -1e-10 * (1.0 + A.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("smoothness_constants: quadratic component is not PSD");
      avg += A;
    }
    avg /= n_;
    Eigen::SelfAdjointEigenSolver<Matrix> es(avg, Eigen::EigenvaluesOnly);
    sc.mu = es.eigenvalues().minCoeff();
    sc.L = es.eigenvalues().maxCoeff();
    if (sc.mu <= 0.0)
      throw std::invalid_argument("smoothness_constants: average quadratic matrix is not positive definite");
    sc.L_H_bar = 0.0;
  } else {
    // Gram bound: hess F <= (1/(4N)) sum_r x x' + (B/N) I in the PSD order.
    Matrix M = data_.features.transpose() * data_.features / (4.0 * n_);
    Vector v = Vector::Constant(d_, 1.0 / std::sqrt(static_cast<double>(d_)));
    double lambda = 0.0;
    for (int it = 0; it < 1000; ++it) {
      Vector w = M * v;
      double nw = w.norm();
      if (nw == 0.0) {
        lambda = 0.0;
        break;
      }
      double next = v.dot(w);
      v = w / nw;
      if (std::abs(next - lambda) <= 1e-8 * std::max(1.0, std::abs(next))) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    sc.L = lambda + 2.0 * reg_weight_;
    sc.mu = 2.0 * reg_weight_;  // = B/N
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
      double sum = 0.0;
      for (int b = 0; b < data_.batch; ++b) {
        double nx = data_.features.row(data_.row_index(i, b)).norm();
        sum += nx * nx * nx;
      }
      worst = std::max(worst, sum);
    }
    sc.L_H_bar = kSigmoidThirdDerivMax * worst;
  }
  return sc;
}

SyntheticData generate_synthetic(int d, int n_agents, int batch, std::uint64_t seed) {
  if (d <= 0 || n_agents <= 0 || batch <= 0)
    throw std::invalid_argument("generate_synthetic: d, n_agents, batch must be positive");
  Rng rng(seed);
  SyntheticData out;
  out.theta_gen = Vector(d);
  for (int j = 0; j < d; ++j) out.theta_gen[j] = uniform_range(rng, -1.0, 1.0);

  Dataset& data = out.data;
  data.n_agents = n_agents;
  data.batch = batch;
  data.dim = d;
  data.features = Matrix(n_agents * batch, d);
  data.labels = Vector(n_agents * batch);
  for (int r = 0; r < data.rows(); ++r) {
    for (int j = 0; j < d; ++j) data.features(r, j) = uniform_range(rng, -1.0, 1.0);
    data.labels[r] = data.features.row(r).dot(out.theta_gen) >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

ObjectiveSuite generate_quadratic(int d, int n_components, double mu, double L, std::uint64_t seed) {
  if (d < 2) throw std::invalid_argument("generate_quadratic: d must be >= 2");
  if (n_components <= 0) throw std::invalid_argument("generate_quadratic: need at least one component");
  if (!(mu > 0.0 && mu <= L)) throw std::invalid_argument("generate_quadratic: need 0 < mu <= L");

  Rng rng(seed);
  std::vector<Matrix> A(static_cast<std::size_t>(n_components));
  std::vector<Vector> c(static_cast<std::size_t>(n_components));
  Matrix G(d, d);
  for (int i = 0; i < n_components; ++i) {
    for (int r = 0; r < d; ++r)
      for (int j = 0; j < d; ++j) G(r, j) = uniform_range(rng, -1.0, 1.0);
    Matrix raw = G * G.transpose() / d;
    A[static_cast<std::size_t>(i)] = 0.5 * (raw + raw.transpose());
    Vector ci(d);
    for (int j = 0; j < d; ++j) ci[j] = uniform_range(rng, -1.0, 1.0);
    c[static_cast<std::size_t>(i)] = ci;
  }

  Matrix avg = Matrix::Zero(d, d);
  for (const auto& Ai : A) avg += Ai;
  avg /= n_components;
  Eigen::SelfAdjointEigenSolver<Matrix> es(avg);
  const Vector& S = es.eigenvalues();
  double spread = S[d - 1] - S[0];
  if (!(S[0] > 0.0) || !(spread > 1e-12 * S[d - 1]))
    throw std::runtime_error("generate_quadratic: degenerate random spectrum, change the seed");

  // Map the average's spectrum linearly onto [mu, L]; conjugating every
  // component by the same transform moves the average exactly onto the target.
  Vector scale(d);
  for (int j = 0; j < d; ++j) {
    double target = mu + (L - mu) * (S[j] - S[0]) / spread;
    scale[j] = std::sqrt(target / S[j]);
  }
  Matrix T = es.eigenvectors() * scale.asDiagonal() * es.eigenvectors().transpose();
  for (auto& Ai : A) {
    Matrix mapped = T * Ai * T.transpose();
    Ai = 0.5 * (mapped + mapped.transpose());
  }
  return ObjectiveSuite::quadratic(std::move(A), std::move(c));
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  out << "agent,batch,y";
  for (int j = 0; j < data.dim; ++j) out << ",x" << j;
  out << '\n';
  for (int i = 0; i < data.n_agents; ++i) {
    for (int b = 0; b < data.batch; ++b) {
      int r = data.row_index(i, b);
      out << i << ',' << b << ',' << format_g17(data.labels[r]);
      for (int j = 0; j < data.dim; ++j) out << ',' << format_g17(data.features(r, j));
      out << '\n';
    }
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(cur);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_dataset_csv: empty input");
  auto header = split_csv_line(line);
  if (header.size() < 4 || header[0] != "agent" || header[1] != "batch" || header[2] != "y")
    throw std::runtime_error("read_dataset_csv: unexpected header");
  int d = static_cast<int>(header.size()) - 3;

  struct Row {
    int agent, batch;
    double y;
    std::vector<double> x;
  };
  std::vector<Row> rows;
  int max_agent = -1, max_batch = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != d + 3)
      throw std::runtime_error("read_dataset_csv: bad field count on line " + std::to_string(rows.size() + 2));
    Row row;
    row.agent = std::stoi(fields[0]);
    row.batch = std::stoi(fields[1]);
    row.y = std::strtod(fields[2].c_str(), nullptr);
    row.x.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) row.x[static_cast<std::size_t>(j)] = std::strtod(fields[static_cast<std::size_t>(j) + 3].c_str(), nullptr);
    max_agent = std::max(max_agent, row.agent);
    max_batch = std::max(max_batch, row.batch);
    rows.push_back(std::move(row));
  }

  Dataset data;
  data.n_agents = max_agent + 1;
  data.batch = max_batch + 1;
  data.dim = d;
  if (static_cast<int>(rows.size()) != data.rows())
    throw std::runtime_error("read_dataset_csv: incomplete (agent, batch) grid");
  data.features = Matrix(data.rows(), d);
  data.labels = Vector(data.rows());
  std::vector<char> seen(static_cast<std::size_t>(data.rows()), 0);
  for (const auto& row : rows) {
    if (row.agent < 0 || row.agent >= data.n_agents || row.batch < 0 || row.batch >= data.batch)
      throw std::runtime_error("read_dataset_csv: (agent, batch) index out of range");
    int r = data.row_index(row.agent, row.batch);
    if (seen[static_cast<std::size_t>(r)]) throw std::runtime_error("read_dataset_csv: duplicate (agent, batch) row");
    seen[static_cast<std::size_t>(r)] = 1;
    data.labels[r] = row.y;
    for (int j = 0; j < d; ++j) data.features(r, j) = row.x[static_cast<std::size_t>(j)];
  }
  return data;
}

}  // namespace sucag
