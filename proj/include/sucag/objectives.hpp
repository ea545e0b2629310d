#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace sucag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ObjectiveKind { Logistic, Quadratic };

// Binary classification data split across agents: agent i holds `batch` rows
// (features.row(i*batch+b), labels[i*batch+b]), labels in {-1,+1}.
struct Dataset {
  int n_agents = 0;
  int batch = 0;
  int dim = 0;
  Matrix features;  // (n_agents*batch) x dim
  Vector labels;

  int rows() const { return n_agents * batch; }
  int row_index(int agent, int b) const { return agent * batch + b; }
};

struct Evaluation {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

struct ValueGrad {
  double value = 0.0;
  Vector grad;
};

struct SmoothnessConstants {
  double L = 0.0;       // gradient Lipschitz constant of the average F
  double mu = 0.0;      // strong convexity of F
  double L_H_bar = 0.0; // max over components of the Hessian Lipschitz constant
};

// A finite sum F(theta) = (1/N) sum_i f_i(theta) with analytic derivatives.
//
//   logistic:  f_i = sum_b log(1 + exp(-y<theta,x>)) + (B/(2N))||theta||^2
//   quadratic: f_i = (1/2) theta'A_i theta - c_i'theta, each A_i symmetric PSD
class ObjectiveSuite {
 public:
  // An empty placeholder; every operation requires a suite built by one of
  // the factories below.
  ObjectiveSuite() = default;

  static ObjectiveSuite logistic(Dataset data);
  static ObjectiveSuite quadratic(std::vector<Matrix> A, std::vector<Vector> c);

  ObjectiveKind kind() const { return kind_; }
  int components() const { return n_; }
  int dim() const { return d_; }
  const Dataset& dataset() const;
  const Matrix& component_matrix(int i) const { return A_.at(static_cast<std::size_t>(i)); }

  // f_i value, gradient and (symmetrized) Hessian at theta.
  Evaluation component_eval(int i, const Vector& theta) const;
  // Cheaper path when no curvature is needed.
  ValueGrad component_value_grad(int i, const Vector& theta) const;

  // F and grad F, averaged over all components in index order.
  ValueGrad full_eval(const Vector& theta) const;
  Matrix full_hessian(const Vector& theta) const;

  // L via power iteration on the data Gram bound (logistic) or the extreme
  // eigenvalues of the average matrix (quadratic); mu from the regularizer
  // (logistic) or lambda_min (quadratic); L_H_bar analytic.
  SmoothnessConstants smoothness_constants() const;

 private:
  void check_component(int i, const Vector& theta) const;

  ObjectiveKind kind_ = ObjectiveKind::Quadratic;
  int n_ = 0;
  int d_ = 0;
  Dataset data_;               // logistic
  double reg_weight_ = 0.0;    // logistic: B/(2N)
  std::vector<Matrix> A_;      // quadratic
  std::vector<Vector> c_;
};

struct SyntheticData {
  Dataset data;
  Vector theta_gen;  // generating hyperplane normal
};

// theta_gen ~ U[-1,1]^d, then x_{i,b} ~ U[-1,1]^d in (agent, batch) order,
// y = sign(<x, theta_gen>) with sign(0) -> +1. Deterministic in seed.
SyntheticData generate_synthetic(int d, int n_agents, int batch, std::uint64_t seed);

// Random PSD quadratic suite whose average matrix has lambda_min = mu and
// lambda_max = L exactly (each component Gram matrix is conjugated by a
// spectrum-mapping transform of the average). Deterministic in seed.
ObjectiveSuite generate_quadratic(int d, int n_components, double mu, double L, std::uint64_t seed);

// CSV with header "agent,batch,y,x0,...,x{d-1}", floats at 17 significant
// digits (doubles round-trip exactly).
void write_dataset_csv(const Dataset& data, std::ostream& out);
Dataset read_dataset_csv(std::istream& in);

// snprintf "%.17g" helper shared by all CSV writers.
std::string format_g17(double x);

}  // namespace sucag
