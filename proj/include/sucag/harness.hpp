#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sucag/graph.hpp"
#include "sucag/objectives.hpp"
#include "sucag/optim.hpp"
#include "sucag/schedule.hpp"

namespace sucag {

// Config-file problems (CLI exit code 1).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Numerical breakdowns: reference non-convergence, divergence (CLI exit code 2).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Step-size rules accepted in configs: a number, "auto" (the analytical
// step-size bound from the convergence guarantee, theorem1_stepsize_general;
// deliberately conservative), "<x>/L" or "<x>/(mu+L)". A method entry that
// omits gamma defaults to "0.2/L" for sag/saga and "auto" for sucag/ciag;
// sg has no default and must state one.
struct GammaRule {
  enum class Kind { Auto, Absolute, OverL, OverMuPlusL };
  Kind kind = Kind::Auto;
  double value = 0.0;
};
GammaRule parse_gamma_rule(const std::string& text);

struct ObjectiveConfig {
  ObjectiveKind kind = ObjectiveKind::Logistic;
  int d = 0;
  int N = 0;
  int B = 1;          // logistic batch size
  double mu = 0.0;    // quadratic target spectrum
  double L = 0.0;
  std::uint64_t data_seed = 0;
};

struct TopologyConfig {
  TopologyKind kind = TopologyKind::ErdosRenyi;
  int n = 0;
  double p = -1.0;  // erdos_renyi only
  std::uint64_t graph_seed = 0;
};

struct MethodSpec {
  Method method = Method::Sucag;
  std::string label;  // defaults to the method name; must be unique
  GammaRule gamma;
  bool cyclic = false;  // deterministic round-robin instead of the shared schedule
};

struct TheoryParams {
  double Delta = -1.0;  // <0: default_delta(mu, L)
  double c0 = 1.0;
  double beta = 0.1;
  double m0 = -1.0;  // <0: 2N
};

// Resolves a rule to a concrete step size. "auto" needs the full picture:
// the theory parameters (negative Delta/m0 fall back as documented above),
// the component count and R0 = squared distance from the start point to the
// reference. R0 = 0 removes every error term, collapsing to 2/(mu+L).
double resolve_gamma(const GammaRule& rule, const SmoothnessConstants& sc, const TheoryParams& theory,
                     int components, double R0);

struct ExperimentConfig {
  ObjectiveConfig objective;
  TopologyConfig topology;
  ActivationKind activation = ActivationKind::RandomWalk;
  std::vector<MethodSpec> methods;
  long iterations = 0;
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::string output;
  long drift_control_interval = 0;
  long estimator_error_interval = 0;  // 0: off
  int workers = 0;                    // 0: hardware concurrency
  double reference_tol = 1e-12;
  TheoryParams theory;
};

// Strict parser: unknown keys, missing fields, bad types and violated
// invariants (e.g. topology.n != objective.N) all raise config_error.
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct Reference {
  Vector theta_star;
  double f_star = 0.0;
  double grad_norm = 0.0;  // ||grad F(theta_star)||, the certificate
  int iterations = 0;
};

// Damped Newton with Armijo backtracking from theta = 0 until
// ||grad F|| <= tol. Throws numerical_error if the cap is hit.
Reference reference_solution(const ObjectiveSuite& suite, double tol = 1e-12, int max_iter = 1000);

// A prepared experiment: suite, constants, connected topology (seeds retried
// upward until connected), reference point and per-method resolved step sizes.
struct Experiment {
  ExperimentConfig config;
  ObjectiveSuite suite;
  SmoothnessConstants constants;
  Graph graph;
  std::uint64_t graph_seed_used = 0;
  Reference reference;
  std::vector<double> gammas;
};
Experiment prepare_experiment(const ExperimentConfig& config);

struct TraceRecord {
  int trial = 0;
  long k = 0;
  int method = 0;  // index into config.methods
  double gap = 0.0;
  int agent = -1;     // agent activated by the step that produced iterate k
  long delay = 0;     // its realized staleness at that step
  double est_err = std::numeric_limits<double>::quiet_NaN();  // NaN: not sampled
};

struct TrialOutput {
  std::vector<TraceRecord> rows;   // (method, k) for k = 0..K
  std::vector<double> final_fgap;  // F(theta^K) - F* per method
};

// All methods consume the same activation sequence seeded with
// base_seed + trial_index (paired comparison), except methods marked cyclic,
// which follow k mod N. A diverged method (non-finite iterate) stops stepping
// and reports gap = inf from that point on.
TrialOutput run_trial(const Experiment& exp, int trial_index);

struct ExperimentResult {
  Experiment experiment;
  std::vector<TraceRecord> traces;           // ordered by (trial, method, k)
  std::vector<std::vector<double>> final_fgap;  // [trial][method]
};
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  int method = 0;
  long k = 0;
  double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
};
// Per (method, k) statistics over trials; stddev is the population form so a
// single trial reports 0.
std::vector<SummaryRow> aggregate_trials(const ExperimentResult& result);

// Least-squares slope of log(gap) over iterations in [burn_in, end], skipping
// non-finite values and values below 1e-28; returns the per-iteration
// contraction factor exp(slope).
double fit_linear_rate(std::span<const double> gaps, long burn_in);

void write_trace_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
// Writes <out_dir>/trace.csv and <out_dir>/summary.csv (directories created).
void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir);

struct TraceFile {
  std::vector<std::string> labels;
  std::vector<TraceRecord> records;  // method field indexes into labels
};
TraceFile read_trace_csv(std::istream& in);

}  // namespace sucag
