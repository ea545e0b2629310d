#include "sucag/harness.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "sucag/theory.hpp"

namespace sucag {

using nlohmann::json;

GammaRule parse_gamma_rule(const std::string& text) {
  GammaRule rule;
  if (text == "auto") {
    rule.kind = GammaRule::Kind::Auto;
    return rule;
  }
  auto slash = text.find('/');
  std::size_t consumed = 0;
  double value;
  try {
    value = std::stod(slash == std::string::npos ? text : text.substr(0, slash), &consumed);
  } catch (const std::exception&) {
    throw config_error("bad gamma '" + text + "'");
  }
  std::string head = slash == std::string::npos ? text : text.substr(0, slash);
  if (consumed != head.size()) throw config_error("bad gamma '" + text + "'");
  rule.value = value;
  if (slash == std::string::npos) {
    rule.kind = GammaRule::Kind::Absolute;
  } else {
    std::string denom = text.substr(slash + 1);
    if (denom == "L") {
      rule.kind = GammaRule::Kind::OverL;
    } else if (denom == "(mu+L)") {
      rule.kind = GammaRule::Kind::OverMuPlusL;
    } else {
      throw config_error("bad gamma denominator in '" + text + "' (use L or (mu+L))");
    }
  }
  if (!(rule.value > 0.0)) throw config_error("gamma must be positive, got '" + text + "'");
  return rule;
}

double resolve_gamma(const GammaRule& rule, const SmoothnessConstants& sc, const TheoryParams& theory,
                     int components, double R0) {
  switch (rule.kind) {
    case GammaRule::Kind::Auto: {
      double Delta = theory.Delta > 0.0 ? theory.Delta : default_delta(sc.mu, sc.L);
      double m0 = theory.m0 > 0.0 ? theory.m0 : 2.0 * components;
      return theorem1_stepsize_general(sc, Delta, theory.c0, theory.beta, m0, R0);
    }
    case GammaRule::Kind::Absolute: return rule.value;
    case GammaRule::Kind::OverL: return rule.value / sc.L;
    case GammaRule::Kind::OverMuPlusL: return rule.value / (sc.mu + sc.L);
  }
  throw std::logic_error("resolve_gamma: bad kind");
}

namespace {

void expect_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw config_error(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw config_error("unknown key '" + item.key() + "' in " + where);
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw config_error("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

long get_integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw config_error(what + " must be an integer");
  return v.get<long>();
}

double get_number(const json& v, const std::string& what) {
  if (!v.is_number()) throw config_error(what + " must be a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& what) {
  if (!v.is_string()) throw config_error(what + " must be a string");
  return v.get<std::string>();
}

std::uint64_t get_seed(const json& v, const std::string& what) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) throw config_error(what + " must be an integer seed");
  if (v.is_number_integer() && v.get<long long>() < 0) throw config_error(what + " must be >= 0");
  return v.get<std::uint64_t>();
}

TopologyKind topology_from_name(const std::string& name) {
  if (name == "erdos_renyi") return TopologyKind::ErdosRenyi;
  if (name == "ring") return TopologyKind::Ring;
  if (name == "star") return TopologyKind::Star;
  if (name == "complete") return TopologyKind::Complete;
  throw config_error("unknown topology kind '" + name + "'");
}

ObjectiveConfig parse_objective(const json& obj) {
  expect_keys(obj, "objective", {"kind", "d", "N", "B", "mu", "L", "data_seed"});
  ObjectiveConfig oc;
  std::string kind = get_string(require(obj, "kind", "objective"), "objective.kind");
  if (kind == "logistic") {
    oc.kind = ObjectiveKind::Logistic;
  } else if (kind == "quadratic") {
    oc.kind = ObjectiveKind::Quadratic;
  } else {
    throw config_error("unknown objective kind '" + kind + "'");
  }
  oc.d = static_cast<int>(get_integer(require(obj, "d", "objective"), "objective.d"));
  oc.N = static_cast<int>(get_integer(require(obj, "N", "objective"), "objective.N"));
  oc.data_seed = get_seed(require(obj, "data_seed", "objective"), "objective.data_seed");
  if (oc.d <= 0 || oc.N <= 0) throw config_error("objective.d and objective.N must be positive");
  if (oc.kind == ObjectiveKind::Logistic) {
    if (obj.contains("mu") || obj.contains("L"))
      throw config_error("objective.mu/L apply only to quadratic objectives");
    oc.B = static_cast<int>(get_integer(require(obj, "B", "objective"), "objective.B"));
    if (oc.B <= 0) throw config_error("objective.B must be positive");
  } else {
    if (obj.contains("B")) throw config_error("objective.B applies only to logistic objectives");
    oc.mu = get_number(require(obj, "mu", "objective"), "objective.mu");
    oc.L = get_number(require(obj, "L", "objective"), "objective.L");
    if (!(oc.mu > 0.0 && oc.mu <= oc.L)) throw config_error("objective needs 0 < mu <= L");
  }
  return oc;
}

TopologyConfig parse_topology(const json& obj) {
  expect_keys(obj, "topology", {"kind", "n", "p", "graph_seed"});
  TopologyConfig tc;
  tc.kind = topology_from_name(get_string(require(obj, "kind", "topology"), "topology.kind"));
  tc.n = static_cast<int>(get_integer(require(obj, "n", "topology"), "topology.n"));
  tc.graph_seed = get_seed(require(obj, "graph_seed", "topology"), "topology.graph_seed");
  if (tc.kind == TopologyKind::ErdosRenyi) {
    tc.p = get_number(require(obj, "p", "topology"), "topology.p");
    if (!(tc.p > 0.0 && tc.p <= 1.0)) throw config_error("topology.p must lie in (0,1]");
  } else if (obj.contains("p")) {
    throw config_error("topology.p applies only to erdos_renyi");
  }
  return tc;
}

MethodSpec parse_method(const json& obj, std::size_t index) {
  std::string where = "methods[" + std::to_string(index) + "]";
  expect_keys(obj, where, {"method", "gamma", "label", "activation"});
  MethodSpec ms;
  try {
    ms.method = method_from_name(get_string(require(obj, "method", where), where + ".method"));
  } catch (const std::invalid_argument& e) {
    throw config_error(e.what());
  }
  ms.label = method_name(ms.method);
  if (obj.contains("label")) ms.label = get_string(obj.at("label"), where + ".label");
  if (ms.label.empty()) throw config_error(where + ".label must not be empty");
  if (obj.contains("gamma")) {
    const json& g = obj.at("gamma");
    if (g.is_number()) {
      ms.gamma.kind = GammaRule::Kind::Absolute;
      ms.gamma.value = g.get<double>();
      if (!(ms.gamma.value > 0.0)) throw config_error(where + ".gamma must be positive");
    } else if (g.is_string()) {
      ms.gamma = parse_gamma_rule(g.get<std::string>());
    } else {
      throw config_error(where + ".gamma must be a number or a rule string");
    }
  } else if (ms.method == Method::Sag || ms.method == Method::Saga) {
    ms.gamma = parse_gamma_rule("0.2/L");
  } else if (ms.method == Method::Sg) {
    throw config_error(where + ": sg has no default gamma; state one");
  }  // sucag/ciag default to the already-initialized "auto"
  if (obj.contains("activation")) {
    std::string act = get_string(obj.at("activation"), where + ".activation");
    if (act == "cyclic") {
      ms.cyclic = true;
    } else if (act != "shared") {
      throw config_error(where + ".activation must be 'shared' or 'cyclic'");
    }
  }
  return ms;
}

TheoryParams parse_theory(const json& obj) {
  expect_keys(obj, "theory", {"Delta", "c0", "beta", "m0"});
  TheoryParams tp;
  if (obj.contains("Delta")) tp.Delta = get_number(obj.at("Delta"), "theory.Delta");
  if (obj.contains("c0")) tp.c0 = get_number(obj.at("c0"), "theory.c0");
  if (obj.contains("beta")) tp.beta = get_number(obj.at("beta"), "theory.beta");
  if (obj.contains("m0")) tp.m0 = get_number(obj.at("m0"), "theory.m0");
  return tp;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  expect_keys(root, "config",
              {"objective", "topology", "activation", "methods", "iterations", "trials", "base_seed", "output",
               "drift_control_interval", "estimator_error_interval", "workers", "reference_tol", "theory"});

  ExperimentConfig cfg;
  cfg.objective = parse_objective(require(root, "objective", "config"));
  cfg.topology = parse_topology(require(root, "topology", "config"));
  if (root.contains("activation")) {
    try {
      cfg.activation = activation_from_name(get_string(root.at("activation"), "activation"));
    } catch (const std::invalid_argument& e) {
      throw config_error(e.what());
    }
  }
  const json& methods = require(root, "methods", "config");
  if (!methods.is_array() || methods.empty()) throw config_error("methods must be a non-empty array");
  for (std::size_t i = 0; i < methods.size(); ++i) cfg.methods.push_back(parse_method(methods[i], i));
  cfg.iterations = get_integer(require(root, "iterations", "config"), "iterations");
  cfg.trials = static_cast<int>(get_integer(require(root, "trials", "config"), "trials"));
  cfg.base_seed = get_seed(require(root, "base_seed", "config"), "base_seed");
  cfg.output = get_string(require(root, "output", "config"), "output");
  if (root.contains("drift_control_interval"))
    cfg.drift_control_interval = get_integer(root.at("drift_control_interval"), "drift_control_interval");
  if (root.contains("estimator_error_interval"))
    cfg.estimator_error_interval = get_integer(root.at("estimator_error_interval"), "estimator_error_interval");
  if (root.contains("workers")) cfg.workers = static_cast<int>(get_integer(root.at("workers"), "workers"));
  if (root.contains("reference_tol")) cfg.reference_tol = get_number(root.at("reference_tol"), "reference_tol");
  if (root.contains("theory")) cfg.theory = parse_theory(root.at("theory"));

  if (cfg.iterations < 0) throw config_error("iterations must be >= 0");
  if (cfg.trials < 1) throw config_error("trials must be >= 1");
  if (cfg.drift_control_interval < 0) throw config_error("drift_control_interval must be >= 0");
  if (cfg.estimator_error_interval < 0) throw config_error("estimator_error_interval must be >= 0");
  if (cfg.workers < 0) throw config_error("workers must be >= 0");
  if (!(cfg.reference_tol > 0.0)) throw config_error("reference_tol must be positive");
  if (cfg.topology.n != cfg.objective.N)
    throw config_error("topology.n (" + std::to_string(cfg.topology.n) + ") must equal objective.N (" +
                       std::to_string(cfg.objective.N) + "): agents hold the components");
  std::vector<std::string> labels;
  for (const auto& ms : cfg.methods) labels.push_back(ms.label);
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw config_error("method labels must be unique (set 'label' when repeating a method)");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

Reference reference_solution(const ObjectiveSuite& suite, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("reference_solution: tol must be positive");
  Vector theta = Vector::Zero(suite.dim());
  ValueGrad vg = suite.full_eval(theta);
  double best_norm = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (int it = 0; it < max_iter; ++it) {
    double norm = vg.grad.norm();
    if (norm <= tol) {
      Reference ref;
      ref.theta_star = theta;
      ref.f_star = vg.value;
      ref.grad_norm = norm;
      ref.iterations = it;
      return ref;
    }
    // once the gradient is dominated by summation noise no step helps; give a
    // diagnosis instead of spinning until the iteration cap
    if (norm < 0.999 * best_norm) {
      best_norm = norm;
      stalled = 0;
    } else if (++stalled >= 10) {
      throw numerical_error("reference_solution: stalled at |grad|=" + format_g17(best_norm) +
                            " (evaluation noise floor?); requested tol=" + format_g17(tol));
    }
    Matrix H = suite.full_hessian(theta);
    Eigen::LLT<Matrix> llt(H);
    Vector dir;
    if (llt.info() == Eigen::Success) {
      dir = llt.solve(-vg.grad);
    } else {
      Eigen::LDLT<Matrix> ldlt(H);
      if (ldlt.info() != Eigen::Success)
        throw numerical_error("reference_solution: Hessian factorization failed (ill-conditioned input)");
      dir = ldlt.solve(-vg.grad);
    }
    double slope = vg.grad.dot(dir);
    if (!(slope < 0.0)) throw numerical_error("reference_solution: Newton direction is not a descent direction");
    double t = 1.0;
    while (true) {
      ValueGrad trial = suite.full_eval(theta + t * dir);
      if (trial.value <= vg.value + 1e-4 * t * slope) {
        theta += t * dir;
        vg = trial;
        break;
      }
      t *= 0.5;
      if (t < 1e-14) throw numerical_error("reference_solution: line search failed");
    }
  }
  throw numerical_error("reference_solution: no convergence to tol=" + format_g17(tol) + " within " +
                        std::to_string(max_iter) + " iterations");
}

namespace {

ObjectiveSuite build_suite(const ObjectiveConfig& oc) {
  if (oc.kind == ObjectiveKind::Logistic) {
    return ObjectiveSuite::logistic(generate_synthetic(oc.d, oc.N, oc.B, oc.data_seed).data);
  }
  return generate_quadratic(oc.d, oc.N, oc.mu, oc.L, oc.data_seed);
}

}  // namespace

Experiment prepare_experiment(const ExperimentConfig& config) {
  Experiment exp;
  exp.config = config;
  exp.suite = build_suite(config.objective);
  exp.constants = exp.suite.smoothness_constants();

  exp.graph_seed_used = config.topology.graph_seed;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 1000)
      throw numerical_error("prepare_experiment: no connected topology found in 1000 seed retries");
    exp.graph = config.topology.kind == TopologyKind::ErdosRenyi
                    ? generate_topology(config.topology.kind, config.topology.n, config.topology.p,
                                        exp.graph_seed_used)
                    : generate_topology(config.topology.kind, config.topology.n, 1.0, exp.graph_seed_used);
    if (is_connected(exp.graph)) break;
    ++exp.graph_seed_used;
  }

  exp.reference = reference_solution(exp.suite, config.reference_tol);
  double R0 = exp.reference.theta_star.squaredNorm();  // iterates start at zero
  for (const auto& ms : config.methods)
    exp.gammas.push_back(resolve_gamma(ms.gamma, exp.constants, config.theory, config.objective.N, R0));
  return exp;
}

TrialOutput run_trial(const Experiment& exp, int trial_index) {
  const long K = exp.config.iterations;
  const int N = exp.suite.components();
  const std::uint64_t trial_seed = exp.config.base_seed + static_cast<std::uint64_t>(trial_index);

  std::vector<int> shared_agents(static_cast<std::size_t>(K));
  std::vector<long> shared_delays(static_cast<std::size_t>(K));
  {
    ActivationProcess proc = exp.config.activation == ActivationKind::RandomWalk
                                 ? ActivationProcess(exp.config.activation, N, trial_seed, exp.graph)
                                 : ActivationProcess(exp.config.activation, N, trial_seed);
    DelayTracker tracker(N);
    for (long k = 0; k < K; ++k) {
      int agent = proc.next_agent();
      shared_agents[static_cast<std::size_t>(k)] = agent;
      shared_delays[static_cast<std::size_t>(k)] = tracker.record(k, agent).agent_delay;
    }
  }
  std::vector<int> cyclic_agents;
  std::vector<long> cyclic_delays;
  if (std::any_of(exp.config.methods.begin(), exp.config.methods.end(),
                  [](const MethodSpec& ms) { return ms.cyclic; })) {
    cyclic_agents.resize(static_cast<std::size_t>(K));
    cyclic_delays.resize(static_cast<std::size_t>(K));
    DelayTracker tracker(N);
    for (long k = 0; k < K; ++k) {
      int agent = static_cast<int>(k % N);
      cyclic_agents[static_cast<std::size_t>(k)] = agent;
      cyclic_delays[static_cast<std::size_t>(k)] = tracker.record(k, agent).agent_delay;
    }
  }

  TrialOutput out;
  out.rows.reserve(exp.config.methods.size() * static_cast<std::size_t>(K + 1));
  const double inf = std::numeric_limits<double>::infinity();

  for (std::size_t mi = 0; mi < exp.config.methods.size(); ++mi) {
    const MethodSpec& ms = exp.config.methods[mi];
    const auto& agents = ms.cyclic ? cyclic_agents : shared_agents;
    const auto& delays = ms.cyclic ? cyclic_delays : shared_delays;

    OptimizerOptions opt;
    opt.gamma = exp.gammas[mi];
    opt.recompute_interval = exp.config.drift_control_interval;
    Optimizer optimizer(exp.suite, ms.method, opt);

    TraceRecord row;
    row.trial = trial_index;
    row.method = static_cast<int>(mi);
    row.k = 0;
    row.gap = (optimizer.theta() - exp.reference.theta_star).squaredNorm();
    out.rows.push_back(row);

    bool dead = false;
    for (long k = 0; k < K; ++k) {
      int agent = agents[static_cast<std::size_t>(k)];
      row.k = k + 1;
      row.agent = agent;
      row.delay = delays[static_cast<std::size_t>(k)];
      row.est_err = std::numeric_limits<double>::quiet_NaN();
      if (!dead) {
        if (exp.config.estimator_error_interval > 0 && k % exp.config.estimator_error_interval == 0) {
          EstimatorResult est = optimizer.estimator(agent);
          row.est_err = (est.g - exp.suite.full_eval(optimizer.theta()).grad).norm();
        }
        optimizer.step(agent);
        double gap = (optimizer.theta() - exp.reference.theta_star).squaredNorm();
        if (!std::isfinite(gap)) {
          dead = true;
          row.gap = inf;
        } else {
          row.gap = gap;
        }
      } else {
        row.gap = inf;
      }
      out.rows.push_back(row);
    }

    if (dead) {
      out.final_fgap.push_back(inf);
    } else {
      out.final_fgap.push_back(exp.suite.full_eval(optimizer.theta()).value - exp.reference.f_star);
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  result.experiment = prepare_experiment(config);
  const Experiment& exp = result.experiment;

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(config.trials));
  int workers = config.workers > 0 ? config.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, config.trials));

  if (workers == 1) {
    for (int t = 0; t < config.trials; ++t) outputs[static_cast<std::size_t>(t)] = run_trial(exp, t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          int t = next.fetch_add(1);
          if (t >= config.trials) return;
          outputs[static_cast<std::size_t>(t)] = run_trial(exp, t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& out : outputs) {
    result.traces.insert(result.traces.end(), out.rows.begin(), out.rows.end());
    result.final_fgap.push_back(std::move(out.final_fgap));
  }
  return result;
}

std::vector<SummaryRow> aggregate_trials(const ExperimentResult& result) {
  const auto& cfg = result.experiment.config;
  const long K = cfg.iterations;
  const std::size_t M = cfg.methods.size();
  const std::size_t T = static_cast<std::size_t>(cfg.trials);
  const std::size_t rows_per_trial = M * static_cast<std::size_t>(K + 1);

  std::vector<SummaryRow> summary;
  summary.reserve(rows_per_trial);
  for (std::size_t mi = 0; mi < M; ++mi) {
    for (long k = 0; k <= K; ++k) {
      SummaryRow row;
      row.method = static_cast<int>(mi);
      row.k = k;
      double sum = 0.0, sumsq = 0.0;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t < T; ++t) {
        const TraceRecord& rec =
            result.traces[t * rows_per_trial + mi * static_cast<std::size_t>(K + 1) + static_cast<std::size_t>(k)];
        sum += rec.gap;
        sumsq += rec.gap * rec.gap;
        lo = std::min(lo, rec.gap);
        hi = std::max(hi, rec.gap);
      }
      double n = static_cast<double>(T);
      row.mean = sum / n;
      double var = std::max(0.0, sumsq / n - row.mean * row.mean);
      row.stddev = std::sqrt(var);
      row.min = lo;
      row.max = hi;
      summary.push_back(row);
    }
  }
  return summary;
}

double fit_linear_rate(std::span<const double> gaps, long burn_in) {
  if (burn_in < 0) throw std::invalid_argument("fit_linear_rate: burn_in must be >= 0");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (std::size_t k = static_cast<std::size_t>(burn_in); k < gaps.size(); ++k) {
    double g = gaps[k];
    if (!std::isfinite(g) || g < 1e-28) continue;
    double x = static_cast<double>(k);
    double y = std::log(g);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("fit_linear_rate: fewer than two usable points past burn-in");
  double denom = static_cast<double>(n) * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_linear_rate: degenerate fit window");
  double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  return std::exp(slope);
}

namespace {

void write_certificate_line(std::ostream& out, const ExperimentResult& result) {
  out << "# reference_grad_norm=" << format_g17(result.experiment.reference.grad_norm)
      << " reference_value=" << format_g17(result.experiment.reference.f_star)
      << " reference_tol=" << format_g17(result.experiment.config.reference_tol)
      << " graph_seed_used=" << result.experiment.graph_seed_used << '\n';
}

}  // namespace

void write_trace_csv(std::ostream& out, const ExperimentResult& result) {
  write_certificate_line(out, result);
  out << "trial,k,method,gap,agent,delay,est_err\n";
  const auto& methods = result.experiment.config.methods;
  for (const TraceRecord& rec : result.traces) {
    out << rec.trial << ',' << rec.k << ',' << methods[static_cast<std::size_t>(rec.method)].label << ','
        << format_g17(rec.gap) << ',' << rec.agent << ',' << rec.delay << ',';
    if (!std::isnan(rec.est_err)) out << format_g17(rec.est_err);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  write_certificate_line(out, result);
  out << "method,k,gap_mean,gap_std,gap_min,gap_max\n";
  const auto& methods = result.experiment.config.methods;
  for (const SummaryRow& row : aggregate_trials(result)) {
    out << methods[static_cast<std::size_t>(row.method)].label << ',' << row.k << ',' << format_g17(row.mean)
        << ',' << format_g17(row.stddev) << ',' << format_g17(row.min) << ',' << format_g17(row.max) << '\n';
  }
}

void write_experiment_outputs(const ExperimentResult& result, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream trace(fs::path(out_dir) / "trace.csv", std::ios::binary);
    if (!trace) throw std::runtime_error("cannot write trace.csv under '" + out_dir + "'");
    write_trace_csv(trace, result);
  }
  {
    std::ofstream summary(fs::path(out_dir) / "summary.csv", std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write summary.csv under '" + out_dir + "'");
    write_summary_csv(summary, result);
  }
}

TraceFile read_trace_csv(std::istream& in) {
  TraceFile file;
  std::string line;
  bool header_seen = false;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "trial,k,method,gap,agent,delay,est_err")
        throw std::runtime_error("read_trace_csv: unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string field;
    TraceRecord rec;
    auto next_field = [&]() {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("read_trace_csv: short line " + std::to_string(line_no));
    };
    next_field();
    rec.trial = std::stoi(field);
    next_field();
    rec.k = std::stol(field);
    next_field();
    auto it = std::find(file.labels.begin(), file.labels.end(), field);
    if (it == file.labels.end()) {
      file.labels.push_back(field);
      rec.method = static_cast<int>(file.labels.size()) - 1;
    } else {
      rec.method = static_cast<int>(it - file.labels.begin());
    }
    next_field();
    rec.gap = std::strtod(field.c_str(), nullptr);
    next_field();
    rec.agent = std::stoi(field);
    next_field();
    rec.delay = std::stol(field);
    if (std::getline(ss, field, ',') && !field.empty()) rec.est_err = std::strtod(field.c_str(), nullptr);
    file.records.push_back(rec);
  }
  if (!header_seen) throw std::runtime_error("read_trace_csv: no header found");
  return file;
}

}  // namespace sucag
