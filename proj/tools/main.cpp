// Command-line front end: experiment runner, reference solver, topology
// generator, rate fitting and step-size report.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sucag/harness.hpp"
#include "sucag/theory.hpp"

namespace {

using namespace sucag;

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

void print_certificate(const Experiment& exp) {
  std::cout << "reference: |grad F| = " << format_g17(exp.reference.grad_norm)
            << ", F* = " << format_g17(exp.reference.f_star) << ", newton iterations = " << exp.reference.iterations
            << "\n";
}

int cmd_run(const std::string& config_path) {
  ExperimentConfig config = load_config(config_path);
  ExperimentResult result = run_experiment(config);
  write_experiment_outputs(result, config.output);

  const Experiment& exp = result.experiment;
  print_certificate(exp);
  std::cout << "graph seed used: " << exp.graph_seed_used << "\n";

  auto summary = aggregate_trials(result);
  bool any_nonfinite = false;
  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    const SummaryRow& last = summary[mi * static_cast<std::size_t>(config.iterations + 1) +
                                     static_cast<std::size_t>(config.iterations)];
    double fgap_mean = 0.0;
    for (int t = 0; t < config.trials; ++t) fgap_mean += result.final_fgap[static_cast<std::size_t>(t)][mi];
    fgap_mean /= config.trials;
    std::cout << config.methods[mi].label << ": gamma = " << format_g17(exp.gammas[mi])
              << ", final gap mean = " << format_g17(last.mean) << " (min " << format_g17(last.min) << ", max "
              << format_g17(last.max) << "), final F-gap mean = " << format_g17(fgap_mean) << "\n";
    if (!std::isfinite(last.mean)) any_nonfinite = true;
  }
  std::cout << "wrote " << config.output << "/trace.csv and " << config.output << "/summary.csv\n";
  if (any_nonfinite) {
    std::cerr << "error: at least one method diverged (non-finite gap)\n";
    return kExitNumerical;
  }
  return 0;
}

int cmd_reference(const std::string& config_path) {
  ExperimentConfig config = load_config(config_path);
  Experiment exp = prepare_experiment(config);
  print_certificate(exp);
  std::cout << "|theta*| = " << format_g17(exp.reference.theta_star.norm()) << "\n";
  std::cout << "R0 from zero start = " << format_g17(exp.reference.theta_star.squaredNorm()) << "\n";
  return 0;
}

int cmd_graph_gen(const std::string& kind_name, int n, const std::vector<double>& rest) {
  TopologyKind kind;
  if (kind_name == "erdos_renyi") {
    kind = TopologyKind::ErdosRenyi;
  } else if (kind_name == "ring") {
    kind = TopologyKind::Ring;
  } else if (kind_name == "star") {
    kind = TopologyKind::Star;
  } else if (kind_name == "complete") {
    kind = TopologyKind::Complete;
  } else {
    throw config_error("unknown topology kind '" + kind_name + "'");
  }

  double p = 1.0;
  std::uint64_t seed;
  if (kind == TopologyKind::ErdosRenyi) {
    if (rest.size() != 2) throw config_error("erdos_renyi needs: graph-gen erdos_renyi <n> <p> <seed>");
    p = rest[0];
    seed = static_cast<std::uint64_t>(rest[1]);
  } else {
    if (rest.size() != 1) throw config_error(kind_name + " needs: graph-gen " + kind_name + " <n> <seed>");
    seed = static_cast<std::uint64_t>(rest[0]);
  }
  Graph g = generate_topology(kind, n, p, seed);
  write_edge_list(g, std::cout);
  std::cerr << "# n=" << g.n << " edges=" << g.edge_count() << " connected=" << (is_connected(g) ? "yes" : "no")
            << "\n";
  return 0;
}

int cmd_rate(const std::string& trace_path, long burn_in) {
  std::ifstream in(trace_path);
  if (!in) throw config_error("cannot open trace file '" + trace_path + "'");
  TraceFile file = read_trace_csv(in);

  for (std::size_t mi = 0; mi < file.labels.size(); ++mi) {
    // mean across trials at each k, then one fit on the mean curve
    std::vector<double> sum;
    std::vector<long> count;
    for (const TraceRecord& rec : file.records) {
      if (rec.method != static_cast<int>(mi)) continue;
      auto k = static_cast<std::size_t>(rec.k);
      if (k >= sum.size()) {
        sum.resize(k + 1, 0.0);
        count.resize(k + 1, 0);
      }
      sum[k] += rec.gap;
      count[k] += 1;
    }
    std::vector<double> mean(sum.size());
    for (std::size_t k = 0; k < sum.size(); ++k) mean[k] = count[k] > 0 ? sum[k] / count[k] : 0.0;
    try {
      double factor = fit_linear_rate(mean, burn_in);
      std::cout << file.labels[mi] << ": contraction factor per iteration = " << format_g17(factor) << "\n";
    } catch (const std::invalid_argument& e) {
      std::cout << file.labels[mi] << ": fit failed (" << e.what() << ")\n";
    }
  }
  return 0;
}

int cmd_stepsize(const std::string& config_path) {
  ExperimentConfig config = load_config(config_path);
  Experiment exp = prepare_experiment(config);
  const SmoothnessConstants& sc = exp.constants;

  double R0 = exp.reference.theta_star.squaredNorm();  // iterates start at zero
  double Delta = config.theory.Delta > 0.0 ? config.theory.Delta : default_delta(sc.mu, sc.L);
  double m0 = config.theory.m0 > 0.0 ? config.theory.m0 : 2.0 * config.objective.N;
  double gamma_auto =
      resolve_gamma(parse_gamma_rule("auto"), sc, config.theory, config.objective.N, R0);
  double gamma_asymptotic = 2.0 / (sc.mu + sc.L);

  std::cout << "mu = " << format_g17(sc.mu) << "\n"
            << "L = " << format_g17(sc.L) << "\n"
            << "L_H_bar = " << format_g17(sc.L_H_bar) << "\n"
            << "normalized (mu < 1 rescale applied) = " << (sc.mu < 1.0 ? "yes" : "no") << "\n"
            << "R0 = " << format_g17(R0) << "\n"
            << "Delta = " << format_g17(Delta) << ", c0 = " << format_g17(config.theory.c0)
            << ", beta = " << format_g17(config.theory.beta) << ", m0 = " << format_g17(m0) << "\n"
            << "analytical step-size bound ('auto') = " << format_g17(gamma_auto) << "\n";
  RatePair at_auto = convergence_rate(std::min(gamma_auto, gamma_asymptotic), sc.mu, sc.L, Delta);
  std::cout << "  finite-horizon contraction delta = " << format_g17(at_auto.delta)
            << ", asymptotic rate = " << format_g17(at_auto.asymptotic_rate) << "\n";
  RatePair at_asym = convergence_rate(gamma_asymptotic, sc.mu, sc.L, Delta);
  std::cout << "asymptotic-regime step 2/(mu+L) = " << format_g17(gamma_asymptotic)
            << " (asymptotic rate " << format_g17(at_asym.asymptotic_rate)
            << "); the bound above is conservative far from the reference\n";
  print_certificate(exp);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum optimization lab: curvature-aided incremental methods over simulated networks"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a configured experiment and write trace/summary CSVs");
  run->add_option("config", config_path, "JSON experiment config")->required();

  std::string ref_config;
  auto* reference = app.add_subcommand("reference", "solve the configured objective to high precision");
  reference->add_option("config", ref_config, "JSON experiment config")->required();

  std::string kind_name;
  int n = 0;
  std::vector<double> rest;
  auto* graph_gen = app.add_subcommand("graph-gen", "emit an edge list for a generated topology");
  graph_gen->add_option("kind", kind_name, "erdos_renyi | ring | star | complete")->required();
  graph_gen->add_option("n", n, "node count")->required();
  graph_gen->add_option("args", rest, "[p] seed");

  std::string trace_path;
  long burn_in = 0;
  auto* rate = app.add_subcommand("rate", "fit per-iteration contraction factors from a trace CSV");
  rate->add_option("trace", trace_path, "trace.csv produced by run")->required();
  rate->add_option("--burn-in", burn_in, "iterations to skip before fitting");

  std::string step_config;
  auto* stepsize = app.add_subcommand("stepsize", "report analytical and practical step sizes for a config");
  stepsize->add_option("config", step_config, "JSON experiment config")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (reference->parsed()) return cmd_reference(ref_config);
    if (graph_gen->parsed()) return cmd_graph_gen(kind_name, n, rest);
    if (rate->parsed()) return cmd_rate(trace_path, burn_in);
    if (stepsize->parsed()) return cmd_stepsize(step_config);
  } catch (const sucag::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sucag::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
