// Command-line front end: solve, bench, stats, exact.
#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <iostream>

#include "acsfa/bench.hpp"
#include "acsfa/oracle.hpp"
#include "acsfa/stats.hpp"

using namespace acsfa;

namespace {

std::string join(const std::vector<tsplib::City>& tour) {
  std::string s;
  for (std::size_t k = 0; k < tour.size(); ++k) s += fmt::format("{}{}", k ? " " : "", tour[k] + 1);
  return s;
}

int cmd_solve(const std::string& path, const std::string& algo_name, std::size_t iterations,
              std::size_t ants, std::uint64_t seed, const std::string& trace_path) {
  std::vector<std::string> warnings;
  const auto inst = tsplib::load_instance(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  bench::ExperimentConfig config;
  config.iterations = iterations;
  config.ants = ants;
  const auto algo = bench::parse_algorithm(algo_name);
  const auto run = bench::run_once(inst, algo, config, 0, seed);

  fmt::print("instance   {} (n = {}, {})\n", inst.name(), inst.dimension(),
             tsplib::to_string(inst.metric()));
  fmt::print("algorithm  {}\nseed       {}\niterations {}\nants       {}\n",
             bench::to_string(algo), seed, iterations, ants);
  fmt::print("best       {}\ntime_s     {:.2f}\n", run.best, static_cast<double>(run.microseconds) / 1e6);
  if (run.best_params) {
    const auto& p = *run.best_params;
    fmt::print("params     beta={:.4f} rho={:.4f} q0={:.4f} ff_gamma={:.4f} ff_delta={:.4f}\n",
               p.beta(), p.rho(), p.q0(), p.gamma(), p.delta());
  }
  fmt::print("tour       {}\n", join(run.tour));

  if (!trace_path.empty()) {
    if (algo != bench::Algorithm::Acsfa) {
      std::cerr << "warning: --trace records tuned parameters and applies to acsfa only\n";
    } else {
      std::ofstream out(trace_path);
      if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", trace_path));
      bench::write_trace(out, run.trace, run.best_trace);
    }
  }
  return 0;
}

int cmd_bench(const std::string& config_path, std::size_t threads, const std::string& output) {
  auto config = bench::load_config(config_path);
  if (threads) config.threads = threads;
  if (!output.empty()) config.output_dir = output;
  const auto result = bench::run_experiment(config);
  bench::export_results(result, config.output_dir, config.optima);
  bench::write_summary(std::cout, result.summary);
  for (const auto& f : result.failures) std::cerr << "failed: " << f << '\n';
  fmt::print(std::cerr, "results written to {}\n", config.output_dir.string());
  return result.failures.empty() ? 0 : 2;
}

int cmd_stats(const std::string& matrix_path, double confidence, const std::string& response,
              const std::string& optima_path) {
  auto matrix = stats::load_response_matrix(matrix_path);
  if (response == "error") {
    if (optima_path.empty()) throw std::invalid_argument("--response error requires --optima");
    matrix = stats::error_matrix(matrix, stats::load_optima(optima_path));
  } else if (response != "raw") {
    throw std::invalid_argument(fmt::format("unknown response '{}' (raw or error)", response));
  }
  const auto anova = stats::rcbd_anova(matrix);
  stats::print_anova(std::cout, anova, matrix);
  std::cout << '\n';
  stats::print_tukey(std::cout, stats::tukey_hsd(matrix, confidence), matrix.b());
  return 0;
}

int cmd_exact(const std::string& path, bool brute) {
  const auto inst = tsplib::load_instance(path);
  if (brute) {
    const auto tour = oracle::brute_force(inst);
    fmt::print("{} optimum {} (brute force)\ntour {}\n", inst.name(), tour.length, join(tour.order));
  } else {
    fmt::print("{} optimum {} (Held-Karp)\n", inst.name(), oracle::held_karp(inst));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ant Colony System with self-tuning firefly parameter control"};
  app.require_subcommand(1);

  std::string instance, algo = "acsfa", trace;
  std::size_t iterations = 1000, ants = 10;
  std::uint64_t seed = 1;
  auto* solve = app.add_subcommand("solve", "Run ACS or ACSFA on one TSPLIB instance");
  solve->add_option("instance", instance, "TSPLIB file")->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", algo, "acs or acsfa")->check(CLI::IsMember({"acs", "acsfa"}));
  solve->add_option("--iterations", iterations, "Iteration budget")->check(CLI::PositiveNumber);
  solve->add_option("--ants", ants, "Number of ants (and fireflies)")->check(CLI::PositiveNumber);
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_option("--trace", trace, "Write the per-iteration parameter trace (acsfa)");

  std::string config, output;
  std::size_t threads = 0;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment described by a config file");
  bench_cmd->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--threads", threads, "Worker threads (default: all cores)");
  bench_cmd->add_option("--output", output, "Output directory (overrides output_dir)");

  std::string matrix, response = "raw", optima;
  double confidence = 0.90;
  auto* stats_cmd = app.add_subcommand("stats", "RCBD ANOVA and Tukey grouping of a response matrix");
  stats_cmd->add_option("matrix", matrix, "Response matrix CSV")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--confidence", confidence, "Tukey family confidence")
      ->check(CLI::Range(0.0, 1.0));
  stats_cmd->add_option("--response", response, "raw or error");
  stats_cmd->add_option("--optima", optima, "name,optimum file for --response error")
      ->check(CLI::ExistingFile);

  bool brute = false;
  auto* exact = app.add_subcommand("exact", "Exact optimum of a small instance");
  exact->add_option("instance", instance, "TSPLIB file")->required()->check(CLI::ExistingFile);
  exact->add_flag("--brute", brute, "Use enumeration instead of Held-Karp");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(instance, algo, iterations, ants, seed, trace);
    if (*bench_cmd) return cmd_bench(config, threads, output);
    if (*stats_cmd) return cmd_stats(matrix, confidence, response, optima);
    if (*exact) return cmd_exact(instance, brute);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
