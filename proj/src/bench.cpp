#include "acsfa/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace acsfa::bench {

namespace fs = std::filesystem;

std::string_view to_string(Algorithm algo) {
  return algo == Algorithm::Acs ? "ACS" : "ACSFA";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string lower(name);
  std::ranges::transform(lower, lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "acs") return Algorithm::Acs;
  if (lower == "acsfa") return Algorithm::Acsfa;
  throw std::invalid_argument(fmt::format("unknown algorithm '{}' (expected acs or acsfa)", name));
}

std::uint64_t ExperimentConfig::seed_for(std::size_t repetition) const {
  return seeds.empty() ? base_seed + repetition : seeds.at(repetition);
}

void ExperimentConfig::validate() const {
  if (instances.empty()) throw ConfigError("instance: at least one instance is required");
  for (const auto& p : instances) {
    if (!fs::exists(p)) throw ConfigError(fmt::format("instance: '{}' does not exist", p.string()));
  }
  if (algorithms.empty()) throw ConfigError("algorithms: at least one algorithm is required");
  if (repetitions == 0) throw ConfigError("repetitions: must be at least 1");
  if (ants == 0) throw ConfigError("ants: must be at least 1");
  if (!seeds.empty() && seeds.size() != repetitions) {
    throw ConfigError(fmt::format("seeds: {} seeds given for {} repetitions", seeds.size(),
                                  repetitions));
  }
  if (optima && !fs::exists(*optima)) {
    throw ConfigError(fmt::format("optima: '{}' does not exist", optima->string()));
  }
  try {
    auto h = acsfa;
    h.ants = ants;
    h.iterations = iterations;
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("acsfa: {}", e.what()));
  }
  try {
    auto a = acs;
    a.ants = ants;
    a.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("acs: {}", e.what()));
  }
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string item;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!item.empty()) out.push_back(std::move(item));
      item.clear();
    } else {
      item += c;
    }
  }
  if (!item.empty()) out.push_back(std::move(item));
  return out;
}

template <typename T>
T parse_value(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw ConfigError(fmt::format("{}: '{}' is not a valid number", key, value));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ExperimentConfig cfg;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() && !base_dir.empty() ? base_dir / path : path;
  };

  const std::map<std::string, std::pair<std::size_t, bool>> range_keys = {
      {"beta_min", {firefly::kBeta, false}},      {"beta_max", {firefly::kBeta, true}},
      {"rho_min", {firefly::kRho, false}},        {"rho_max", {firefly::kRho, true}},
      {"q0_min", {firefly::kQ0, false}},          {"q0_max", {firefly::kQ0, true}},
      {"ff_gamma_min", {firefly::kGamma, false}}, {"ff_gamma_max", {firefly::kGamma, true}},
      {"ff_delta_min", {firefly::kDelta, false}}, {"ff_delta_max", {firefly::kDelta, true}},
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find_first_of("=:");
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", number));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "instance" || key == "instances") {
      for (const auto& p : split_list(value)) cfg.instances.push_back(resolve(p));
    } else if (key == "algorithms" || key == "algorithm") {
      cfg.algorithms.clear();
      for (const auto& a : split_list(value)) {
        try {
          cfg.algorithms.push_back(parse_algorithm(a));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(fmt::format("{}: {}", key, e.what()));
        }
      }
    } else if (key == "repetitions") {
      cfg.repetitions = parse_value<std::size_t>(key, value);
    } else if (key == "iterations") {
      cfg.iterations = parse_value<std::size_t>(key, value);
    } else if (key == "ants") {
      cfg.ants = parse_value<std::size_t>(key, value);
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (const auto& s : split_list(value)) cfg.seeds.push_back(parse_value<std::uint64_t>(key, s));
    } else if (key == "base_seed") {
      cfg.base_seed = parse_value<std::uint64_t>(key, value);
    } else if (auto it = range_keys.find(key); it != range_keys.end()) {
      auto& range = cfg.acsfa.bounds.ranges[it->second.first];
      (it->second.second ? range.high : range.low) = parse_value<double>(key, value);
    } else if (key == "alpha") {
      cfg.acsfa.alpha = cfg.acs.alpha = parse_value<double>(key, value);
    } else if (key == "ff_alpha0") {
      cfg.acsfa.ff_alpha0 = parse_value<double>(key, value);
    } else if (key == "ff_beta0") {
      cfg.acsfa.ff_beta0 = parse_value<double>(key, value);
    } else if (key == "time_limit") {
      cfg.acsfa.time_limit = parse_value<double>(key, value);
    } else if (key == "acs_beta") {
      cfg.acs.beta = parse_value<double>(key, value);
    } else if (key == "acs_rho") {
      cfg.acs.rho = parse_value<double>(key, value);
    } else if (key == "acs_q0") {
      cfg.acs.q0 = parse_value<double>(key, value);
    } else if (key == "output_dir") {
      cfg.output_dir = resolve(value);
    } else if (key == "optima") {
      cfg.optima = resolve(value);
    } else if (key == "threads") {
      cfg.threads = parse_value<std::size_t>(key, value);
    } else {
      throw ConfigError(fmt::format("line {}: unknown key '{}'", number, key));
    }
  }
  cfg.acs.ants = cfg.ants;
  cfg.acsfa.ants = cfg.ants;
  cfg.acsfa.iterations = cfg.iterations;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path());
}

RunResult run_once(const tsplib::TspInstance& inst, Algorithm algo, const ExperimentConfig& config,
                   std::size_t repetition, std::uint64_t seed) {
  Rng rng(seed);
  RunResult run;
  run.algorithm = algo;
  run.instance = inst.name();
  run.repetition = repetition;
  run.seed = seed;
  acs::RunRecord record;
  if (algo == Algorithm::Acs) {
    auto params = config.acs;
    params.ants = config.ants;
    record = acs::run_acs(inst, params, config.iterations, rng);
  } else {
    auto hcfg = config.acsfa;
    hcfg.ants = config.ants;
    hcfg.iterations = config.iterations;
    auto result = hybrid::run_acsfa(inst, hcfg, rng);
    run.best_params = result.best_params;
    run.trace = std::move(result.trace);
    record = std::move(result.record);
  }
  run.best = record.best.length;
  run.tour = std::move(record.best.order);
  run.best_trace = std::move(record.best_trace);
  run.microseconds = std::max<std::int64_t>(1, std::llround(record.seconds * 1e6));
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;

  std::vector<tsplib::TspInstance> instances;
  for (const auto& path : config.instances) {
    try {
      instances.push_back(tsplib::load_instance(path));
    } catch (const std::exception& e) {
      result.failures.push_back(fmt::format("{}: {}", path.string(), e.what()));
    }
  }

  struct Task {
    std::size_t instance, repetition;
    Algorithm algo;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (Algorithm algo : config.algorithms)
      for (std::size_t r = 0; r < config.repetitions; ++r) tasks.push_back({i, r, algo});

  result.runs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      try {
        const Task& task = tasks[t];
        result.runs[t] = run_once(instances[task.instance], task.algo, config, task.repetition,
                                  config.seed_for(task.repetition));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(tasks.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
  }
  if (error) std::rethrow_exception(error);

  result.summary = summarize(result.runs);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& runs) {
  std::vector<SummaryRow> rows;
  std::vector<std::size_t> counts;
  std::vector<std::int64_t> length_sums, time_sums;
  for (const auto& run : runs) {
    auto it = std::ranges::find_if(rows, [&](const SummaryRow& r) {
      return r.algorithm == run.algorithm && r.instance == run.instance;
    });
    std::size_t k = static_cast<std::size_t>(it - rows.begin());
    if (it == rows.end()) {
      rows.push_back({run.algorithm, run.instance, run.best, 0.0, run.best, 0.0});
      counts.push_back(0);
      length_sums.push_back(0);
      time_sums.push_back(0);
    }
    rows[k].best = std::min(rows[k].best, run.best);
    rows[k].worst = std::max(rows[k].worst, run.best);
    ++counts[k];
    length_sums[k] += run.best;
    time_sums[k] += run.microseconds;
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double n = static_cast<double>(counts[k]);
    rows[k].average = static_cast<double>(length_sums[k]) / n;
    rows[k].t_avg_seconds = static_cast<double>(time_sums[k]) / n / 1e6;
  }
  return rows;
}

stats::ResponseMatrix best_matrix(const std::vector<SummaryRow>& summary) {
  stats::ResponseMatrix m;
  for (const auto& row : summary) {
    const std::string algo(to_string(row.algorithm));
    if (std::ranges::find(m.treatments, algo) == m.treatments.end()) m.treatments.push_back(algo);
    if (std::ranges::find(m.blocks, row.instance) == m.blocks.end()) m.blocks.push_back(row.instance);
  }
  m.values.assign(m.treatments.size(), std::vector<double>(m.blocks.size(), std::nan("")));
  for (const auto& row : summary) {
    const auto i = std::ranges::find(m.treatments, to_string(row.algorithm)) - m.treatments.begin();
    const auto j = std::ranges::find(m.blocks, row.instance) - m.blocks.begin();
    m.values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
        static_cast<double>(row.best);
  }
  return m;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "algorithm,instance,best,average,worst,t_avg_s\n";
  for (const auto& r : summary) {
    fmt::print(out, "{},{},{},{:.2f},{},{:.2f}\n", to_string(r.algorithm), r.instance, r.best,
               r.average, r.worst, r.t_avg_seconds);
  }
}

namespace {

std::string join_tour(const std::vector<tsplib::City>& tour) {
  std::string s;
  for (std::size_t k = 0; k < tour.size(); ++k) s += fmt::format("{}{}", k ? " " : "", tour[k]);
  return s;
}

}  // namespace

void write_runs(std::ostream& out, const std::vector<RunResult>& runs) {
  out << "algorithm,instance,repetition,seed,best,microseconds,beta,rho,q0,ff_gamma,ff_delta,tour\n";
  for (const auto& r : runs) {
    fmt::print(out, "{},{},{},{},{},{},", to_string(r.algorithm), r.instance, r.repetition, r.seed,
               r.best, r.microseconds);
    if (r.best_params) {
      for (double v : r.best_params->x) fmt::print(out, "{},", v);
    } else {
      out << ",,,,,";
    }
    out << join_tour(r.tour) << '\n';
  }
}

std::vector<RunResult> read_runs(std::istream& in) {
  std::vector<RunResult> runs;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() == 11) f.emplace_back();
    if (f.size() != 12) throw std::invalid_argument(fmt::format("malformed run line '{}'", line));
    RunResult r;
    r.algorithm = parse_algorithm(f[0]);
    r.instance = f[1];
    r.repetition = std::stoull(f[2]);
    r.seed = std::stoull(f[3]);
    r.best = std::stoll(f[4]);
    r.microseconds = std::stoll(f[5]);
    if (!f[6].empty()) {
      firefly::ParamVector v;
      for (std::size_t d = 0; d < firefly::kDims; ++d) v.x[d] = std::stod(f[6 + d]);
      r.best_params = v;
    }
    std::istringstream ts(f[11]);
    tsplib::City c;
    while (ts >> c) r.tour.push_back(c);
    runs.push_back(std::move(r));
  }
  return runs;
}

void write_trace(std::ostream& out, const hybrid::ParameterTrace& trace,
                 const std::vector<tsplib::Length>& best_trace) {
  out << "iteration";
  for (const char* prefix : {"mean_", "min_", "max_"})
    for (const char* name : firefly::kDimNames) out << ',' << prefix << name;
  out << ",best_length\n";
  for (std::size_t it = 0; it < trace.size(); ++it) {
    out << it + 1;
    for (const auto* stat : {&trace[it].mean, &trace[it].min, &trace[it].max})
      for (double v : *stat) fmt::print(out, ",{:.6f}", v);
    if (it < best_trace.size()) out << ',' << best_trace[it];
    out << '\n';
  }
}

void export_results(const ExperimentResult& result, const fs::path& dir,
                    const std::optional<fs::path>& optima) {
  std::error_code ec;
  fs::create_directories(dir / "traces", ec);
  if (ec) throw std::runtime_error(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  auto open = [](const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", p.string()));
    return out;
  };
  {
    auto out = open(dir / "summary.csv");
    write_summary(out, result.summary);
  }
  {
    auto out = open(dir / "runs.csv");
    write_runs(out, result.runs);
  }
  for (const auto& run : result.runs) {
    if (run.algorithm != Algorithm::Acsfa) continue;
    auto out = open(dir / "traces" /
                    fmt::format("{}_{}_r{}.csv", to_string(run.algorithm), run.instance,
                                run.repetition));
    write_trace(out, run.trace, run.best_trace);
  }
  if (!result.failures.empty()) {
    auto out = open(dir / "failures.txt");
    for (const auto& f : result.failures) out << f << '\n';
  }
  const auto matrix = best_matrix(result.summary);
  {
    auto out = open(dir / "best_matrix.csv");
    stats::write_response_matrix(out, matrix);
  }
  if (optima) {
    auto out = open(dir / "error_matrix.csv");
    stats::write_response_matrix(out, stats::error_matrix(matrix, stats::load_optima(optima->string())));
  }
}

}  // namespace acsfa::bench
