#include "acsfa/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

namespace acsfa::hybrid {

void AcsfaConfig::validate() const {
  if (ants == 0) throw std::invalid_argument("ants must be positive");
  bounds.validate();
  if (bounds.ranges[firefly::kRho].low <= 0.0 || bounds.ranges[firefly::kRho].high > 1.0) {
    throw std::invalid_argument("rho bounds must lie in (0, 1]");
  }
  if (bounds.ranges[firefly::kQ0].low < 0.0 || bounds.ranges[firefly::kQ0].high > 1.0) {
    throw std::invalid_argument("q0 bounds must lie in [0, 1]");
  }
  if (bounds.ranges[firefly::kDelta].low < 0.0 || bounds.ranges[firefly::kDelta].high > 1.0) {
    throw std::invalid_argument("ff_delta bounds must lie in [0, 1]");
  }
  if (bounds.ranges[firefly::kBeta].low < 0.0) throw std::invalid_argument("beta bounds must be non-negative");
  if (bounds.ranges[firefly::kGamma].low < 0.0) throw std::invalid_argument("ff_gamma bounds must be non-negative");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument(fmt::format("alpha = {} outside (0, 1)", alpha));
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be non-negative");
  if (!(ff_alpha0 > 0.0)) throw std::invalid_argument("ff_alpha0 must be positive");
  if (!(ff_beta0 >= 0.0)) throw std::invalid_argument("ff_beta0 must be non-negative");
  if (time_limit && !(*time_limit > 0.0)) throw std::invalid_argument("time limit must be positive");
}

double brightness(tsplib::Length length) {
  if (length <= 0) throw std::invalid_argument("brightness of a zero-length tour");
  return 1.0 / static_cast<double>(length);
}

std::vector<ParamVector> init_population(const ParamBounds& bounds, std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ParamVector> out(m);
  for (auto& v : out) {
    for (std::size_t d = 0; d < kDims; ++d) {
      const auto& r = bounds.ranges[d];
      v.x[d] = std::min(r.high, r.low + r.width() * unit(rng));
    }
  }
  return out;
}

TraceRow summarize(const std::vector<firefly::Firefly>& population) {
  TraceRow row;
  row.min.fill(std::numeric_limits<double>::infinity());
  row.max.fill(-std::numeric_limits<double>::infinity());
  for (const auto& f : population) {
    for (std::size_t d = 0; d < kDims; ++d) {
      row.mean[d] += f.position.x[d];
      row.min[d] = std::min(row.min[d], f.position.x[d]);
      row.max[d] = std::max(row.max[d], f.position.x[d]);
    }
  }
  for (double& v : row.mean) v /= static_cast<double>(population.size());
  return row;
}

AcsfaResult run_acsfa(const tsplib::TspInstance& inst, const AcsfaConfig& config, Rng& rng) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  std::vector<firefly::Firefly> population;
  for (auto& v : init_population(config.bounds, config.ants, rng)) {
    population.push_back({v, 0.0});
  }

  const double tau0 = config.tau0 > 0.0 ? config.tau0 : acs::compute_tau0(inst);
  acs::PheromoneMatrix tau(inst.dimension(), tau0);
  firefly::FaState fa = firefly::FaState::initial(config.ff_alpha0, config.ff_beta0);
  std::uniform_int_distribution<tsplib::City> start_city(0, inst.dimension() - 1);

  AcsfaResult result;
  auto& record = result.record;
  bool have_best = false;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    tsplib::Length iteration_best = std::numeric_limits<tsplib::Length>::max();
    for (auto& ant : population) {
      const acs::AntParams params{ant.position.beta(), config.theta, ant.position.rho(),
                                  ant.position.q0()};
      tsplib::Tour tour = acs::construct_tour(inst, tau, params, rng, start_city(rng));
      ant.brightness = brightness(tour.length);
      iteration_best = std::min(iteration_best, tour.length);
      if (!have_best || tour.length < record.best.length) {
        record.best = std::move(tour);
        have_best = true;
      }
    }
    acs::global_update(tau, record.best, config.alpha);

    firefly::firefly_step(population, fa, config.bounds, rng);
    firefly::reduce_alpha(fa, population.front().position.delta());

    record.iteration_best.push_back(iteration_best);
    record.best_trace.push_back(record.best.length);
    result.trace.push_back(summarize(population));

    if (config.time_limit && elapsed() >= *config.time_limit) break;
  }
  if (!have_best) record.best = acs::nearest_neighbor_tour(inst, 0);

  result.best_params = population.front().position;
  result.final_alpha = fa.alpha;
  record.seconds = elapsed();
  return result;
}

}  // namespace acsfa::hybrid
