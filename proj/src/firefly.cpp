#include "acsfa/firefly.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace acsfa::firefly {

void ParamBounds::validate() const {
  for (std::size_t d = 0; d < kDims; ++d) {
    const Range& r = ranges[d];
    if (!std::isfinite(r.low) || !std::isfinite(r.high) || r.low > r.high) {
      throw std::invalid_argument(fmt::format("{} bounds [{}, {}] are not a valid range",
                                              kDimNames[d], r.low, r.high));
    }
  }
}

bool ParamBounds::contains(const ParamVector& v) const noexcept {
  for (std::size_t d = 0; d < kDims; ++d) {
    if (!(v.x[d] >= ranges[d].low && v.x[d] <= ranges[d].high)) return false;
  }
  return true;
}

double param_distance(const ParamVector& a, const ParamVector& b,
                      const ParamBounds& bounds) {
  double sum = 0.0;
  for (std::size_t d = 0; d < kDims; ++d) {
    const double w = bounds.ranges[d].width();
    if (w <= 0.0) continue;
    const double diff = (a.x[d] - b.x[d]) / w;
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double attractiveness(double beta0, double gamma, double r) {
  return beta0 * std::exp(-gamma * r * r);
}

ParamVector clamp(ParamVector v, const ParamBounds& bounds) noexcept {
  for (std::size_t d = 0; d < kDims; ++d) {
    v.x[d] = std::clamp(v.x[d], bounds.ranges[d].low, bounds.ranges[d].high);
  }
  return v;
}

ParamVector move(const ParamVector& xi, const ParamVector& xj, const FaState& fa,
                 double gamma, const ParamBounds& bounds, Rng& rng) {
  const double beta = attractiveness(fa.beta0, gamma, param_distance(xi, xj, bounds));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParamVector out;
  for (std::size_t d = 0; d < kDims; ++d) {
    const double kick = unit(rng) - 0.5;
    out.x[d] = xi.x[d] + beta * (xj.x[d] - xi.x[d]) + fa.alpha * kick;
  }
  return clamp(out, bounds);
}

void reduce_alpha(FaState& fa, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument(fmt::format("delta = {} outside [0, 1]", delta));
  }
  fa.alpha *= delta;
}

void firefly_step(std::vector<Firefly>& population, const FaState& fa,
                  const ParamBounds& bounds, Rng& rng) {
  const std::size_t m = population.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (population[j].brightness > population[i].brightness) {
        population[i].position = move(population[i].position, population[j].position, fa,
                                      population[j].position.gamma(), bounds, rng);
      }
    }
  }
  std::ranges::stable_sort(population, [](const Firefly& a, const Firefly& b) {
    return a.brightness > b.brightness;
  });
}

}  // namespace acsfa::firefly
