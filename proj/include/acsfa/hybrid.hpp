// ACSFA: ACS whose ants each carry a parameter vector that a firefly sweep
// evolves after every iteration, using tour quality as brightness.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "acsfa/acs.hpp"
#include "acsfa/firefly.hpp"

namespace acsfa::hybrid {

using firefly::kDims;
using firefly::ParamBounds;
using firefly::ParamVector;

struct AcsfaConfig {
  std::size_t iterations = 1000;
  std::size_t ants = 10;  // also the firefly population size
  ParamBounds bounds;
  double alpha = 0.1;  // ACS global decay, fixed
  double theta = 1.0;
  double ff_alpha0 = 2.3;
  double ff_beta0 = 1.0;
  double tau0 = 0.0;  // non-positive: derive from the nearest-neighbour tour
  /// Stops after the first iteration that ends past this many seconds.
  std::optional<double> time_limit;

  void validate() const;
};

/// Population statistics of the tuned parameters after one iteration.
struct TraceRow {
  std::array<double, kDims> mean{};
  std::array<double, kDims> min{};
  std::array<double, kDims> max{};
};

using ParameterTrace = std::vector<TraceRow>;

struct AcsfaResult {
  acs::RunRecord record;
  /// Brightest firefly's vector when the run ended.
  ParamVector best_params;
  ParameterTrace trace;
  double final_alpha = 0.0;
};

/// 1 / length. Throws std::invalid_argument for a zero length.
double brightness(tsplib::Length length);

/// m vectors drawn uniformly per dimension inside `bounds`.
std::vector<ParamVector> init_population(const ParamBounds& bounds, std::size_t m, Rng& rng);

TraceRow summarize(const std::vector<firefly::Firefly>& population);

AcsfaResult run_acsfa(const tsplib::TspInstance& inst, const AcsfaConfig& config, Rng& rng);

}  // namespace acsfa::hybrid
