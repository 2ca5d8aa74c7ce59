// Firefly dynamics over the bounded five-dimensional parameter space
// (beta, rho, q0, gamma, delta) carried by each hybrid ant.
#pragma once

#include <array>
#include <vector>

#include "acsfa/acs.hpp"

namespace acsfa::firefly {

inline constexpr std::size_t kDims = 5;

enum Dim : std::size_t { kBeta = 0, kRho = 1, kQ0 = 2, kGamma = 3, kDelta = 4 };

inline constexpr std::array<const char*, kDims> kDimNames = {"beta", "rho", "q0",
                                                             "ff_gamma", "ff_delta"};

struct Range {
  double low = 0.0;
  double high = 0.0;
  double width() const noexcept { return high - low; }
};

struct ParamVector {
  std::array<double, kDims> x{};

  double beta() const noexcept { return x[kBeta]; }
  double rho() const noexcept { return x[kRho]; }
  double q0() const noexcept { return x[kQ0]; }
  double gamma() const noexcept { return x[kGamma]; }
  double delta() const noexcept { return x[kDelta]; }

  bool operator==(const ParamVector&) const = default;
};

struct ParamBounds {
  std::array<Range, kDims> ranges{{{0.0, 8.0}, {0.5, 1.0}, {0.5, 1.0}, {0.0, 10.0}, {0.8, 1.0}}};

  /// Requires low <= high in every dimension. A zero-width range pins the
  /// component; the normalised distance then ignores that dimension.
  void validate() const;
  bool contains(const ParamVector& v) const noexcept;
};

/// Randomisation weight and the two constants of the attraction model.
struct FaState {
  double alpha = 2.3;
  double beta0 = 1.0;
  double alpha0 = 2.3;

  static FaState initial(double alpha0 = 2.3, double beta0 = 1.0) {
    return FaState{alpha0, beta0, alpha0};
  }
};

struct Firefly {
  ParamVector position;
  double brightness = 0.0;
};

/// Euclidean distance after scaling each difference by its range width;
/// lies in [0, sqrt(5)].
double param_distance(const ParamVector& a, const ParamVector& b,
                      const ParamBounds& bounds);

/// beta0 * exp(-gamma r^2).
double attractiveness(double beta0, double gamma, double r);

/// Moves xi toward xj with attraction from `gamma` and a uniform random
/// kick scaled by fa.alpha, then clamps into bounds. One uniform draw per
/// dimension, in dimension order.
ParamVector move(const ParamVector& xi, const ParamVector& xj, const FaState& fa,
                 double gamma, const ParamBounds& bounds, Rng& rng);

void reduce_alpha(FaState& fa, double delta);

ParamVector clamp(ParamVector v, const ParamBounds& bounds) noexcept;

/// One sweep over ordered pairs (i ascending, j ascending). Firefly i moves
/// toward j whenever j is strictly brighter, using j's gamma; moved
/// positions are visible to later pairs. Brightness values are those of the
/// last evaluation and do not change here. The population is then sorted
/// brightest first (stable).
void firefly_step(std::vector<Firefly>& population, const FaState& fa,
                  const ParamBounds& bounds, Rng& rng);

}  // namespace acsfa::firefly
