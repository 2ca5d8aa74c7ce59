// Ant Colony System: state transition rule, local and global pheromone
// updates, and the fixed-parameter baseline solver.
#pragma once

#include <random>
#include <span>
#include <vector>

#include "acsfa/tsplib.hpp"

namespace acsfa {

/// Every stochastic routine takes its generator explicitly; runs never share
/// one.
using Rng = std::mt19937_64;

}  // namespace acsfa

namespace acsfa::acs {

using tsplib::City;
using tsplib::Length;
using tsplib::Tour;
using tsplib::TspInstance;

/// The per-ant knobs of tour construction. In plain ACS every ant shares
/// one set; in the hybrid each ant carries its own.
struct AntParams {
  double beta = 2.0;   // heuristic exponent
  double theta = 1.0;  // pheromone exponent
  double rho = 0.1;    // local evaporation
  double q0 = 0.9;     // exploitation threshold
};

struct AcsParams {
  double beta = 2.0;
  double theta = 1.0;
  double rho = 0.1;
  double q0 = 0.9;
  double alpha = 0.1;  // global decay
  std::size_t ants = 10;
  /// Initial and local-update pheromone level. Non-positive means "derive
  /// from the nearest-neighbour tour" (see compute_tau0).
  double tau0 = 0.0;

  /// Throws std::invalid_argument naming the first field out of range.
  void validate() const;
  AntParams ant() const { return {beta, theta, rho, q0}; }
};

/// Symmetric n x n trail intensities. Writes go through set() so both
/// triangles stay equal.
class PheromoneMatrix {
 public:
  PheromoneMatrix(std::size_t n, double tau0);

  std::size_t size() const noexcept { return n_; }
  double tau0() const noexcept { return tau0_; }
  double operator()(City r, City s) const noexcept { return data_[r * n_ + s]; }
  void set(City r, City s, double value) noexcept {
    data_[r * n_ + s] = value;
    data_[s * n_ + r] = value;
  }
  /// Multiplies every entry by `factor`.
  void scale(double factor) noexcept;

  double min_entry() const noexcept;
  bool is_symmetric() const noexcept;

 private:
  std::size_t n_;
  double tau0_;
  std::vector<double> data_;
};

struct RunRecord {
  Tour best;
  /// Global-best length after each iteration (non-increasing).
  std::vector<Length> best_trace;
  /// Best length found within each iteration.
  std::vector<Length> iteration_best;
  double seconds = 0.0;
};

Tour nearest_neighbor_tour(const TspInstance& inst, City start);

/// 1 / (n * L_nn) with L_nn the nearest-neighbour tour length from city 0.
double compute_tau0(const TspInstance& inst);

/// 1 / d(r, u), with zero distances treated as 1.
inline double heuristic(const TspInstance& inst, City r, City u) noexcept {
  const Length d = inst(r, u);
  return 1.0 / static_cast<double>(d > 0 ? d : 1);
}

/// tau(r,u)^theta * eta(r,u)^beta.
double edge_score(const TspInstance& inst, const PheromoneMatrix& tau, City r,
                  City u, const AntParams& params);

/// Probability of each city in `unvisited` (same order). Throws
/// std::invalid_argument if `unvisited` is empty.
std::vector<double> transition_probabilities(City r,
                                             std::span<const City> unvisited,
                                             const PheromoneMatrix& tau,
                                             const TspInstance& inst,
                                             const AntParams& params);

/// Pseudo-random-proportional rule: with probability q0 the best-scoring
/// city (lowest index on ties), otherwise a draw from
/// transition_probabilities.
City select_next_city(City r, std::span<const City> unvisited,
                      const PheromoneMatrix& tau, const TspInstance& inst,
                      const AntParams& params, Rng& rng);

/// tau(r,s) <- (1 - rho) tau(r,s) + rho tau0, both directions.
void local_update(PheromoneMatrix& tau, City r, City s, double rho) noexcept;

/// Evaporates every edge by (1 - alpha) and deposits alpha / L on the edges
/// of `best`.
void global_update(PheromoneMatrix& tau, const Tour& best, double alpha);

/// Builds one tour from `start`, applying the local update to every
/// traversed edge including the closing one.
Tour construct_tour(const TspInstance& inst, PheromoneMatrix& tau,
                    const AntParams& params, Rng& rng, City start);

/// Fixed-parameter ACS. With zero iterations the nearest-neighbour tour
/// from city 0 is returned.
RunRecord run_acs(const TspInstance& inst, const AcsParams& params,
                  std::size_t iterations, Rng& rng);

}  // namespace acsfa::acs
