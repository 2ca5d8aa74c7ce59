#include "acsfa/acs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <stdexcept>

namespace acsfa::acs {

void AcsParams::validate() const {
  auto fail = [](const char* field, double value, const char* range) {
    throw std::invalid_argument(fmt::format("{} = {} outside {}", field, value, range));
  };
  if (!(beta >= 0.0)) fail("beta", beta, "[0, inf)");
  if (!(theta >= 0.0)) fail("theta", theta, "[0, inf)");
  if (!(rho > 0.0 && rho < 1.0)) fail("rho", rho, "(0, 1)");
  if (!(q0 >= 0.0 && q0 <= 1.0)) fail("q0", q0, "[0, 1]");
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha", alpha, "(0, 1)");
  if (ants == 0) throw std::invalid_argument("ants must be positive");
  if (std::isnan(tau0)) fail("tau0", tau0, "(0, inf)");
}

PheromoneMatrix::PheromoneMatrix(std::size_t n, double tau0)
    : n_(n), tau0_(tau0), data_(n * n, tau0) {
  if (!(tau0 > 0.0)) throw std::invalid_argument("tau0 must be positive");
}

void PheromoneMatrix::scale(double factor) noexcept {
  for (double& v : data_) v *= factor;
}

double PheromoneMatrix::min_entry() const noexcept {
  return *std::ranges::min_element(data_);
}

bool PheromoneMatrix::is_symmetric() const noexcept {
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t s = r + 1; s < n_; ++s)
      if (data_[r * n_ + s] != data_[s * n_ + r]) return false;
  return true;
}

Tour nearest_neighbor_tour(const TspInstance& inst, City start) {
  const std::size_t n = inst.dimension();
  if (start >= n) throw std::out_of_range("start city out of range");
  std::vector<bool> visited(n, false);
  std::vector<City> order;
  order.reserve(n);
  order.push_back(start);
  visited[start] = true;
  City current = start;
  for (std::size_t step = 1; step < n; ++step) {
    City next = n;
    Length best = std::numeric_limits<Length>::max();
    for (City c = 0; c < n; ++c) {
      if (!visited[c] && inst(current, c) < best) {
        best = inst(current, c);
        next = c;
      }
    }
    visited[next] = true;
    order.push_back(next);
    current = next;
  }
  return tsplib::make_tour(inst, std::move(order));
}

double compute_tau0(const TspInstance& inst) {
  const Length nn = nearest_neighbor_tour(inst, 0).length;
  return 1.0 / (static_cast<double>(inst.dimension()) *
                static_cast<double>(std::max<Length>(nn, 1)));
}

double edge_score(const TspInstance& inst, const PheromoneMatrix& tau, City r,
                  City u, const AntParams& params) {
  const double t = params.theta == 1.0 ? tau(r, u) : std::pow(tau(r, u), params.theta);
  const double eta = heuristic(inst, r, u);
  double h = 1.0;
  if (params.beta == 2.0) {
    h = eta * eta;
  } else if (params.beta != 0.0) {
    h = std::pow(eta, params.beta);
  }
  return t * h;
}

std::vector<double> transition_probabilities(City r,
                                             std::span<const City> unvisited,
                                             const PheromoneMatrix& tau,
                                             const TspInstance& inst,
                                             const AntParams& params) {
  if (unvisited.empty()) throw std::invalid_argument("no unvisited cities");
  std::vector<double> p(unvisited.size());
  double total = 0.0;
  for (std::size_t k = 0; k < unvisited.size(); ++k) {
    p[k] = edge_score(inst, tau, r, unvisited[k], params);
    total += p[k];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    // All scores underflowed (or overflowed): fall back to uniform.
    std::ranges::fill(p, 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (double& v : p) v /= total;
  return p;
}

namespace {

// Shared by select_next_city and construct_tour; `scores` is scratch space.
City choose(City r, std::span<const City> unvisited, const PheromoneMatrix& tau,
            const TspInstance& inst, const AntParams& params, Rng& rng,
            std::vector<double>& scores) {
  if (unvisited.empty()) throw std::invalid_argument("no unvisited cities");
  if (unvisited.size() == 1) return unvisited.front();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double q = unit(rng);

  scores.resize(unvisited.size());
  double total = 0.0;
  City best_city = unvisited.front();
  double best_score = -1.0;
  for (std::size_t k = 0; k < unvisited.size(); ++k) {
    const City u = unvisited[k];
    const double s = edge_score(inst, tau, r, u, params);
    scores[k] = s;
    total += s;
    if (s > best_score || (s == best_score && u < best_city)) {
      best_score = s;
      best_city = u;
    }
  }
  if (q <= params.q0) return best_city;

  if (!(total > 0.0) || !std::isfinite(total)) {
    std::uniform_int_distribution<std::size_t> pick(0, unvisited.size() - 1);
    return unvisited[pick(rng)];
  }
  const double target = unit(rng) * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < unvisited.size(); ++k) {
    acc += scores[k];
    if (target < acc) return unvisited[k];
  }
  return unvisited.back();
}

}  // namespace

City select_next_city(City r, std::span<const City> unvisited,
                      const PheromoneMatrix& tau, const TspInstance& inst,
                      const AntParams& params, Rng& rng) {
  std::vector<double> scratch;
  return choose(r, unvisited, tau, inst, params, rng, scratch);
}

void local_update(PheromoneMatrix& tau, City r, City s, double rho) noexcept {
  tau.set(r, s, (1.0 - rho) * tau(r, s) + rho * tau.tau0());
}

void global_update(PheromoneMatrix& tau, const Tour& best, double alpha) {
  const std::size_t n = best.order.size();
  if (n != tau.size()) throw std::invalid_argument("tour size does not match pheromone matrix");
  tau.scale(1.0 - alpha);
  const double deposit = alpha / static_cast<double>(std::max<Length>(best.length, 1));
  for (std::size_t k = 0; k < n; ++k) {
    const City r = best.order[k], s = best.order[(k + 1) % n];
    tau.set(r, s, tau(r, s) + deposit);
  }
}

Tour construct_tour(const TspInstance& inst, PheromoneMatrix& tau,
                    const AntParams& params, Rng& rng, City start) {
  const std::size_t n = inst.dimension();
  if (start >= n) throw std::out_of_range("start city out of range");

  // Unvisited cities kept in ascending order so draws are independent of
  // the construction history.
  std::vector<City> unvisited;
  unvisited.reserve(n - 1);
  for (City c = 0; c < n; ++c)
    if (c != start) unvisited.push_back(c);

  std::vector<City> order;
  order.reserve(n);
  order.push_back(start);
  std::vector<double> scratch;
  Length length = 0;
  City current = start;
  while (!unvisited.empty()) {
    const City next = choose(current, unvisited, tau, inst, params, rng, scratch);
    unvisited.erase(std::ranges::lower_bound(unvisited, next));
    local_update(tau, current, next, params.rho);
    length += inst(current, next);
    order.push_back(next);
    current = next;
  }
  local_update(tau, current, start, params.rho);
  length += inst(current, start);
  return Tour{std::move(order), length};
}

RunRecord run_acs(const TspInstance& inst, const AcsParams& params,
                  std::size_t iterations, Rng& rng) {
  params.validate();
  const auto t0 = std::chrono::steady_clock::now();

  RunRecord record;
  const double tau0 = params.tau0 > 0.0 ? params.tau0 : compute_tau0(inst);
  PheromoneMatrix tau(inst.dimension(), tau0);
  const AntParams ant = params.ant();
  std::uniform_int_distribution<City> start_city(0, inst.dimension() - 1);

  bool have_best = false;
  for (std::size_t it = 0; it < iterations; ++it) {
    Length iteration_best = std::numeric_limits<Length>::max();
    for (std::size_t k = 0; k < params.ants; ++k) {
      Tour tour = construct_tour(inst, tau, ant, rng, start_city(rng));
      iteration_best = std::min(iteration_best, tour.length);
      if (!have_best || tour.length < record.best.length) {
        record.best = std::move(tour);
        have_best = true;
      }
    }
    global_update(tau, record.best, params.alpha);
    record.iteration_best.push_back(iteration_best);
    record.best_trace.push_back(record.best.length);
  }
  if (!have_best) record.best = nearest_neighbor_tour(inst, 0);

  record.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return record;
}

}  // namespace acsfa::acs
