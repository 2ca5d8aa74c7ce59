// Helpers shared by the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "acsfa/tsplib.hpp"

namespace testing {

inline const std::filesystem::path kDataDir = ACSFA_DATA_DIR;
inline const std::filesystem::path kTestDataDir = ACSFA_TEST_DATA_DIR;

using acsfa::tsplib::City;
using acsfa::tsplib::Length;
using acsfa::tsplib::Point;
using acsfa::tsplib::TspInstance;

inline std::vector<Point> random_points(std::size_t n, std::mt19937_64& rng, double side = 1000.0) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

inline TspInstance random_euc(std::size_t n, std::mt19937_64& rng, double side = 1000.0) {
  return TspInstance::from_coords("random", acsfa::tsplib::Metric::Euc2d,
                                  random_points(n, rng, side));
}

inline std::vector<City> random_order(std::size_t n, std::mt19937_64& rng) {
  std::vector<City> order(n);
  std::iota(order.begin(), order.end(), City{0});
  std::ranges::shuffle(order, rng);
  return order;
}

// Direct summation, independent of the library's tour_length.
inline Length cycle_length(const TspInstance& inst, const std::vector<City>& order) {
  Length total = 0;
  for (std::size_t k = 0; k < order.size(); ++k)
    total += inst(order[k], order[(k + 1) % order.size()]);
  return total;
}

// Reads a TSPLIB TOUR_SECTION (1-based ids, -1 terminated) as 0-based cities.
std::vector<City> read_opt_tour(const std::filesystem::path& path);

}  // namespace testing
