#include "acsfa/oracle.hpp"

#include <algorithm>
#include <fmt/format.h>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace acsfa::oracle {

using tsplib::City;
using tsplib::Length;

tsplib::Tour brute_force(const tsplib::TspInstance& inst, std::size_t max_n) {
  const std::size_t n = inst.dimension();
  if (n > max_n) {
    throw std::invalid_argument(fmt::format("brute force limited to n <= {}, got {}", max_n, n));
  }
  std::vector<City> rest(n - 1);
  std::iota(rest.begin(), rest.end(), City{1});

  tsplib::Tour best;
  best.length = std::numeric_limits<Length>::max();
  do {
    // Each cycle appears twice (once per direction); keep one.
    if (rest.front() > rest.back()) continue;
    Length len = inst(0, rest.front()) + inst(rest.back(), 0);
    for (std::size_t k = 0; k + 1 < rest.size(); ++k) len += inst(rest[k], rest[k + 1]);
    if (len < best.length) {
      best.length = len;
      best.order.assign(1, 0);
      best.order.insert(best.order.end(), rest.begin(), rest.end());
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

Length held_karp(const tsplib::TspInstance& inst, std::size_t max_n) {
  const std::size_t n = inst.dimension();
  if (n > max_n) {
    throw std::invalid_argument(fmt::format("Held-Karp limited to n <= {}, got {}", max_n, n));
  }
  // Subsets over cities 1..n-1; bit (c - 1) stands for city c.
  const std::size_t k = n - 1;
  const std::size_t subsets = std::size_t{1} << k;
  constexpr Length kInf = std::numeric_limits<Length>::max() / 4;
  std::vector<Length> cost(subsets * k, kInf);
  auto at = [&](std::size_t set, std::size_t last) -> Length& { return cost[set * k + last]; };

  for (std::size_t c = 0; c < k; ++c) at(std::size_t{1} << c, c) = inst(0, c + 1);
  for (std::size_t set = 1; set < subsets; ++set) {
    for (std::size_t last = 0; last < k; ++last) {
      if (!(set >> last & 1)) continue;
      const Length base = at(set, last);
      if (base >= kInf) continue;
      for (std::size_t next = 0; next < k; ++next) {
        if (set >> next & 1) continue;
        Length& slot = at(set | std::size_t{1} << next, next);
        slot = std::min(slot, base + inst(last + 1, next + 1));
      }
    }
  }
  Length best = kInf;
  for (std::size_t last = 0; last < k; ++last) {
    best = std::min(best, at(subsets - 1, last) + inst(last + 1, 0));
  }
  return best;
}

}  // namespace acsfa::oracle
