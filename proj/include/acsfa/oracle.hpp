// Exact solvers for small instances.
#pragma once

#include "acsfa/tsplib.hpp"

namespace acsfa::oracle {

inline constexpr std::size_t kBruteForceMax = 10;
inline constexpr std::size_t kHeldKarpMax = 18;

/// Enumerates every tour with city 0 fixed first and one orientation per
/// cycle. Throws std::invalid_argument when n exceeds `max_n`.
tsplib::Tour brute_force(const tsplib::TspInstance& inst,
                         std::size_t max_n = kBruteForceMax);

/// Bitmask dynamic program over subsets containing city 0; O(n^2 2^n) time,
/// O(n 2^n) memory.
tsplib::Length held_karp(const tsplib::TspInstance& inst,
                         std::size_t max_n = kHeldKarpMax);

}  // namespace acsfa::oracle
