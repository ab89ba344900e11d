#pragma once

#include <cstdint>
#include <random>

#include "canonsys/potential.hpp"

namespace canonsys {

/// Uniform draw in [-1, 1) from the top 53 bits of one generator output.
double unit_coefficient(std::mt19937_64& rng);

/// Trig polynomial with all coefficients in [-1, 1); a0 included unless zero_mean.
TrigPoly random_trig_poly(std::mt19937_64& rng, std::size_t degree, bool zero_mean = false);

/// q1, q2, q independent, each of degree 1 + (draw mod max_degree).
PotentialSpec random_potential(std::uint64_t seed, std::size_t max_degree = 4);
/// [[a, b], [b, -a]] with a, b of the given degree.
PotentialSpec random_canonical_potential(std::uint64_t seed, std::size_t degree = 2);

}  // namespace canonsys
