#include "canonsys/random_potential.hpp"

#include <algorithm>

namespace canonsys {

double unit_coefficient(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

TrigPoly random_trig_poly(std::mt19937_64& rng, std::size_t degree, bool zero_mean) {
  TrigPoly p;
  p.a0 = zero_mean ? 0.0 : unit_coefficient(rng);
  for (std::size_t k = 0; k < degree; ++k) {
    p.cos_coeffs.push_back(unit_coefficient(rng));
    p.sin_coeffs.push_back(unit_coefficient(rng));
  }
  return p;
}

PotentialSpec random_potential(std::uint64_t seed, std::size_t max_degree) {
  std::mt19937_64 rng(seed);
  const std::size_t cap = std::max<std::size_t>(1, max_degree);
  auto draw = [&] {
    const std::size_t degree = 1 + static_cast<std::size_t>(rng() % cap);
    return ScalarFunction::trig(random_trig_poly(rng, degree));
  };
  ScalarFunction q1 = draw();
  ScalarFunction q2 = draw();
  ScalarFunction q = draw();
  return {std::move(q1), std::move(q2), std::move(q)};
}

PotentialSpec random_canonical_potential(std::uint64_t seed, std::size_t degree) {
  std::mt19937_64 rng(seed);
  ScalarFunction a = ScalarFunction::trig(random_trig_poly(rng, degree));
  ScalarFunction b = ScalarFunction::trig(random_trig_poly(rng, degree));
  return PotentialSpec::canonical(std::move(a), std::move(b));
}

}  // namespace canonsys
