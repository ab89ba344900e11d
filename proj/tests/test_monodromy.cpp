#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "canonsys/errors.hpp"
#include "canonsys/monodromy.hpp"
#include "canonsys/prufer.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/sweep.hpp"

using namespace canonsys;

namespace {

bool near(const Mat2& a, const Mat2& b, double tol) { return max_abs(a - b) <= tol; }

PotentialSpec sigma1() { return PotentialSpec::constant(0.0, 0.0, 1.0); }

}  // namespace

TEST_CASE("free system") {
  const auto zero = PotentialSpec::zero();
  const auto traj = integrate_fundamental(zero, 1.0);
  CHECK(traj.matrices.front() == Mat2::identity());
  CHECK(traj.z_nodes.front() == 0.0);
  CHECK(traj.z_nodes.back() == doctest::Approx(kPi));
  CHECK(near(traj.matrices.back(), -Mat2::identity(), 1e-11));
  for (double l : linspace(-5.3, 5.3, 11)) {
    CHECK(discriminant(zero, l) == doctest::Approx(oracle::free_delta(l)).epsilon(1e-10));
    const auto tr = integrate_fundamental(zero, l);
    for (std::size_t i = 0; i < tr.z_nodes.size(); i += 8) {
      CHECK(near(tr.matrices[i], exp_j(-l * tr.z_nodes[i]), 1e-10));
    }
  }
}

TEST_CASE("constant potentials against the matrix exponential") {
  const double cases[][3] = {{0.0, 0.0, 1.0}, {1.0, -1.0, 0.0}, {0.7, -0.2, 0.4}, {2.0, 2.0, 0.0}, {-1.5, 0.5, -0.9}};
  for (const auto& c : cases) {
    const auto spec = PotentialSpec::constant(c[0], c[1], c[2]);
    for (double l : {-3.3, -0.4, 0.0, 1.0, 2.71, 7.5}) {
      const Mat2 want = oracle::to_mat2(oracle::constant_fundamental(c[0], c[1], c[2], l, kPi));
      CHECK(near(monodromy(spec, l).a, want, 1e-9));
      const Mat2 mid = oracle::to_mat2(oracle::constant_fundamental(c[0], c[1], c[2], l, kPi / 2));
      const auto tr = integrate_fundamental(spec, l);
      CHECK(near(tr.matrices[tr.matrices.size() / 2], mid, 1e-9));
    }
  }
}

TEST_CASE("closed-form discriminants") {
  const auto dirac = PotentialSpec::canonical(ScalarFunction::constant(1.0), ScalarFunction::constant(0.0));
  for (double l : {-4.2, -1.3, 0.2, 0.9, 1.7, 3.05}) {
    CHECK(discriminant(dirac, l) == doctest::Approx(oracle::dirac_delta(1.0, l)).epsilon(1e-9));
  }
  CHECK(discriminant(sigma1(), 0.0) == doctest::Approx(2 * std::cosh(kPi)).epsilon(1e-10));
  CHECK(discriminant(sigma1(), 0.0) == doctest::Approx(23.1839).epsilon(1e-5));
}

TEST_CASE("variable potential against fixed-step RK4") {
  for (std::uint64_t seed : {3u, 8u}) {
    const auto p = random_potential(seed);
    for (double l : {-2.5, 0.6, 4.0}) {
      const Mat2 want = oracle::rk4_fundamental([&](double z) { return evaluate(p, z); }, l, kPi, 4000);
      CHECK(near(monodromy(p, l).a, want, 1e-9));
    }
  }
}

TEST_CASE("determinant, residual and accessor convention") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = random_potential(seed);
    for (double l : {-6.0, -1.1, 0.0, 2.4, 6.0}) {
      const auto tr = integrate_fundamental(p, l);
      CHECK(tr.det_drift <= 1e-10);
      CHECK(trajectory_residual(p, tr) <= 1e-9);
      const auto m = monodromy(p, l);
      CHECK(std::abs(m.a.det() - 1.0) <= 1e-10);
      CHECK(m.delta == m.a.a11 + m.a.a22);
      CHECK(m.y12() == m.a.a21);
      CHECK(m.y21() == m.a.a12);
    }
  }
}

TEST_CASE("Floquet multipliers") {
  auto at = [](double d) { return floquet_multipliers(d); };
  CHECK(at(2.0).rho_plus == std::complex<double>(1.0, 0.0));
  CHECK(at(2.0).rho_minus == std::complex<double>(1.0, 0.0));
  CHECK(std::abs(at(0.0).rho_plus - std::complex<double>(0.0, 1.0)) <= 1e-15);
  CHECK(std::abs(at(0.0).rho_minus - std::complex<double>(0.0, -1.0)) <= 1e-15);
  const double d = 2 * std::cosh(kPi);
  CHECK(at(d).rho_plus.real() == doctest::Approx(std::exp(kPi)).epsilon(1e-12));
  CHECK(at(d).rho_minus.real() == doctest::Approx(std::exp(-kPi)).epsilon(1e-12));
  CHECK(at(23.1839).rho_plus.real() == doctest::Approx(23.1407).epsilon(1e-4));
  CHECK(at(23.1839).rho_minus.real() == doctest::Approx(0.0432).epsilon(1e-3));
  for (double x : {-3.0, -2.0, -1.2, 0.5, 1.99, 2.5, 40.0}) {
    const auto f = at(x);
    CHECK(std::abs(f.rho_plus * f.rho_minus - 1.0) <= 1e-10);
    CHECK(std::abs(f.rho_plus + f.rho_minus - x) <= 1e-10);
    if (std::abs(x) <= 2) CHECK(std::abs(std::abs(f.rho_plus) - 1.0) <= 1e-10);
  }
}

TEST_CASE("stability classes") {
  CHECK(classify_stability(0.0, 1e-9) == Stability::Stable);
  CHECK(classify_stability(23.1839, 1e-9) == Stability::Unstable);
  CHECK(classify_stability(2.0, 1e-9) == Stability::Boundary);
  CHECK(classify_stability(-2.0 - 5e-10, 1e-9) == Stability::Boundary);
  CHECK(classify_stability(-2.1, 1e-9) == Stability::Unstable);
  CHECK(std::string(to_string(Stability::Boundary)) == "boundary");
}

TEST_CASE("discriminant derivative") {
  const auto zero = PotentialSpec::zero();
  CHECK(discriminant_derivative(zero, 0.5).value == doctest::Approx(-2 * kPi).epsilon(1e-8));
  CHECK(std::abs(discriminant_derivative(zero, 0.0).value) <= 1e-8);
  const double c = 0.75;
  const auto scalar = PotentialSpec::scalar(ScalarFunction::constant(c));
  for (double l : {-1.3, 0.2, 1.6, 3.3}) {
    const auto d = discriminant_derivative(scalar, l);
    CHECK(d.value == doctest::Approx(-2 * kPi * std::sin((l - c) * kPi)).epsilon(1e-8));
  }
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = random_potential(seed);
    for (double l : linspace(-5.1, 5.1, 9)) {
      const auto d = discriminant_derivative(p, l);
      if (std::abs(d.value) >= 1e-6) CHECK(d.relative_error <= 1e-5);
    }
  }
}

TEST_CASE("shift invariance of the discriminant") {
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const auto p = random_potential(seed);
    const auto lambdas = linspace(-6.0, 6.0, 16);
    std::vector<double> base;
    for (double l : lambdas) base.push_back(discriminant(p, l));
    for (double tau : tau_grid(8)) {
      const auto ps = shift(p, tau);
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        CHECK(std::abs(discriminant(ps, lambdas[i]) - base[i]) <= 1e-7);
      }
    }
  }
}

TEST_CASE("sign of the derivative along a sweep") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto p = random_potential(seed);
    for (const auto& row : discriminant_sweep(p, linspace(-6.0, 6.0, 61), true)) {
      if (std::abs(row.m.delta) > 2 || std::abs(row.delta_prime) < 1e-6) continue;
      if (std::abs(row.m.y12()) > 1e-8) CHECK(row.delta_prime * row.m.y12() < 0);
      if (std::abs(row.m.y21()) > 1e-8) CHECK(row.delta_prime * row.m.y21() > 0);
    }
  }
}

TEST_CASE("Dirichlet points sit outside the stable set") {
  const auto p = random_potential(4);
  for (long n = -3; n <= 3; ++n) {
    const auto mu = monodromy(p, find_mu(p, n).value);
    CHECK(std::abs(mu.y12()) <= 1e-7);
    CHECK(mu.delta * (mu.y11() > 0 ? 1.0 : -1.0) >= 2 - 1e-8);
    const auto nu = monodromy(p, find_nu(p, n).value);
    CHECK(std::abs(nu.y21()) <= 1e-7);
    CHECK(nu.delta * (nu.y11() > 0 ? 1.0 : -1.0) >= 2 - 1e-8);
  }
}

TEST_CASE("gauge rotation is isospectral") {
  const auto c = random_canonical_potential(6);
  for (double omega : {0.4, 1.3}) {
    const auto r = gauge_rotate(c, omega);
    for (double l : linspace(-4.0, 4.0, 9)) CHECK(std::abs(discriminant(r, l) - discriminant(c, l)) <= 1e-7);
  }
}

TEST_CASE("non-finite lambda is rejected") {
  CHECK_THROWS(monodromy(PotentialSpec::zero(), std::nan("")));
}

TEST_CASE("step budget exhaustion raises StepSizeUnderflow") {
  IntegratorOptions o;
  o.max_steps = 3;
  CHECK_THROWS_AS(monodromy(random_potential(1), 40.0, o), StepSizeUnderflow);
}

TEST_CASE("initial step heuristic") {
  CHECK(initial_step(0.0) == doctest::Approx(kPi / 64));
  CHECK(initial_step(99.0) == doctest::Approx(1.0 / 400));
}
