#include <atomic>
#include <cstring>
#include <stdexcept>

#include "doctest.h"

#include "canonsys/asymptotics.hpp"
#include "canonsys/errors.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/prufer.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/spectra.hpp"
#include "canonsys/sweep.hpp"

using namespace canonsys;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool same_bits(const Mat2& a, const Mat2& b) {
  return same_bits(a.a11, b.a11) && same_bits(a.a12, b.a12) && same_bits(a.a21, b.a21) && same_bits(a.a22, b.a22);
}

}  // namespace

TEST_CASE("parallel_for visits every index once") {
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), Exec::Parallel, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
}

TEST_CASE("parallel_for rethrows worker exceptions") {
  for (Exec e : {Exec::Serial, Exec::Parallel}) {
    CHECK_THROWS_AS(parallel_for(32, e, [](std::size_t i) {
                      if (i == 17) throw BracketFailure("index 17");
                    }),
                    BracketFailure);
  }
}

TEST_CASE("thread cap") {
  set_thread_cap(1);
  CHECK(thread_count() == 1);
  set_thread_cap(0);
  CHECK(thread_count() >= 1);
}

TEST_CASE("linspace") {
  const auto v = linspace(0.0, 4.0, 5);
  REQUIRE(v.size() == 5);
  CHECK(v[2] == 2.0);
  CHECK(v.back() == 4.0);
  CHECK(linspace(1.5, 9.0, 1) == std::vector<double>{1.5});
}

TEST_CASE("sweep: serial and parallel are bitwise equal") {
  const auto p = random_potential(42);
  const auto ls = linspace(-8.0, 8.0, 33);
  const auto a = discriminant_sweep_serial(p, ls, true);
  const auto b = discriminant_sweep(p, ls, true, {}, Exec::Parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(same_bits(a[i].m.a, b[i].m.a));
    CHECK(same_bits(a[i].delta_prime, b[i].delta_prime));
    CHECK(a[i].stability == b[i].stability);
  }
}

TEST_CASE("sweep without derivative") {
  const auto rows = discriminant_sweep(PotentialSpec::zero(), linspace(0.0, 4.0, 5), false);
  const double want[] = {2, -2, 2, -2, 2};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK_FALSE(rows[i].has_derivative);
    CHECK(rows[i].m.delta == doctest::Approx(want[i]).epsilon(1e-10));
    CHECK(rows[i].stability == Stability::Boundary);
  }
}

TEST_CASE("Dirichlet batch: serial and parallel are bitwise equal") {
  const auto p = random_potential(42);
  for (auto kind : {DirichletKind::Mu, DirichletKind::Nu}) {
    const auto a = dirichlet_eigenvalues_serial(p, kind, -6, 6);
    const auto b = dirichlet_eigenvalues(p, kind, -6, 6);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(same_bits(a[i].value, b[i].value));
      CHECK(a[i].n == b[i].n);
    }
  }
  CHECK(dirichlet_eigenvalues(p, DirichletKind::Mu, 3, 2).empty());
}

TEST_CASE("mu curve: serial and parallel are bitwise equal") {
  const auto p = random_potential(42);
  const auto taus = tau_grid(24);
  const auto a = shifted_mu_curve_serial(p, 1, taus);
  const auto b = shifted_mu_curve(p, 1, taus);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(same_bits(a.points[i].mu, b.points[i].mu));
  CHECK(same_bits(a.slope_bound, b.slope_bound));
}

TEST_CASE("band edges and extrema: serial and parallel are bitwise equal") {
  const auto p = random_canonical_potential(7);
  const auto a = band_edges(p, -1, 1, {}, Exec::Serial);
  const auto b = band_edges(p, -1, 1, {}, Exec::Parallel);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(same_bits(a.rows[i].lambda_2k_minus_1, b.rows[i].lambda_2k_minus_1));
    CHECK(same_bits(a.rows[i].lambda_2k, b.rows[i].lambda_2k));
    CHECK(same_bits(a.rows[i].lambda_p_2k_minus_1, b.rows[i].lambda_p_2k_minus_1));
    CHECK(same_bits(a.rows[i].lambda_p_2k, b.rows[i].lambda_p_2k));
  }
  const auto ea = verify_shift_extrema(p, a, 16, {}, Exec::Serial);
  const auto eb = verify_shift_extrema(p, b, 16, {}, Exec::Parallel);
  REQUIRE(ea.rows.size() == eb.rows.size());
  for (std::size_t i = 0; i < ea.rows.size(); ++i) {
    CHECK(same_bits(ea.rows[i].min_mu, eb.rows[i].min_mu));
    CHECK(same_bits(ea.rows[i].max_mu, eb.rows[i].max_mu));
  }
}

TEST_CASE("decay check: serial and parallel are bitwise equal") {
  const auto c = random_canonical_potential(3);
  const auto a = remainder_decay_check(c, {25, 50, 100}, {}, Exec::Serial);
  const auto b = remainder_decay_check(c, {25, 50, 100}, {}, Exec::Parallel);
  for (std::size_t i = 0; i < a.err_full.size(); ++i) {
    CHECK(same_bits(a.err_full[i], b.err_full[i]));
    CHECK(same_bits(a.err_coarse[i], b.err_coarse[i]));
  }
}

TEST_CASE("errors in parallel kernels surface to the caller") {
  IntegratorOptions o;
  o.max_steps = 2;
  CHECK_THROWS_AS(discriminant_sweep(random_potential(1), linspace(-5, 5, 8), false, o), StepSizeUnderflow);
  CHECK_THROWS_AS(dirichlet_eigenvalues(random_potential(1), DirichletKind::Mu, -3, 3, o), StepSizeUnderflow);
}

TEST_CASE("random potentials are reproducible") {
  const auto a = random_potential(99), b = random_potential(99);
  CHECK(a.q1() == b.q1());
  CHECK(a.q() == b.q());
  CHECK_FALSE(random_potential(98).q1() == a.q1());
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = unit_coefficient(rng);
    CHECK(u >= -1.0);
    CHECK(u < 1.0);
  }
  const auto c = random_canonical_potential(3, 2);
  CHECK(c.is_canonical_form());
  CHECK(c.q1().to_trig().degree() == 2);
  const auto z = random_trig_poly(rng, 3, true);
  CHECK(z.a0 == 0.0);
}
