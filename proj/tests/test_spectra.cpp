#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "canonsys/errors.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/spectra.hpp"

using namespace canonsys;

namespace {

PotentialSpec sigma1() { return PotentialSpec::constant(0.0, 0.0, 1.0); }

void check_chain(const SpectrumTable& t) {
  CHECK(t.chain_violation <= kChainSlack);
  CHECK(t.interlacing_ok);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    const double next = i + 1 < t.rows.size() ? t.rows[i + 1].lambda_p_2k_minus_1 : t.lambda_p_next;
    const double chain[] = {r.lambda_p_2k_minus_1,
                            std::min(r.mu_2k_minus_1, r.nu_2k_minus_1),
                            std::max(r.mu_2k_minus_1, r.nu_2k_minus_1),
                            r.lambda_p_2k,
                            r.lambda_2k_minus_1,
                            std::min(r.mu_2k, r.nu_2k),
                            std::max(r.mu_2k, r.nu_2k),
                            r.lambda_2k,
                            next};
    for (std::size_t j = 0; j + 1 < std::size(chain); ++j) CHECK(chain[j] <= chain[j + 1] + kChainSlack);
    for (double res : r.residuals) CHECK(res <= 1e-8);
  }
}

double second_difference(const PotentialSpec& spec, double x) {
  const double h = 1e-3;
  auto d = [&](double l) { return discriminant(spec, l); };
  return (-d(x + 2 * h) + 16 * d(x + h) - 30 * d(x) + 16 * d(x - h) - d(x - 2 * h)) / (12 * h * h);
}

}  // namespace

TEST_CASE("free system edges") {
  const auto t = band_edges(PotentialSpec::zero(), -3, 3);
  REQUIRE(t.rows.size() == 7);
  for (const auto& r : t.rows) {
    CHECK(r.lambda_2k_minus_1 == doctest::Approx(2.0 * r.k).epsilon(1e-9));
    CHECK(r.lambda_2k == doctest::Approx(2.0 * r.k).epsilon(1e-9));
    CHECK(r.lambda_p_2k_minus_1 == doctest::Approx(2.0 * r.k - 1).epsilon(1e-9));
    CHECK(r.lambda_p_2k == doctest::Approx(2.0 * r.k - 1).epsilon(1e-9));
  }
  CHECK(t.lambda_p_next == doctest::Approx(7.0));
  check_chain(t);
  for (const auto& g : instability_intervals(t)) CHECK(g.width == 0.0);
}

TEST_CASE("scalar potential edges shift by the mean") {
  const auto s = PotentialSpec::scalar(ScalarFunction::trig(0.6, {1.0}, {0.5}));
  const auto t = band_edges(s, -2, 2);
  for (const auto& r : t.rows) {
    CHECK(std::abs(r.lambda_2k_minus_1 - (2.0 * r.k + 0.6)) <= 1e-8);
    CHECK(std::abs(r.lambda_2k - (2.0 * r.k + 0.6)) <= 1e-8);
    CHECK(std::abs(r.lambda_p_2k_minus_1 - (2.0 * r.k - 0.4)) <= 1e-8);
    CHECK(std::abs(r.lambda_p_2k - (2.0 * r.k - 0.4)) <= 1e-8);
  }
  for (const auto& g : instability_intervals(t)) CHECK(g.width <= 1e-8);
}

TEST_CASE("off-diagonal constant: single open gap") {
  const auto t = band_edges(sigma1(), -2, 2);
  check_chain(t);
  const auto& r0 = t.rows[2];
  REQUIRE(r0.k == 0);
  CHECK(r0.lambda_2k_minus_1 == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r0.lambda_2k == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r0.lambda_p_2k_minus_1 == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-6));
  CHECK(t.rows[3].lambda_2k == doctest::Approx(std::sqrt(5.0)).epsilon(1e-6));
  CHECK(t.rows[3].lambda_p_2k == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  for (const auto& g : instability_intervals(t)) {
    if (g.j == 0) {
      CHECK(g.width == doctest::Approx(2.0).epsilon(1e-6));
      CHECK(g.parity == EdgeParity::Periodic);
    } else {
      CHECK(g.width <= kCollapsedWidth);
    }
  }
}

TEST_CASE("interval ordering and parity tags") {
  const auto iv = instability_intervals(band_edges(PotentialSpec::zero(), -1, 1));
  REQUIRE(iv.size() == 6);
  for (std::size_t i = 0; i < iv.size(); ++i) {
    CHECK(iv[i].j == -3 + static_cast<long>(i));
    CHECK(iv[i].parity == (iv[i].j % 2 == 0 ? EdgeParity::Periodic : EdgeParity::Antiperiodic));
    CHECK(iv[i].hi - iv[i].lo == iv[i].width);
  }
  CHECK(std::string(to_string(EdgeParity::Antiperiodic)) == "antiperiodic");
}

TEST_CASE("random potentials: chain, residuals and the boundary property") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto p = random_potential(seed);
    const auto t = band_edges(p, -2, 2);
    check_chain(t);
    for (const auto& g : instability_intervals(t)) {
      const double eps = 1e-4 * std::max(1.0, std::abs(g.lo));
      CHECK(std::abs(discriminant(p, g.lo - eps)) < 2.0);
      CHECK(std::abs(discriminant(p, g.hi + eps)) < 2.0);
      if (g.width > 2 * eps) {
        CHECK(std::abs(discriminant(p, g.lo + eps)) >= 2 - 1e-10);
        CHECK(std::abs(discriminant(p, g.hi - eps)) >= 2 - 1e-10);
        for (int i = 0; i <= 15; ++i) {
          CHECK(std::abs(discriminant(p, g.lo + g.width * i / 15.0)) >= 2 - 1e-8);
        }
      }
    }
  }
}

TEST_CASE("collapsed gaps are double eigenvalues") {
  CHECK(detect_double(PotentialSpec::zero(), 2.0, +1, 1e-8));
  CHECK(detect_double(PotentialSpec::zero(), 1.0, -1, 1e-8));
  CHECK_FALSE(detect_double(PotentialSpec::zero(), 1.0, +1, 1e-8));
  CHECK_FALSE(detect_double(sigma1(), 1.0, +1, 1e-6));
  const auto s = PotentialSpec::scalar(ScalarFunction::constant(0.3));
  CHECK(detect_double(s, 2.3, +1, 1e-8));

  const std::vector<PotentialSpec> specs{PotentialSpec::zero(), s, sigma1()};
  for (const auto& spec : specs) {
    for (const auto& g : instability_intervals(band_edges(spec, -2, 2))) {
      if (g.width > kCollapsedWidth) continue;
      const int parity = g.parity == EdgeParity::Periodic ? 1 : -1;
      CHECK(detect_double(spec, g.lo, parity, 1e-6));
      const double d2 = second_difference(spec, g.lo);
      CHECK(-parity * d2 > 0);
      CHECK(std::abs(d2) >= 1e-3);
    }
  }
}

TEST_CASE("gap classification is stable under tighter tolerances") {
  for (std::uint64_t seed : {2u, 7u}) {
    const auto p = random_potential(seed);
    IntegratorOptions tight;
    tight.rel_tol *= 0.5;
    tight.abs_tol *= 0.5;
    const auto a = instability_intervals(band_edges(p, -2, 2));
    const auto b = instability_intervals(band_edges(p, -2, 2, tight));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i].width > kCollapsedWidth) == (b[i].width > kCollapsedWidth));
  }
}

TEST_CASE("serial and parallel tables agree") {
  const auto p = random_potential(3);
  const auto a = band_edges(p, -1, 1, {}, Exec::Serial);
  const auto b = band_edges(p, -1, 1, {}, Exec::Parallel);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].lambda_2k == b.rows[i].lambda_2k);
    CHECK(a.rows[i].lambda_p_2k_minus_1 == b.rows[i].lambda_p_2k_minus_1);
  }
}

TEST_CASE("invalid range") { CHECK_THROWS_AS(band_edges(PotentialSpec::zero(), 2, 1), ConfigError); }

TEST_CASE("shift extrema") {
  SUBCASE("scalar potential: flat curves") {
    const auto s = PotentialSpec::scalar(ScalarFunction::trig(0.2, {0.5}, {}));
    const auto rep = verify_shift_extrema(s, -1, 1, 8);
    CHECK(rep.all_ok);
    for (const auto& r : rep.rows) CHECK(r.max_mu - r.min_mu <= 1e-8);
  }
  SUBCASE("off-diagonal constant: ground row is skipped") {
    const auto rep = verify_shift_extrema(sigma1(), 0, 0, 16);
    bool seen = false;
    for (const auto& r : rep.rows) {
      if (r.k == 0 && r.parity == EdgeParity::Periodic) {
        seen = true;
        CHECK(r.skipped);
        CHECK(std::abs(r.min_mu) <= 1e-9);
        CHECK(std::abs(r.max_mu) <= 1e-9);
        CHECK(r.edge_lo < r.min_mu);
        CHECK(r.max_mu < r.edge_hi);
        CHECK_FALSE(r.note.empty());
      }
    }
    CHECK(seen);
    CHECK(rep.all_ok);
  }
  SUBCASE("random canonical potential, k = 1") {
    const auto c = random_canonical_potential(4);
    const auto rep = verify_shift_extrema(c, 1, 1, 64);
    REQUIRE(rep.rows.size() == 2);
    for (const auto& r : rep.rows) {
      CHECK(r.ok);
      CHECK(r.continuous);
      CHECK(r.err_min <= r.tolerance);
      CHECK(r.err_max <= r.tolerance);
    }
  }
  CHECK_THROWS_AS(verify_shift_extrema(PotentialSpec::zero(), 0, 0, 1), ConfigError);
}
