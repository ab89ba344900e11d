#include <cmath>

#include "doctest.h"
#include "oracles.hpp"

#include "canonsys/errors.hpp"
#include "canonsys/inverse.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/sweep.hpp"

using namespace canonsys;

namespace {

PotentialSpec sigma1() { return PotentialSpec::constant(0.0, 0.0, 1.0); }

PotentialSpec scalar(ScalarFunction p) { return PotentialSpec::scalar(std::move(p)); }

std::vector<ScalarFunction> scalar_specimens() {
  return {ScalarFunction::constant(0.0), ScalarFunction::constant(2.0), ScalarFunction::trig(1.0, {1.0}, {}),
          ScalarFunction::trig(-0.3, {0.4, 0.2}, {0.7}), ScalarFunction::trig(0.0, {0.0, 0.0, 0.5}, {-0.6})};
}

}  // namespace

TEST_CASE("potential classes") {
  CHECK(classify_potential(scalar(ScalarFunction::constant(3.0))) == PotentialClass::ScalarIdentity);
  CHECK(classify_potential(sigma1()) == PotentialClass::CanonicalForm);
  CHECK(classify_potential(random_potential(1)) == PotentialClass::General);
  CHECK(std::string(to_string(PotentialClass::CanonicalForm)) == "CanonicalForm");
}

TEST_CASE("gap-vanishing reports") {
  const auto a = gap_vanishing_report(scalar(ScalarFunction::trig(1.0, {1.0}, {})), 4, 1e-6);
  CHECK(a.verdict == GapVerdict::AllVanish);
  CHECK(a.max_width <= 1e-6);
  CHECK(a.gaps.size() == 18);
  CHECK(a.potential_class == PotentialClass::ScalarIdentity);

  const auto b = gap_vanishing_report(sigma1(), 4, 1e-6);
  CHECK(b.verdict == GapVerdict::GapFound);
  CHECK(b.gap_index == 0);
  CHECK(b.gap_width == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(b.gap_width > b.tol);

  const auto c = gap_vanishing_report(PotentialSpec::zero(), 2, 1e-6);
  CHECK(c.verdict == GapVerdict::AllVanish);
  CHECK(c.max_width <= 1e-10);

  CHECK_THROWS_AS(gap_vanishing_report(PotentialSpec::zero(), 0, 1e-6), ConfigError);
}

TEST_CASE("forward direction") {
  SUBCASE("constant 2") {
    const auto f = forward_check(scalar(ScalarFunction::constant(2.0)), 3, 1e-6);
    CHECK(f.shift_constant == 2.0);
    for (const auto& g : f.report.gaps) CHECK(g.lo == doctest::Approx(g.j + 2.0).epsilon(1e-9));
    CHECK(f.doubles_checked == 2 * f.report.gaps.size());
  }
  SUBCASE("cosine") {
    const auto f = forward_check(scalar(ScalarFunction::trig(0.0, {1.0}, {})), 3, 1e-6);
    CHECK(std::abs(f.shift_constant) <= 1e-15);
    CHECK(f.max_edge_error <= kEdgeTol);
  }
  SUBCASE("zero") {
    const auto f = forward_check(PotentialSpec::zero(), 3, 1e-6);
    for (const auto& g : f.report.gaps) CHECK(g.hi == doctest::Approx(static_cast<double>(g.j)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(forward_check(sigma1(), 2, 1e-6), ConfigError);
}

TEST_CASE("contrapositive direction") {
  CHECK(contrapositive_check(sigma1(), 3, 1e-6).verdict == ContrapositiveVerdict::CertifiedNotScalarIdentity);
  for (const auto& p : scalar_specimens()) {
    const auto s = scalar(p);
    CHECK(is_scalar_identity(s, 1e-9));
    CHECK(contrapositive_check(s, 2, 1e-6).verdict == ContrapositiveVerdict::ConsistentWithScalarIdentityUpToN);
  }
  const auto c = PotentialSpec::canonical(ScalarFunction::trig(0.0, {0.5}, {}), ScalarFunction::constant(0.0));
  const auto r = contrapositive_check(c, 8, 1e-6);
  if (r.verdict == ContrapositiveVerdict::CertifiedNotScalarIdentity) {
    CHECK(r.report.gap_width > 1e-6);
  } else {
    MESSAGE("no gap above tol up to N = 8; max width " << r.report.max_width);
  }
}

TEST_CASE("closed forms") {
  CHECK(std::abs(closed_form_discriminant_scalar(ScalarFunction::constant(0.0), 0.5)) <= 1e-15);
  CHECK(closed_form_discriminant_scalar(ScalarFunction::trig(1.0, {0.3}, {0.2}), 0.0) == doctest::Approx(-2.0));
  CHECK(closed_form_discriminant_scalar(ScalarFunction::constant(2.0), 2.0) == doctest::Approx(2.0));
  for (double l : {-3.0, -0.5, 0.0, 0.99, 1.5, 4.0}) {
    CHECK(free_dirac_discriminant(1.0, l) == doctest::Approx(oracle::dirac_delta(1.0, l)).epsilon(1e-13));
  }
  const auto p = ScalarFunction::trig(0.3, {0.5}, {-0.2});
  for (double z : {0.4, 1.9, kPi}) {
    const Mat2 want = oracle::scalar_fundamental([&](double t) { return p(t); }, 1.7, z);
    CHECK(max_abs(scalar_fundamental_closed_form(p, 1.7, z) - want) <= 1e-12);
  }
}

TEST_CASE("scalar closed form agrees with integration") {
  for (const auto& p : scalar_specimens()) {
    const auto s = scalar(p);
    for (double l : linspace(-6.0, 6.0, 32)) {
      CHECK(std::abs(discriminant(s, l) - closed_form_discriminant_scalar(p, l)) <= 1e-8);
    }
    for (double l : {-2.2, 0.7, 3.9}) {
      CHECK(max_abs(monodromy(s, l).a - scalar_fundamental_closed_form(p, l, kPi)) <= 1e-8);
    }
  }
}

TEST_CASE("oracle residual report") {
  const auto s = oracle_residuals(scalar(ScalarFunction::trig(1.0, {1.0}, {})));
  REQUIRE(s.size() == 1);
  CHECK(s[0].name == "scalar_closed_form");
  CHECK(s[0].samples == 16);
  CHECK(s[0].max_residual <= 1e-8);
  const auto d = oracle_residuals(PotentialSpec::canonical(ScalarFunction::constant(0.6), ScalarFunction::constant(0.8)));
  REQUIRE(d.size() == 1);
  CHECK(d[0].name == "free_dirac");
  CHECK(d[0].max_residual <= 1e-8);
  CHECK(oracle_residuals(PotentialSpec::zero()).size() == 2);
  CHECK(oracle_residuals(random_potential(1)).empty());
}

TEST_CASE("trace split preserves gaps up to the shift") {
  for (std::uint64_t seed : {1u, 4u}) {
    const auto p = random_potential(seed);
    const auto ts = trace_split(p);
    const auto a = instability_intervals(band_edges(p, -2, 2));
    const auto b = instability_intervals(band_edges(ts.tilde, -2, 2));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(std::abs(a[i].width - b[i].width) <= 1e-7);
      CHECK(std::abs(a[i].lo - ts.shift_constant - b[i].lo) <= 1e-7);
    }
  }
}

TEST_CASE("certificates are never issued for scalar potentials") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 4; ++i) {
    const auto s = scalar(ScalarFunction::trig(random_trig_poly(rng, 2)));
    REQUIRE(is_scalar_identity(s, 1e-9));
    CHECK(contrapositive_check(s, 1, 1e-6).verdict != ContrapositiveVerdict::CertifiedNotScalarIdentity);
  }
}
