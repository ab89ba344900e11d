#include "canonsys/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "canonsys/errors.hpp"

namespace canonsys {

namespace {

constexpr double kExactBelow = 1e-12;

void require_canonical(const PotentialSpec& spec) {
  if (!spec.is_canonical_form()) throw NotCanonicalForm("potential is not in canonical form");
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda == 0.0) throw ConfigError("lambda must be finite and nonzero");
}

template <class F>
Mat2 simpson(const F& f, double a, double b, std::size_t intervals) {
  const double h = (b - a) / static_cast<double>(intervals);
  Mat2 sum = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i) {
    sum += (i % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
  }
  return sum * (h / 3.0);
}

// int_0^z (q1^2 + q^2): exact through trig-poly products when possible.
double integral_q_squared(const PotentialSpec& spec, double z) {
  const ScalarFunction& a = spec.q1();
  const ScalarFunction& b = spec.q();
  auto exact = [](const ScalarFunction& f) {
    return f.kind() == ScalarFunction::Kind::Constant || f.kind() == ScalarFunction::Kind::TrigPoly;
  };
  if (exact(a) && exact(b)) {
    const TrigPoly ta = a.to_trig(), tb = b.to_trig();
    return combine(1.0, ta * ta, 1.0, tb * tb).integral_from_zero(z);
  }
  auto sq = [&](double t) {
    const double x = a(t), y = b(t);
    return Mat2{x * x + y * y, 0.0, 0.0, 0.0};
  };
  return simpson(sq, 0.0, z, 2048).a11;
}

}  // namespace

std::size_t asymptotic_nodes(double lambda, double z) {
  const double periods = std::abs(lambda) * std::abs(z) / kPi;
  std::size_t n = std::max<std::size_t>(512, static_cast<std::size_t>(std::ceil(64.0 * periods)));
  return n + (n % 2);
}

AsymptoticEvaluation asymptotic_fundamental(const PotentialSpec& spec, double lambda, double z) {
  require_canonical(spec);
  if (!spec.is_absolutely_continuous()) throw ACRequired("expansion needs Q' (sampled entries)");
  require_lambda(lambda);

  const double inv = 1.0 / (2.0 * lambda);
  const Mat2 rot = exp_j(-lambda * z);
  AsymptoticEvaluation out;
  out.lambda = lambda;
  out.z = z;
  out.leading = rot * (Mat2::identity() - spec(0.0) * inv);
  out.correction = spec(z) * rot * inv;
  auto integrand = [&](double t) {
    const Mat2 q = spec(t);
    const Mat2 kernel = kJ * (q * q) - spec.derivative(t);
    return exp_j(lambda * (t - z)) * kernel * exp_j(-lambda * t);
  };
  out.integral_term = z > 0.0 ? simpson(integrand, 0.0, z, asymptotic_nodes(lambda, z)) * inv
                              : Mat2::zero();
  out.total = out.leading + out.correction + out.integral_term;
  return out;
}

Mat2 coarse_asymptotic(const PotentialSpec& spec, double lambda, double z) {
  require_canonical(spec);
  require_lambda(lambda);
  const double inv = 1.0 / (2.0 * lambda);
  const double q2_int = integral_q_squared(spec, z);
  const Mat2 bracket = Mat2::identity() - spec(0.0) * inv + kJ * (q2_int * inv);
  return exp_j(-lambda * z) * bracket + exp_j(lambda * z) * spec(z) * inv;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(std::abs(x[i]));
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  const double den = dn * sxx - sx * sx;
  return den != 0.0 ? (dn * sxy - sx * sy) / den : 0.0;
}

DecayReport remainder_decay_check(const PotentialSpec& spec, const std::vector<double>& lambdas,
                                  const IntegratorOptions& options, Exec exec) {
  require_canonical(spec);
  if (lambdas.size() < 2) throw ConfigError("decay check needs at least two lambda values");
  for (double l : lambdas) {
    if (!(std::abs(l) >= 10.0)) throw ConfigError("decay check needs |lambda| >= 10");
  }

  DecayReport r;
  r.lambdas = lambdas;
  r.err_full.resize(lambdas.size());
  r.err_coarse.resize(lambdas.size());
  parallel_for(lambdas.size(), exec, [&](std::size_t i) {
    const double l = lambdas[i];
    const Mat2 num = monodromy(spec, l, options).a;
    r.err_full[i] = column_norm(num - asymptotic_fundamental(spec, l, kPi).total);
    r.err_coarse[i] = column_norm(num - coarse_asymptotic(spec, l, kPi));
  });

  auto all_tiny = [&](const std::vector<double>& e) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!(e[i] < kExactBelow * std::max(1.0, std::abs(lambdas[i])))) return false;
    }
    return true;
  };
  r.exact_full = all_tiny(r.err_full);
  r.exact_coarse = all_tiny(r.err_coarse);
  r.slope_full = r.exact_full ? 0.0 : loglog_slope(lambdas, r.err_full);
  r.slope_coarse = r.exact_coarse ? 0.0 : loglog_slope(lambdas, r.err_coarse);

  if (!r.exact_full) {
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double s = r.err_full[i] * lambdas[i] * lambdas[i];
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    r.scaled_spread_full = lo > 0.0 ? hi / lo : INFINITY;
  }
  r.ok_full = r.exact_full || r.slope_full <= kFullSlopeBound;
  r.ok_coarse = r.exact_coarse || r.slope_coarse <= kCoarseSlopeBound;
  return r;
}

}  // namespace canonsys
