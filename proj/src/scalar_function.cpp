#include "canonsys/scalar_function.hpp"

#include <algorithm>
#include <cmath>

#include "canonsys/errors.hpp"

namespace canonsys {

namespace {

// Accumulates trig-poly terms indexed by signed harmonic m, folding m < 0.
struct TermAccumulator {
  TrigPoly out;

  explicit TermAccumulator(std::size_t degree) {
    out.cos_coeffs.assign(degree, 0.0);
    out.sin_coeffs.assign(degree, 0.0);
  }
  void add_cos(long m, double v) {
    const auto k = static_cast<std::size_t>(std::labs(m));
    if (k == 0) {
      out.a0 += v;
    } else {
      out.cos_coeffs[k - 1] += v;
    }
  }
  void add_sin(long m, double v) {
    if (m == 0) return;
    const auto k = static_cast<std::size_t>(std::labs(m));
    out.sin_coeffs[k - 1] += (m > 0 ? v : -v);
  }
};

double wrap_period(double u) { return u - kPi * std::floor(u / kPi); }

// int_0^u of the periodic piecewise-linear interpolant through `v` (offset ignored).
double sampled_cumulative(const std::vector<double>& v, double u) {
  const std::size_t n = v.size();
  const double h = kPi / static_cast<double>(n);
  double period_sum = 0.0;
  for (double x : v) period_sum += x;
  period_sum *= h;

  const double periods = std::floor(u / kPi);
  double rest = u - periods * kPi;
  double acc = periods * period_sum;

  double cell = rest / h;
  auto i_full = static_cast<std::size_t>(std::floor(cell));
  if (i_full >= n) i_full = n - 1;
  for (std::size_t i = 0; i < i_full; ++i) acc += 0.5 * h * (v[i] + v[(i + 1) % n]);
  const double frac = cell - static_cast<double>(i_full);
  const double v0 = v[i_full];
  const double v1 = v[(i_full + 1) % n];
  acc += h * frac * (v0 + 0.5 * frac * (v1 - v0));
  return acc;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / static_cast<double>(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

// ---------------------------------------------------------------- TrigPoly

std::size_t TrigPoly::degree() const { return std::max(cos_coeffs.size(), sin_coeffs.size()); }

double TrigPoly::operator()(double z) const {
  const std::size_t deg = degree();
  if (deg == 0) return a0;
  const double c1 = std::cos(2.0 * z), s1 = std::sin(2.0 * z);
  double ck = c1, sk = s1, acc = a0;
  for (std::size_t k = 0; k < deg; ++k) {
    if (k < cos_coeffs.size()) acc += cos_coeffs[k] * ck;
    if (k < sin_coeffs.size()) acc += sin_coeffs[k] * sk;
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
  }
  return acc;
}

double TrigPoly::derivative(double z) const {
  const std::size_t deg = degree();
  if (deg == 0) return 0.0;
  const double c1 = std::cos(2.0 * z), s1 = std::sin(2.0 * z);
  double ck = c1, sk = s1, acc = 0.0;
  for (std::size_t k = 0; k < deg; ++k) {
    const double w = 2.0 * static_cast<double>(k + 1);
    if (k < cos_coeffs.size()) acc -= w * cos_coeffs[k] * sk;
    if (k < sin_coeffs.size()) acc += w * sin_coeffs[k] * ck;
    const double cn = ck * c1 - sk * s1;
    sk = sk * c1 + ck * s1;
    ck = cn;
  }
  return acc;
}

TrigPoly TrigPoly::shifted(double tau) const {
  TrigPoly out;
  out.a0 = a0;
  const std::size_t deg = degree();
  out.cos_coeffs.assign(deg, 0.0);
  out.sin_coeffs.assign(deg, 0.0);
  for (std::size_t k = 0; k < deg; ++k) {
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k < sin_coeffs.size() ? sin_coeffs[k] : 0.0;
    const double ang = 2.0 * static_cast<double>(k + 1) * tau;
    const double c = std::cos(ang), s = std::sin(ang);
    out.cos_coeffs[k] = a * c + b * s;
    out.sin_coeffs[k] = b * c - a * s;
  }
  return out;
}

TrigPoly TrigPoly::periodic_antiderivative() const {
  TrigPoly g;
  const std::size_t deg = degree();
  g.cos_coeffs.assign(deg, 0.0);
  g.sin_coeffs.assign(deg, 0.0);
  for (std::size_t k = 0; k < deg; ++k) {
    const double w = 2.0 * static_cast<double>(k + 1);
    const double a = k < cos_coeffs.size() ? cos_coeffs[k] : 0.0;
    const double b = k < sin_coeffs.size() ? sin_coeffs[k] : 0.0;
    g.sin_coeffs[k] = a / w;
    g.cos_coeffs[k] = -b / w;
    g.a0 += b / w;
  }
  return g;
}

double TrigPoly::integral_from_zero(double z) const {
  return a0 * z + periodic_antiderivative()(z);
}

TrigPoly operator*(const TrigPoly& f, const TrigPoly& g) {
  const std::size_t df = f.degree(), dg = g.degree();
  TermAccumulator acc(df + dg);
  auto coef = [](const std::vector<double>& v, std::size_t k) {
    return k < v.size() ? v[k] : 0.0;
  };
  // Index 0 carries the constant term; cos/sin arrays are shifted by one.
  for (std::size_t i = 0; i <= df; ++i) {
    const double fc = i == 0 ? f.a0 : coef(f.cos_coeffs, i - 1);
    const double fs = i == 0 ? 0.0 : coef(f.sin_coeffs, i - 1);
    for (std::size_t j = 0; j <= dg; ++j) {
      const double gc = j == 0 ? g.a0 : coef(g.cos_coeffs, j - 1);
      const double gs = j == 0 ? 0.0 : coef(g.sin_coeffs, j - 1);
      const long k = static_cast<long>(i), m = static_cast<long>(j);
      // C_k C_m, S_k S_m, C_k S_m, S_k C_m via product-to-sum.
      acc.add_cos(k - m, 0.5 * fc * gc);
      acc.add_cos(k + m, 0.5 * fc * gc);
      acc.add_cos(k - m, 0.5 * fs * gs);
      acc.add_cos(k + m, -0.5 * fs * gs);
      acc.add_sin(k + m, 0.5 * fc * gs);
      acc.add_sin(k - m, -0.5 * fc * gs);
      acc.add_sin(k + m, 0.5 * fs * gc);
      acc.add_sin(k - m, 0.5 * fs * gc);
    }
  }
  return acc.out;
}

TrigPoly combine(double alpha, const TrigPoly& f, double beta, const TrigPoly& g) {
  TrigPoly out;
  out.a0 = alpha * f.a0 + beta * g.a0;
  const std::size_t deg = std::max(f.degree(), g.degree());
  out.cos_coeffs.assign(deg, 0.0);
  out.sin_coeffs.assign(deg, 0.0);
  for (std::size_t k = 0; k < deg; ++k) {
    const double fa = k < f.cos_coeffs.size() ? f.cos_coeffs[k] : 0.0;
    const double fb = k < f.sin_coeffs.size() ? f.sin_coeffs[k] : 0.0;
    const double ga = k < g.cos_coeffs.size() ? g.cos_coeffs[k] : 0.0;
    const double gb = k < g.sin_coeffs.size() ? g.sin_coeffs[k] : 0.0;
    out.cos_coeffs[k] = alpha * fa + beta * ga;
    out.sin_coeffs[k] = alpha * fb + beta * gb;
  }
  return out;
}

// ------------------------------------------------------------- SampledGrid

double SampledGrid::operator()(double z) const {
  const std::size_t n = values.size();
  const double u = wrap_period(z + offset) * static_cast<double>(n) / kPi;
  auto i = static_cast<std::size_t>(std::floor(u));
  if (i >= n) i = n - 1;
  const double frac = u - static_cast<double>(i);
  const double v0 = values[i];
  const double v1 = values[(i + 1) % n];
  return v0 + frac * (v1 - v0);
}

// ---------------------------------------------------------- ScalarFunction

ScalarFunction ScalarFunction::constant(double c) { return ScalarFunction(c); }

ScalarFunction ScalarFunction::trig(TrigPoly p) { return ScalarFunction(std::move(p)); }

ScalarFunction ScalarFunction::trig(double a0, std::vector<double> cos_coeffs,
                                    std::vector<double> sin_coeffs) {
  return trig(TrigPoly{a0, std::move(cos_coeffs), std::move(sin_coeffs)});
}

ScalarFunction ScalarFunction::samples(std::vector<double> values, double offset) {
  if (values.size() < 2) throw ConfigError("sampled function needs at least 2 values");
  return ScalarFunction(SampledGrid{std::move(values), wrap_period(offset)});
}

ScalarFunction ScalarFunction::composed(std::function<double(double)> value,
                                        std::function<double(double)> slope) {
  return ScalarFunction(std::make_shared<const ComposedFunction>(
      ComposedFunction{std::move(value), std::move(slope)}));
}

ScalarFunction::Kind ScalarFunction::kind() const {
  switch (rep_.index()) {
    case 0: return Kind::Constant;
    case 1: return Kind::TrigPoly;
    case 2: return Kind::Samples;
    default: return Kind::Composed;
  }
}

double ScalarFunction::operator()(double z) const {
  return std::visit(
      [z](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, double>) {
          return r;
        } else if constexpr (std::is_same_v<T, std::shared_ptr<const ComposedFunction>>) {
          return r->value(z);
        } else {
          return r(z);
        }
      },
      rep_);
}

double ScalarFunction::derivative(double z) const {
  switch (kind()) {
    case Kind::Constant: return 0.0;
    case Kind::TrigPoly: return std::get<TrigPoly>(rep_).derivative(z);
    case Kind::Composed:
      return std::get<std::shared_ptr<const ComposedFunction>>(rep_)->slope(z);
    case Kind::Samples: break;
  }
  throw ACRequired("derivative requested of a sampled (non-AC) function");
}

ScalarFunction ScalarFunction::shifted(double tau) const {
  switch (kind()) {
    case Kind::Constant: return *this;
    case Kind::TrigPoly: return trig(std::get<TrigPoly>(rep_).shifted(tau));
    case Kind::Samples: {
      const auto& s = std::get<SampledGrid>(rep_);
      return samples(s.values, s.offset + tau);
    }
    case Kind::Composed: break;
  }
  auto base = std::get<std::shared_ptr<const ComposedFunction>>(rep_);
  return composed([base, tau](double z) { return base->value(z + tau); },
                  [base, tau](double z) { return base->slope(z + tau); });
}

double ScalarFunction::mean() const {
  switch (kind()) {
    case Kind::Constant: return constant_value();
    case Kind::TrigPoly: return std::get<TrigPoly>(rep_).a0;
    case Kind::Samples: {
      const auto& v = std::get<SampledGrid>(rep_).values;
      double s = 0.0;
      for (double x : v) s += x;
      return s / static_cast<double>(v.size());
    }
    case Kind::Composed: break;
  }
  return integral_from_zero(kPi) / kPi;
}

double ScalarFunction::integral_from_zero(double z) const {
  switch (kind()) {
    case Kind::Constant: return constant_value() * z;
    case Kind::TrigPoly: return std::get<TrigPoly>(rep_).integral_from_zero(z);
    case Kind::Samples: {
      const auto& s = std::get<SampledGrid>(rep_);
      return sampled_cumulative(s.values, z + s.offset) - sampled_cumulative(s.values, s.offset);
    }
    case Kind::Composed: break;
  }
  const auto& f = *std::get<std::shared_ptr<const ComposedFunction>>(rep_);
  const auto n = static_cast<std::size_t>(std::max(64.0, std::ceil(4096.0 * std::abs(z) / kPi)));
  return simpson(f.value, 0.0, z, n);
}

TrigPoly ScalarFunction::to_trig() const {
  if (kind() == Kind::Constant) return TrigPoly{constant_value(), {}, {}};
  if (kind() == Kind::TrigPoly) return std::get<TrigPoly>(rep_);
  throw ACRequired("function has no trigonometric-polynomial form");
}

ScalarFunction combine(double alpha, const ScalarFunction& f, double beta,
                       const ScalarFunction& g) {
  using Kind = ScalarFunction::Kind;
  const Kind kf = f.kind(), kg = g.kind();
  auto is_trig_like = [](Kind k) { return k == Kind::Constant || k == Kind::TrigPoly; };

  if (kf == Kind::Constant && kg == Kind::Constant) {
    return ScalarFunction::constant(alpha * f.constant_value() + beta * g.constant_value());
  }
  if (is_trig_like(kf) && is_trig_like(kg)) {
    return ScalarFunction::trig(combine(alpha, f.to_trig(), beta, g.to_trig()));
  }
  if (kf != Kind::Composed && kg != Kind::Composed &&
      (kf == Kind::Samples || kg == Kind::Samples)) {
    // Land on the grid of the sampled operand.
    const SampledGrid& grid = kf == Kind::Samples ? *f.as_samples() : *g.as_samples();
    const std::size_t n = grid.values.size();
    const bool f_on_grid = kf == Kind::Samples && f.as_samples()->values.size() == n &&
                           f.as_samples()->offset == grid.offset;
    const bool g_on_grid = kg == Kind::Samples && g.as_samples()->values.size() == n &&
                           g.as_samples()->offset == grid.offset;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = kPi * static_cast<double>(i) / static_cast<double>(n);
      const double fv = f_on_grid ? f.as_samples()->values[i] : f(z - grid.offset);
      const double gv = g_on_grid ? g.as_samples()->values[i] : g(z - grid.offset);
      out[i] = alpha * fv + beta * gv;
    }
    return ScalarFunction::samples(std::move(out), grid.offset);
  }
  return ScalarFunction::composed(
      [=](double z) { return alpha * f(z) + beta * g(z); },
      [=](double z) { return alpha * f.derivative(z) + beta * g.derivative(z); });
}

bool operator==(const ScalarFunction& a, const ScalarFunction& b) { return a.rep_ == b.rep_; }

std::vector<double> check_grid(std::size_t n) {
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = kPi * static_cast<double>(i) / static_cast<double>(n);
  return z;
}

}  // namespace canonsys
