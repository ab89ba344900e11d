#include "canonsys/prufer.hpp"

#include <algorithm>
#include <cmath>

#include "canonsys/errors.hpp"
#include "canonsys/ode.hpp"

namespace canonsys {

namespace {

constexpr double kBisectWidth = 1e-6;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxDoublings = 64;

struct AngleRhs {
  const PotentialSpec& spec;
  double lambda;

  void operator()(double z, const ode::State<1>& y, ode::State<1>& dy) const {
    const double t = y[0];
    const double c = std::cos(t), s = std::sin(t);
    dy[0] = lambda - spec.q()(z) * 2.0 * s * c - spec.q1()(z) * c * c - spec.q2()(z) * s * s;
  }
};

struct NoPost {
  void operator()(double, ode::State<1>&) const {}
};

// Root of an increasing function F(lambda) = theta(pi, lambda) - target:
// outward doubling bracket, bisection to kBisectWidth, secant polish.
template <class F>
std::pair<double, double> solve_increasing(const F& f, double center) {
  double lo = center - 1.0, hi = center + 1.0;
  double flo = f(lo), fhi = f(hi);
  double width = 1.0;
  int doublings = 0;
  while (flo > 0.0) {
    if (++doublings > kMaxDoublings) throw BracketFailure("lower bracket not found");
    hi = lo;
    fhi = flo;
    width *= 2.0;
    lo -= width;
    flo = f(lo);
  }
  while (fhi < 0.0) {
    if (++doublings > kMaxDoublings) throw BracketFailure("upper bracket not found");
    lo = hi;
    flo = fhi;
    width *= 2.0;
    hi += width;
    fhi = f(hi);
  }
  if (flo == 0.0) return {lo, 0.0};
  if (fhi == 0.0) return {hi, 0.0};

  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return {mid, 0.0};
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  double best = std::abs(flo) < std::abs(fhi) ? lo : hi;
  double best_res = std::min(std::abs(flo), std::abs(fhi));
  double x0 = lo, f0 = flo, x1 = hi, f1 = fhi;
  for (int it = 0; it < 60 && best_res > kResidualTol; ++it) {
    double x = (f1 != f0) ? x1 - f1 * (x1 - x0) / (f1 - f0) : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) < best_res) {
      best = x;
      best_res = std::abs(fx);
    }
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) break;
  }
  return {best, best_res};
}

}  // namespace

const char* to_string(DirichletKind k) { return k == DirichletKind::Mu ? "mu" : "nu"; }

AngleSolution integrate_angle(const PotentialSpec& spec, double lambda, double gamma,
                              const IntegratorOptions& options) {
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
  if (!(gamma >= 0.0 && gamma < kPi)) throw ConfigError("gamma must lie in [0, pi)");
  AngleRhs rhs{spec, lambda};
  ode::StepControl ctl;
  ctl.rel_tol = options.rel_tol;
  ctl.abs_tol = options.abs_tol;
  ctl.initial_step = initial_step(lambda);
  ctl.max_step = kPi / 8.0;
  ctl.max_steps = options.max_steps;
  double h = ctl.initial_step;
  const ode::State<1> end = ode::integrate_adaptive<1>(rhs, 0.0, kPi, ode::State<1>{gamma}, ctl, h, NoPost{});
  AngleSolution out;
  out.lambda = lambda;
  out.gamma = gamma;
  out.theta_end = end[0];
  out.winding_hint = static_cast<long>(std::floor(end[0] / kPi));
  return out;
}

DirichletEigenvalue find_dirichlet(const PotentialSpec& spec, long n, DirichletKind kind,
                                   const IntegratorOptions& options) {
  const double gamma = kind == DirichletKind::Mu ? 0.0 : kPi / 2.0;
  const double target = static_cast<double>(n) * kPi + gamma;
  auto f = [&](double lambda) { return integrate_angle(spec, lambda, gamma, options).theta_end - target; };
  const auto [value, residual] = solve_increasing(f, static_cast<double>(n));
  return {n, kind, value, residual};
}

DirichletEigenvalue find_mu(const PotentialSpec& spec, long n, const IntegratorOptions& options) {
  return find_dirichlet(spec, n, DirichletKind::Mu, options);
}

DirichletEigenvalue find_nu(const PotentialSpec& spec, long n, const IntegratorOptions& options) {
  return find_dirichlet(spec, n, DirichletKind::Nu, options);
}

std::vector<DirichletEigenvalue> dirichlet_eigenvalues(const PotentialSpec& spec, DirichletKind kind,
                                                       long n_min, long n_max,
                                                       const IntegratorOptions& options, Exec exec) {
  if (n_max < n_min) return {};
  std::vector<DirichletEigenvalue> out(static_cast<std::size_t>(n_max - n_min + 1));
  parallel_for(out.size(), exec, [&](std::size_t i) {
    out[i] = find_dirichlet(spec, n_min + static_cast<long>(i), kind, options);
  });
  return out;
}

std::vector<DirichletEigenvalue> dirichlet_eigenvalues_serial(const PotentialSpec& spec,
                                                              DirichletKind kind, long n_min,
                                                              long n_max,
                                                              const IntegratorOptions& options) {
  std::vector<DirichletEigenvalue> out;
  for (long n = n_min; n <= n_max; ++n) out.push_back(find_dirichlet(spec, n, kind, options));
  return out;
}

namespace {

void assess_continuity(MuCurve& curve) {
  const auto& p = curve.points;
  if (p.size() < 2) return;
  std::vector<double> slopes;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double dt = p[i + 1].tau - p[i].tau;
    if (dt > 0.0) slopes.push_back(std::abs(p[i + 1].mu - p[i].mu) / dt);
  }
  if (slopes.empty()) return;
  curve.slope_bound = *std::max_element(slopes.begin(), slopes.end());
  std::vector<double> sorted = slopes;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double typical = std::max(1.0, sorted[sorted.size() / 2]);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const double dt = p[i + 1].tau - p[i].tau;
    if (std::abs(p[i + 1].mu - p[i].mu) > 10.0 * dt * typical + 1e-9) curve.continuous = false;
  }
}

}  // namespace

MuCurve shifted_mu_curve(const PotentialSpec& spec, long n, const std::vector<double>& taus,
                         const IntegratorOptions& options, Exec exec) {
  MuCurve curve;
  curve.n = n;
  curve.points.resize(taus.size());
  parallel_for(taus.size(), exec, [&](std::size_t i) {
    curve.points[i] = {taus[i], find_mu(shift(spec, taus[i]), n, options).value};
  });
  assess_continuity(curve);
  return curve;
}

MuCurve shifted_mu_curve_serial(const PotentialSpec& spec, long n, const std::vector<double>& taus,
                                const IntegratorOptions& options) {
  MuCurve curve;
  curve.n = n;
  for (double tau : taus) curve.points.push_back({tau, find_mu(shift(spec, tau), n, options).value});
  assess_continuity(curve);
  return curve;
}

std::vector<double> tau_grid(std::size_t k) { return check_grid(k); }

}  // namespace canonsys
