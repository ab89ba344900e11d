#include "canonsys/monodromy.hpp"

#include <algorithm>
#include <cmath>

#include "canonsys/errors.hpp"
#include "canonsys/ode.hpp"

namespace canonsys {

namespace {

using ode::State;

State<4> pack(const Mat2& m) { return {m.a11, m.a12, m.a21, m.a22}; }
Mat2 unpack(const double* s) { return {s[0], s[1], s[2], s[3]}; }

// Y' = -J(lambda I - Q) Y = M Y with M = [[q, q2 - lambda], [lambda - q1, -q]].
// With N = 7 the extra states accumulate the Gram integrals of the columns.
template <std::size_t N>
struct FundamentalRhs {
  const PotentialSpec& spec;
  double lambda;

  void operator()(double z, const State<N>& y, State<N>& dy) const {
    const double q1 = spec.q1()(z), q2 = spec.q2()(z), q = spec.q()(z);
    const double m11 = q, m12 = q2 - lambda, m21 = lambda - q1, m22 = -q;
    dy[0] = m11 * y[0] + m12 * y[2];
    dy[1] = m11 * y[1] + m12 * y[3];
    dy[2] = m21 * y[0] + m22 * y[2];
    dy[3] = m21 * y[1] + m22 * y[3];
    if constexpr (N == 7) {
      dy[4] = y[0] * y[0] + y[2] * y[2];
      dy[5] = y[0] * y[1] + y[2] * y[3];
      dy[6] = y[1] * y[1] + y[3] * y[3];
    }
  }
};

// Keeps det Y = 1 by dividing the matrix block by sqrt(det).
struct Renormalize {
  double* raw_drift = nullptr;

  template <std::size_t N>
  void operator()(double, State<N>& y) const {
    const double d = y[0] * y[3] - y[1] * y[2];
    if (raw_drift != nullptr) *raw_drift = std::max(*raw_drift, std::abs(d - 1.0));
    if (d > 0.0) {
      const double s = 1.0 / std::sqrt(d);
      for (std::size_t i = 0; i < 4; ++i) y[i] *= s;
    }
  }
};

ode::StepControl control(const IntegratorOptions& o, double lambda) {
  ode::StepControl c;
  c.rel_tol = o.rel_tol;
  c.abs_tol = o.abs_tol;
  c.initial_step = initial_step(lambda);
  c.max_step = kPi / 8.0;
  c.max_steps = o.max_steps;
  return c;
}

void check_lambda(double lambda) {
  if (!std::isfinite(lambda)) throw ConfigError("lambda must be finite");
}

struct GramRun {
  Monodromy m;
  GramIntegrals gram;
  std::vector<double> mesh;
};

GramRun monodromy_with_gram(const PotentialSpec& spec, double lambda,
                            const IntegratorOptions& options) {
  check_lambda(lambda);
  FundamentalRhs<7> rhs{spec, lambda};
  const ode::StepControl ctl = control(options, lambda);
  double h = ctl.initial_step;
  GramRun run;
  State<7> y{1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0};
  y = ode::integrate_adaptive<7>(rhs, 0.0, kPi, y, ctl, h, Renormalize{}, &run.mesh);
  run.m.lambda = lambda;
  run.m.a = unpack(y.data());
  run.m.delta = run.m.a.trace();
  run.gram = {y[4], y[5], y[6]};
  return run;
}

double delta_on_mesh(const PotentialSpec& spec, double lambda, const std::vector<double>& mesh) {
  FundamentalRhs<4> rhs{spec, lambda};
  State<4> y = ode::integrate_on_mesh<4>(rhs, 0.0, mesh, pack(Mat2::identity()), Renormalize{});
  return y[0] + y[3];
}

Mat2 propagate(const PotentialSpec& spec, double lambda, double z0, double z1, const Mat2& y0,
               const IntegratorOptions& options) {
  if (z1 <= z0) return y0;
  FundamentalRhs<4> rhs{spec, lambda};
  const ode::StepControl ctl = control(options, lambda);
  double h = std::min(ctl.initial_step, z1 - z0);
  return unpack(ode::integrate_adaptive<4>(rhs, z0, z1, pack(y0), ctl, h, Renormalize{}).data());
}

}  // namespace

double initial_step(double lambda) {
  return std::min(kPi / 64.0, 1.0 / (4.0 * (1.0 + std::abs(lambda))));
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Stable: return "stable";
    case Stability::Unstable: return "unstable";
    case Stability::Boundary: return "boundary";
  }
  return "unknown";
}

FundamentalTrajectory integrate_fundamental(const PotentialSpec& spec, double lambda,
                                            const IntegratorOptions& options) {
  check_lambda(lambda);
  const std::size_t intervals = std::max<std::size_t>(1, options.trajectory_intervals);
  FundamentalRhs<4> rhs{spec, lambda};
  const ode::StepControl ctl = control(options, lambda);

  FundamentalTrajectory traj;
  traj.lambda = lambda;
  traj.z_nodes.reserve(intervals + 1);
  traj.matrices.reserve(intervals + 1);
  traj.z_nodes.push_back(0.0);
  traj.matrices.push_back(Mat2::identity());

  State<4> y = pack(Mat2::identity());
  double h = ctl.initial_step;
  Renormalize post{&traj.raw_det_drift};
  for (std::size_t i = 1; i <= intervals; ++i) {
    const double z0 = traj.z_nodes.back();
    const double z1 = i == intervals ? kPi : kPi * static_cast<double>(i) / static_cast<double>(intervals);
    y = ode::integrate_adaptive<4>(rhs, z0, z1, y, ctl, h, post);
    const Mat2 m = unpack(y.data());
    traj.z_nodes.push_back(z1);
    traj.matrices.push_back(m);
    traj.det_drift = std::max(traj.det_drift, std::abs(m.det() - 1.0));
  }
  return traj;
}

Monodromy monodromy(const PotentialSpec& spec, double lambda, const IntegratorOptions& options) {
  check_lambda(lambda);
  FundamentalRhs<4> rhs{spec, lambda};
  const ode::StepControl ctl = control(options, lambda);
  double h = ctl.initial_step;
  State<4> y = ode::integrate_adaptive<4>(rhs, 0.0, kPi, pack(Mat2::identity()), ctl, h,
                                          Renormalize{});
  Monodromy m;
  m.lambda = lambda;
  m.a = unpack(y.data());
  m.delta = m.a.trace();
  return m;
}

double discriminant(const PotentialSpec& spec, double lambda, const IntegratorOptions& options) {
  return monodromy(spec, lambda, options).delta;
}

FloquetPair floquet_multipliers(double delta) {
  const std::complex<double> disc = std::sqrt(std::complex<double>(delta * delta - 4.0, 0.0));
  const std::complex<double> d(delta, 0.0);
  // Larger-magnitude root first, partner from rho+ rho- = 1 to avoid cancellation.
  std::complex<double> big = delta >= 0.0 ? (d + disc) / 2.0 : (d - disc) / 2.0;
  std::complex<double> small = 1.0 / big;
  if (delta >= 0.0) return {big, small};
  return {small, big};
}

FloquetPair floquet_multipliers(const Monodromy& m) { return floquet_multipliers(m.delta); }

DiscriminantDerivative discriminant_derivative(const PotentialSpec& spec, double lambda,
                                               const IntegratorOptions& options) {
  GramRun run = monodromy_with_gram(spec, lambda, options);
  const Monodromy& m = run.m;
  const GramIntegrals& g = run.gram;

  DiscriminantDerivative out;
  out.monodromy = m;
  out.gram = g;
  out.value = m.y21() * g.y1y1 + (m.y22() - m.y11()) * g.y1y2 - m.y12() * g.y2y2;

  // Same step mesh on both sides so the difference quotient sees a smooth map.
  const double step = 1e-5 * std::max(1.0, std::abs(lambda));
  const double up = delta_on_mesh(spec, lambda + step, run.mesh);
  const double down = delta_on_mesh(spec, lambda - step, run.mesh);
  out.finite_difference = (up - down) / (2.0 * step);

  const double diff = std::abs(out.value - out.finite_difference);
  const double scale = std::max(std::abs(out.value), std::abs(out.finite_difference));
  out.relative_error = scale > 0.0 ? diff / scale : 0.0;

  constexpr double kRelTol = 1e-5;
  const bool both_tiny = std::abs(out.value) < 1e-6 && std::abs(out.finite_difference) < 1e-6;
  const bool mismatch = both_tiny ? diff > 10.0 * 1e-8 : out.relative_error > 10.0 * kRelTol;
  if (mismatch) {
    throw DerivativeMismatch("derivative identity and finite difference disagree at lambda = " +
                             std::to_string(lambda) + " (relative error " +
                             std::to_string(out.relative_error) + ")");
  }
  return out;
}

Stability classify_stability(double delta, double tol) {
  const double a = std::abs(delta);
  if (std::abs(a - 2.0) <= tol) return Stability::Boundary;
  if (a < 2.0 - tol) return Stability::Stable;
  return Stability::Unstable;
}

double trajectory_residual(const PotentialSpec& spec, const FundamentalTrajectory& traj,
                           const IntegratorOptions& options) {
  const double lambda = traj.lambda;
  const double h = 5e-4 / (1.0 + std::abs(lambda));
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < traj.z_nodes.size(); ++i) {
    const double z0 = traj.z_nodes[i];
    const double zm = 0.5 * (z0 + traj.z_nodes[i + 1]);
    const Mat2& y0 = traj.matrices[i];
    // adaptive to the first stencil point, then single steps of size h
    FundamentalRhs<4> rhs{spec, lambda};
    Mat2 pts[5];
    pts[0] = propagate(spec, lambda, z0, zm - 2.0 * h, y0, options);
    for (int s = 1; s < 5; ++s) {
      const double zs = zm + (s - 3) * h;
      pts[s] = unpack(ode::dop853_step<4>(rhs, zs, pack(pts[s - 1]), h, ode::StepControl{}, nullptr).data());
    }
    const Mat2 dy = (pts[0] - 8.0 * pts[1] + 8.0 * pts[3] - pts[4]) / (12.0 * h);
    Mat2 shifted = spec(zm);
    shifted.a11 -= lambda;
    shifted.a22 -= lambda;
    const Mat2 res = kJ * dy + shifted * pts[2];
    worst = std::max(worst, column_norm(res));
  }
  return worst;
}

}  // namespace canonsys
