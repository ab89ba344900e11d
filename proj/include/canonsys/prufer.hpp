#pragma once

#include <string>
#include <vector>

#include "canonsys/monodromy.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"

namespace canonsys {

/// Endpoint of the continuous Pruefer angle theta(z, lambda, gamma) on [0, pi].
struct AngleSolution {
  double lambda = 0.0;
  double gamma = 0.0;
  double theta_end = 0.0;
  long winding_hint = 0;  ///< floor(theta_end / pi)
};

/// mu_n: theta(pi, mu_n, 0) = n pi. nu_n: theta(pi, nu_n, pi/2) = n pi + pi/2.
enum class DirichletKind { Mu, Nu };

const char* to_string(DirichletKind k);

struct DirichletEigenvalue {
  long n = 0;
  DirichletKind kind = DirichletKind::Mu;
  double value = 0.0;
  double residual = 0.0;  ///< |theta(pi) - target| at `value`
};

/// theta' = lambda - q sin 2theta - q1 cos^2 theta - q2 sin^2 theta, theta(0) = gamma,
/// integrated without any mod-pi folding. gamma must lie in [0, pi).
AngleSolution integrate_angle(const PotentialSpec& spec, double lambda, double gamma,
                              const IntegratorOptions& options = {});

DirichletEigenvalue find_dirichlet(const PotentialSpec& spec, long n, DirichletKind kind,
                                   const IntegratorOptions& options = {});
DirichletEigenvalue find_mu(const PotentialSpec& spec, long n, const IntegratorOptions& options = {});
DirichletEigenvalue find_nu(const PotentialSpec& spec, long n, const IntegratorOptions& options = {});

/// Eigenvalues of one kind for n = n_min..n_max (inclusive), indexed from n_min.
std::vector<DirichletEigenvalue> dirichlet_eigenvalues(const PotentialSpec& spec, DirichletKind kind,
                                                       long n_min, long n_max,
                                                       const IntegratorOptions& options = {},
                                                       Exec exec = Exec::Parallel);
std::vector<DirichletEigenvalue> dirichlet_eigenvalues_serial(const PotentialSpec& spec,
                                                              DirichletKind kind, long n_min,
                                                              long n_max,
                                                              const IntegratorOptions& options = {});

struct MuCurvePoint {
  double tau = 0.0;
  double mu = 0.0;
};

struct MuCurve {
  long n = 0;
  std::vector<MuCurvePoint> points;
  /// Largest |d mu / d tau| between adjacent samples.
  double slope_bound = 0.0;
  /// No adjacent jump exceeds 10 x spacing x typical slope.
  bool continuous = true;
};

/// mu_n of the shifted potential Q(. + tau) for each tau in `taus` (in [0, pi]).
MuCurve shifted_mu_curve(const PotentialSpec& spec, long n, const std::vector<double>& taus,
                         const IntegratorOptions& options = {}, Exec exec = Exec::Parallel);
MuCurve shifted_mu_curve_serial(const PotentialSpec& spec, long n, const std::vector<double>& taus,
                                const IntegratorOptions& options = {});

/// k equispaced samples of [0, pi).
std::vector<double> tau_grid(std::size_t k);

}  // namespace canonsys
