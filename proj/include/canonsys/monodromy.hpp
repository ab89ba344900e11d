#pragma once

#include <complex>
#include <vector>

#include "canonsys/matrix2.hpp"
#include "canonsys/potential.hpp"

namespace canonsys {

struct IntegratorOptions {
  /// Bound for the finite-difference residual ||J Y' + (Q - lambda I) Y|| checked
  /// by `trajectory_residual`.
  double residual_tol = 1e-9;
  std::size_t max_steps = 2'000'000;
  /// Local error tolerances of the adaptive Runge-Kutta core.
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  /// Number of uniform intervals recorded by `integrate_fundamental`.
  std::size_t trajectory_intervals = 64;
};

/// min(pi/64, 1/(4(1 + |lambda|))): the solution oscillates at frequency ~ lambda.
double initial_step(double lambda);

/// Fundamental matrix Y(z, lambda) on a uniform grid of [0, pi], Y(0) = I.
struct FundamentalTrajectory {
  double lambda = 0.0;
  std::vector<double> z_nodes;
  std::vector<Mat2> matrices;
  /// max |det Y - 1| over the stored nodes.
  double det_drift = 0.0;
  /// Largest |det - 1| seen before a per-step renormalization.
  double raw_det_drift = 0.0;
};

/// Monodromy matrix A(lambda) = Y(pi, lambda) and its trace.
///
/// `a` is stored as an ordinary row/column matrix. The y_ij accessors follow the
/// column-solution convention Y_i = (y_i1, y_i2)^T, i.e. y_ij = a(j, i); the
/// derivative identity and the sign conditions use that convention.
struct Monodromy {
  double lambda = 0.0;
  Mat2 a = Mat2::identity();
  double delta = 2.0;

  double y11() const { return a.a11; }
  double y12() const { return a.a21; }
  double y21() const { return a.a12; }
  double y22() const { return a.a22; }
};

struct FloquetPair {
  std::complex<double> rho_plus;
  std::complex<double> rho_minus;
};

enum class Stability { Stable, Unstable, Boundary };

const char* to_string(Stability s);

FundamentalTrajectory integrate_fundamental(const PotentialSpec& spec, double lambda,
                                            const IntegratorOptions& options = {});

Monodromy monodromy(const PotentialSpec& spec, double lambda,
                    const IntegratorOptions& options = {});

double discriminant(const PotentialSpec& spec, double lambda,
                    const IntegratorOptions& options = {});

/// Roots of rho^2 - delta rho + 1.
FloquetPair floquet_multipliers(const Monodromy& m);
FloquetPair floquet_multipliers(double delta);

/// L2 Gram integrals of the column solutions over [0, pi].
struct GramIntegrals {
  double y1y1 = 0.0;  ///< int Y1^T Y1
  double y1y2 = 0.0;  ///< int Y1^T Y2
  double y2y2 = 0.0;  ///< int Y2^T Y2
};

struct DiscriminantDerivative {
  double value = 0.0;              ///< from the Gram-integral identity
  double finite_difference = 0.0;  ///< central difference, step 1e-5 max(1, |lambda|)
  double relative_error = 0.0;
  Monodromy monodromy;
  GramIntegrals gram;
};

/// d Delta / d lambda from
///   y21 int Y1'Y1 + (y22 - y11) int Y1'Y2 - y12 int Y2'Y2
/// cross-checked against a central difference. Throws DerivativeMismatch when
/// the two disagree by more than 10x the 1e-5 relative tolerance (absolute 1e-8
/// when both are below 1e-6 in magnitude).
DiscriminantDerivative discriminant_derivative(const PotentialSpec& spec, double lambda,
                                               const IntegratorOptions& options = {});

/// Boundary iff ||delta| - 2| <= tol; Stable iff |delta| < 2 - tol.
Stability classify_stability(double delta, double tol);

/// max over interval midpoints of ||J Y' + (Q - lambda I) Y|| (column norm), with
/// Y' from a 5-point stencil of locally integrated solutions.
double trajectory_residual(const PotentialSpec& spec, const FundamentalTrajectory& traj,
                           const IntegratorOptions& options = {});

}  // namespace canonsys
