#pragma once

#include <vector>

#include "canonsys/matrix2.hpp"
#include "canonsys/monodromy.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"

namespace canonsys {

/// Large-lambda expansion of Y(z, lambda) for canonical-form Q:
///   e^{-lJz}(I - Q(0)/2l) + Q(z)e^{-lJz}/2l + (1/2l) int_0^z e^{lJ(t-z)}(JQ^2 - Q')e^{-lJt} dt
struct AsymptoticEvaluation {
  double lambda = 0.0;
  double z = 0.0;
  Mat2 leading;
  Mat2 correction;
  Mat2 integral_term;
  Mat2 total;  ///< leading + correction + integral_term
};

/// Simpson intervals used for the integral term: 64 per oscillation period of the
/// integrand, at least 512, always even.
std::size_t asymptotic_nodes(double lambda, double z);

/// Throws NotCanonicalForm, ACRequired (sampled entries) or ConfigError (lambda = 0).
AsymptoticEvaluation asymptotic_fundamental(const PotentialSpec& spec, double lambda, double z);

/// e^{-lJz}[I - Q(0)/2l + (J/2l) int_0^z Q^2] + e^{lJz} Q(z)/2l. Needs no Q'.
Mat2 coarse_asymptotic(const PotentialSpec& spec, double lambda, double z);

struct DecayReport {
  std::vector<double> lambdas;
  std::vector<double> err_full;    ///< ||Y(pi) - full form||, column norm
  std::vector<double> err_coarse;  ///< ||Y(pi) - coarse form||
  double slope_full = 0.0;         ///< log-log least-squares slope
  double slope_coarse = 0.0;
  bool exact_full = false;  ///< every error below 1e-12 max(1, |lambda|); slope undefined
  bool exact_coarse = false;
  /// max / min of err_full * lambda^2 over the list.
  double scaled_spread_full = 1.0;
  bool ok_full = false;    ///< exact or slope <= -1.7
  bool ok_coarse = false;  ///< exact or slope <= -0.9
};

inline constexpr double kFullSlopeBound = -1.7;
inline constexpr double kCoarseSlopeBound = -0.9;

/// Remainder of both expansions against the integrated monodromy at z = pi.
/// Requires at least two values, all with |lambda| >= 10.
DecayReport remainder_decay_check(const PotentialSpec& spec, const std::vector<double>& lambdas,
                                  const IntegratorOptions& options = {},
                                  Exec exec = Exec::Parallel);

/// Least-squares slope of log y against log |x|.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace canonsys
