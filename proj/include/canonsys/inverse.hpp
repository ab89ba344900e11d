#pragma once

#include <string>
#include <vector>

#include "canonsys/matrix2.hpp"
#include "canonsys/monodromy.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"
#include "canonsys/spectra.hpp"

namespace canonsys {

enum class GapVerdict { AllVanish, GapFound };
enum class PotentialClass { ScalarIdentity, CanonicalForm, General };

const char* to_string(GapVerdict v);
const char* to_string(PotentialClass c);

/// ScalarIdentity, then CanonicalForm, then General, each tested at tol on the check grid.
PotentialClass classify_potential(const PotentialSpec& spec, double tol = 1e-9);

struct GapReport {
  long N = 0;
  double tol = 0.0;
  std::vector<InstabilityInterval> gaps;  ///< j = -2N-1 .. 2N
  double max_width = 0.0;
  GapVerdict verdict = GapVerdict::AllVanish;
  long gap_index = 0;     ///< widest gap when GapFound
  double gap_width = 0.0;
  PotentialClass potential_class = PotentialClass::General;
  SpectrumTable table;
};

/// Band edges over k = -N..N; GapFound names the widest gap if it exceeds tol.
GapReport gap_vanishing_report(const PotentialSpec& spec, long N, double tol,
                               const IntegratorOptions& options = {}, Exec exec = Exec::Parallel);

struct ForwardReport {
  double shift_constant = 0.0;  ///< c = (1/pi) int_0^pi p
  double max_width = 0.0;
  double max_edge_error = 0.0;  ///< periodic edges vs 2k + c, antiperiodic vs 2k - 1 + c
  std::size_t doubles_checked = 0;
  GapReport report;
};

inline constexpr double kEdgeTol = 1e-6;

/// For Q = pI: every gap at most tol wide, edges at 2k + c and 2k - 1 + c within
/// kEdgeTol, and every edge a double eigenvalue. Throws AssertionFailure naming the
/// first offending index; ConfigError if Q is not a scalar multiple of I.
ForwardReport forward_check(const PotentialSpec& spec, long N, double tol,
                            const IntegratorOptions& options = {}, Exec exec = Exec::Parallel);

enum class ContrapositiveVerdict { CertifiedNotScalarIdentity, ConsistentWithScalarIdentityUpToN };

const char* to_string(ContrapositiveVerdict v);

struct ContrapositiveResult {
  ContrapositiveVerdict verdict = ContrapositiveVerdict::ConsistentWithScalarIdentityUpToN;
  GapReport report;
};

/// A gap wider than tol certifies Q != pI. All gaps vanishing up to N is only
/// consistency, never a certificate.
ContrapositiveResult contrapositive_check(const PotentialSpec& spec, long N, double tol,
                                          const IntegratorOptions& options = {},
                                          Exec exec = Exec::Parallel);

/// 2 cos(lambda pi - int_0^pi p).
double closed_form_discriminant_scalar(const ScalarFunction& p, double lambda);

/// 2 cos(sqrt(lambda^2 - m^2) pi), continued as 2 cosh(sqrt(m^2 - lambda^2) pi) for |lambda| < m.
double free_dirac_discriminant(double m, double lambda);

/// Y(z) = e^{J(int_0^z p - lambda z)} for Q = pI.
Mat2 scalar_fundamental_closed_form(const ScalarFunction& p, double lambda, double z);

struct OracleResidual {
  std::string name;
  double max_residual = 0.0;
  std::size_t samples = 0;
};

/// Closed-form comparisons that apply to the given potential: the scalar formula
/// for Q = pI and the free Dirac formula for constant canonical Q. Sampled at 16
/// points of [-4, 4].
std::vector<OracleResidual> oracle_residuals(const PotentialSpec& spec,
                                             const IntegratorOptions& options = {});

}  // namespace canonsys
