#include "canonsys/inverse.hpp"

#include <algorithm>
#include <cmath>

#include "canonsys/errors.hpp"

namespace canonsys {

const char* to_string(GapVerdict v) {
  return v == GapVerdict::AllVanish ? "AllVanish" : "GapFound";
}

const char* to_string(PotentialClass c) {
  switch (c) {
    case PotentialClass::ScalarIdentity: return "ScalarIdentity";
    case PotentialClass::CanonicalForm: return "CanonicalForm";
    case PotentialClass::General: return "General";
  }
  return "General";
}

const char* to_string(ContrapositiveVerdict v) {
  return v == ContrapositiveVerdict::CertifiedNotScalarIdentity ? "CertifiedNotScalarIdentity"
                                                                 : "ConsistentWithScalarIdentityUpToN";
}

PotentialClass classify_potential(const PotentialSpec& spec, double tol) {
  if (is_scalar_identity(spec, tol)) return PotentialClass::ScalarIdentity;
  if (is_canonical_form(spec, tol)) return PotentialClass::CanonicalForm;
  return PotentialClass::General;
}

GapReport gap_vanishing_report(const PotentialSpec& spec, long N, double tol,
                               const IntegratorOptions& options, Exec exec) {
  if (N < 1) throw ConfigError("N must be >= 1");
  if (!(tol >= 0.0)) throw ConfigError("tol must be nonnegative");
  GapReport r;
  r.N = N;
  r.tol = tol;
  r.potential_class = classify_potential(spec);
  r.table = band_edges(spec, -N, N, options, exec);
  r.gaps = instability_intervals(r.table);
  for (const InstabilityInterval& g : r.gaps) {
    if (g.width > r.max_width) {
      r.max_width = g.width;
      r.gap_index = g.j;
    }
  }
  r.gap_width = r.max_width;
  r.verdict = r.max_width > tol ? GapVerdict::GapFound : GapVerdict::AllVanish;
  return r;
}

ForwardReport forward_check(const PotentialSpec& spec, long N, double tol,
                            const IntegratorOptions& options, Exec exec) {
  if (!is_scalar_identity(spec, 1e-9)) throw ConfigError("forward check needs Q = pI");
  ForwardReport f;
  f.report = gap_vanishing_report(spec, N, tol, options, exec);
  const ScalarFunction p = combine(0.5, spec.q1(), 0.5, spec.q2());
  f.shift_constant = p.mean();
  const double c = f.shift_constant;

  for (const InstabilityInterval& g : f.report.gaps) {
    f.max_width = std::max(f.max_width, g.width);
    if (g.width > tol) {
      throw AssertionFailure("gap j = " + std::to_string(g.j) + " has width " + std::to_string(g.width));
    }
    // j = 2k: edges at 2k + c; j = 2k - 1: edges at 2k - 1 + c, i.e. j + c either way.
    const double expected = static_cast<double>(g.j) + c;
    const double err = std::max(std::abs(g.lo - expected), std::abs(g.hi - expected));
    f.max_edge_error = std::max(f.max_edge_error, err);
    if (err > kEdgeTol) {
      throw AssertionFailure("edge of gap j = " + std::to_string(g.j) + " is off by " + std::to_string(err));
    }
  }

  std::vector<char> doubles(2 * f.report.gaps.size(), 0);
  parallel_for(doubles.size(), exec, [&](std::size_t i) {
    const InstabilityInterval& g = f.report.gaps[i / 2];
    const double lambda = i % 2 == 0 ? g.lo : g.hi;
    const int parity = g.parity == EdgeParity::Periodic ? 1 : -1;
    doubles[i] = detect_double(spec, lambda, parity, kEdgeTol, options) ? 1 : 0;
  });
  for (std::size_t i = 0; i < doubles.size(); ++i) {
    if (!doubles[i]) {
      throw AssertionFailure("edge of gap j = " + std::to_string(f.report.gaps[i / 2].j) +
                             " is not a double eigenvalue");
    }
  }
  f.doubles_checked = doubles.size();
  return f;
}

ContrapositiveResult contrapositive_check(const PotentialSpec& spec, long N, double tol,
                                          const IntegratorOptions& options, Exec exec) {
  ContrapositiveResult r;
  r.report = gap_vanishing_report(spec, N, tol, options, exec);
  r.verdict = r.report.verdict == GapVerdict::GapFound
                  ? ContrapositiveVerdict::CertifiedNotScalarIdentity
                  : ContrapositiveVerdict::ConsistentWithScalarIdentityUpToN;
  return r;
}

double closed_form_discriminant_scalar(const ScalarFunction& p, double lambda) {
  return 2.0 * std::cos(lambda * kPi - p.integral_from_zero(kPi));
}

double free_dirac_discriminant(double m, double lambda) {
  const double s = lambda * lambda - m * m;
  return s >= 0.0 ? 2.0 * std::cos(std::sqrt(s) * kPi) : 2.0 * std::cosh(std::sqrt(-s) * kPi);
}

Mat2 scalar_fundamental_closed_form(const ScalarFunction& p, double lambda, double z) {
  return exp_j(p.integral_from_zero(z) - lambda * z);
}

std::vector<OracleResidual> oracle_residuals(const PotentialSpec& spec,
                                             const IntegratorOptions& options) {
  constexpr std::size_t kSamples = 16;
  std::vector<double> lambdas(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    lambdas[i] = -4.0 + 8.0 * static_cast<double>(i) / static_cast<double>(kSamples - 1);
  }
  auto sweep = [&](const std::string& name, auto&& oracle) {
    OracleResidual r{name, 0.0, kSamples};
    for (double l : lambdas) {
      r.max_residual = std::max(r.max_residual, std::abs(discriminant(spec, l, options) - oracle(l)));
    }
    return r;
  };

  std::vector<OracleResidual> out;
  if (is_scalar_identity(spec, 1e-9)) {
    const ScalarFunction p = combine(0.5, spec.q1(), 0.5, spec.q2());
    out.push_back(sweep("scalar_closed_form", [&](double l) { return closed_form_discriminant_scalar(p, l); }));
  }
  if (spec.is_constant() && spec.is_canonical_form()) {
    const double a = spec.q1().constant_value(), b = spec.q().constant_value();
    const double m = std::hypot(a, b);
    out.push_back(sweep("free_dirac", [&](double l) { return free_dirac_discriminant(m, l); }));
  }
  return out;
}

}  // namespace canonsys
