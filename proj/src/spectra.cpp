#include "canonsys/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "canonsys/errors.hpp"

namespace canonsys {

namespace {

// An anchor with (-1)^n Delta - 2 below this is treated as sitting on the edge.
constexpr double kSnap = 1e-10;

double parity_sign(long n) { return (n & 1) == 0 ? 1.0 : -1.0; }

struct Edge {
  double value = 0.0;
  double residual = 0.0;
};

struct ComponentEdges {
  Edge left, right;
};

class EdgeFinder {
 public:
  EdgeFinder(const PotentialSpec& spec, const SpectrumTable& t, const IntegratorOptions& o)
      : spec_(spec), table_(t), options_(o) {}

  double lo_anchor(long n) const { return std::min(mu(n), nu(n)); }
  double hi_anchor(long n) const { return std::max(mu(n), nu(n)); }

  // (-1)^n Delta(lambda) - 2
  double excess(long n, double lambda) const {
    return parity_sign(n) * discriminant(spec_, lambda, options_) - 2.0;
  }

  Edge left(long n) const {
    const double b = lo_anchor(n);
    const double fb = excess(n, b);
    if (fb <= kSnap) return {b, std::abs(fb)};
    const double a = hi_anchor(n - 1);
    const double fa = excess(n, a);
    return solve(n, a, b, fa, fb);
  }

  Edge right(long n) const {
    const double a = hi_anchor(n);
    const double fa = excess(n, a);
    if (fa <= kSnap) return {a, std::abs(fa)};
    const double b = lo_anchor(n + 1);
    const double fb = excess(n, b);
    return solve(n, a, b, fa, fb);
  }

 private:
  double mu(long n) const { return table_.mu.at(static_cast<std::size_t>(n - table_.anchor_n_min)).value; }
  double nu(long n) const { return table_.nu.at(static_cast<std::size_t>(n - table_.anchor_n_min)).value; }

  Edge solve(long n, double a, double b, double fa, double fb) const {
    if (!(fa * fb < 0.0)) {
      throw IndexingViolation("no sign change of (-1)^n Delta - 2 between anchors for n = " +
                              std::to_string(n));
    }
    auto f = [&](double x) { return excess(n, x); };
    auto tol = [](double x, double y) {
      return std::abs(x - y) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                    std::max(1.0, std::max(std::abs(x), std::abs(y)));
    };
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
    const double flo = std::abs(f(lo)), fhi = std::abs(f(hi));
    return flo <= fhi ? Edge{lo, flo} : Edge{hi, fhi};
  }

  const PotentialSpec& spec_;
  const SpectrumTable& table_;
  const IntegratorOptions& options_;
};

void check_chain(SpectrumTable& t) {
  double worst = 0.0;
  auto link = [&](double a, double b) { worst = std::max(worst, a - b); };
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SpectrumRow& r = t.rows[i];
    link(r.lambda_p_2k_minus_1, std::min(r.mu_2k_minus_1, r.nu_2k_minus_1));
    link(std::max(r.mu_2k_minus_1, r.nu_2k_minus_1), r.lambda_p_2k);
    link(r.lambda_p_2k, r.lambda_2k_minus_1);
    link(r.lambda_2k_minus_1, std::min(r.mu_2k, r.nu_2k));
    link(std::max(r.mu_2k, r.nu_2k), r.lambda_2k);
    const double next = i + 1 < t.rows.size() ? t.rows[i + 1].lambda_p_2k_minus_1 : t.lambda_p_next;
    link(r.lambda_2k, next);
  }
  t.chain_violation = worst;

  for (std::size_t i = 0; i + 1 < t.mu.size(); ++i) {
    const double hi = std::max(t.mu[i].value, t.nu[i].value);
    const double lo = std::min(t.mu[i + 1].value, t.nu[i + 1].value);
    if (!(hi < lo)) t.interlacing_ok = false;
  }

  if (!t.interlacing_ok) throw IndexingViolation("Dirichlet anchors do not interlace");
  if (worst > kChainSlack) {
    throw IndexingViolation("edge ordering chain violated by " + std::to_string(worst));
  }
}

}  // namespace

const char* to_string(EdgeParity p) {
  return p == EdgeParity::Periodic ? "periodic" : "antiperiodic";
}

SpectrumTable band_edges(const PotentialSpec& spec, long k_min, long k_max,
                         const IntegratorOptions& options, Exec exec) {
  if (k_max < k_min) throw ConfigError("k_max must be >= k_min");
  SpectrumTable t;
  t.k_min = k_min;
  t.k_max = k_max;
  t.anchor_n_min = 2 * k_min - 2;
  const long anchor_n_max = 2 * k_max + 1;
  t.mu = dirichlet_eigenvalues(spec, DirichletKind::Mu, t.anchor_n_min, anchor_n_max, options, exec);
  t.nu = dirichlet_eigenvalues(spec, DirichletKind::Nu, t.anchor_n_min, anchor_n_max, options, exec);

  const EdgeFinder finder(spec, t, options);
  const long n_first = 2 * k_min - 1;
  const std::size_t count = static_cast<std::size_t>(2 * k_max - n_first + 1);
  std::vector<ComponentEdges> comps(count);
  Edge closing;
  // One extra slot computes the left edge of component 2 k_max + 1.
  parallel_for(count + 1, exec, [&](std::size_t i) {
    const long n = n_first + static_cast<long>(i);
    if (i == count) {
      closing = finder.left(n);
    } else {
      comps[i] = {finder.left(n), finder.right(n)};
    }
  });

  for (long k = k_min; k <= k_max; ++k) {
    const std::size_t ia = static_cast<std::size_t>(2 * k - 1 - n_first);
    const ComponentEdges& anti = comps[ia];
    const ComponentEdges& per = comps[ia + 1];
    auto anchor = [&](const std::vector<DirichletEigenvalue>& v, long n) {
      return v[static_cast<std::size_t>(n - t.anchor_n_min)].value;
    };
    SpectrumRow r;
    r.k = k;
    r.lambda_p_2k_minus_1 = anti.left.value;
    r.lambda_p_2k = anti.right.value;
    r.lambda_2k_minus_1 = per.left.value;
    r.lambda_2k = per.right.value;
    r.mu_2k_minus_1 = anchor(t.mu, 2 * k - 1);
    r.nu_2k_minus_1 = anchor(t.nu, 2 * k - 1);
    r.mu_2k = anchor(t.mu, 2 * k);
    r.nu_2k = anchor(t.nu, 2 * k);
    r.residuals[0] = per.left.residual;
    r.residuals[1] = per.right.residual;
    r.residuals[2] = anti.left.residual;
    r.residuals[3] = anti.right.residual;
    t.rows.push_back(r);
  }
  t.lambda_p_next = closing.value;
  check_chain(t);
  return t;
}

std::vector<InstabilityInterval> instability_intervals(const SpectrumTable& table) {
  std::vector<InstabilityInterval> out;
  out.reserve(2 * table.rows.size());
  for (const SpectrumRow& r : table.rows) {
    out.push_back({2 * r.k - 1, r.lambda_p_2k_minus_1, r.lambda_p_2k,
                   std::max(0.0, r.lambda_p_2k - r.lambda_p_2k_minus_1), EdgeParity::Antiperiodic});
    out.push_back({2 * r.k, r.lambda_2k_minus_1, r.lambda_2k,
                   std::max(0.0, r.lambda_2k - r.lambda_2k_minus_1), EdgeParity::Periodic});
  }
  return out;
}

bool detect_double(const PotentialSpec& spec, double lambda, int parity, double tol,
                   const IntegratorOptions& options) {
  const double s = parity >= 0 ? 1.0 : -1.0;
  const Monodromy m = monodromy(spec, lambda, options);
  if (std::abs(m.delta - 2.0 * s) > tol) return false;
  return max_abs(m.a - s * Mat2::identity()) <= tol;
}

namespace {

double wrap_tau(double tau) {
  double t = std::fmod(tau, kPi);
  if (t < 0.0) t += kPi;
  return t;
}

ShiftExtremum scan_curve(const PotentialSpec& spec, long k, EdgeParity parity, double edge_lo,
                         double edge_hi, std::size_t samples, const IntegratorOptions& options,
                         Exec exec) {
  ShiftExtremum e;
  e.k = k;
  e.parity = parity;
  e.n = parity == EdgeParity::Periodic ? 2 * k : 2 * k - 1;
  e.edge_lo = edge_lo;
  e.edge_hi = edge_hi;

  const MuCurve curve = shifted_mu_curve(spec, e.n, tau_grid(samples), options, exec);
  e.slope_bound = curve.slope_bound;
  e.continuous = curve.continuous;

  auto by_mu = [](const MuCurvePoint& a, const MuCurvePoint& b) { return a.mu < b.mu; };
  MuCurvePoint lo = *std::min_element(curve.points.begin(), curve.points.end(), by_mu);
  MuCurvePoint hi = *std::max_element(curve.points.begin(), curve.points.end(), by_mu);

  const double step = kPi / static_cast<double>(samples) / 3.0;
  std::vector<double> extra;
  for (double center : {lo.tau, hi.tau}) {
    for (int j : {-2, -1, 1, 2}) extra.push_back(wrap_tau(center + j * step));
  }
  const MuCurve refined = shifted_mu_curve(spec, e.n, extra, options, exec);
  for (const MuCurvePoint& p : refined.points) {
    if (p.mu < lo.mu) lo = p;
    if (p.mu > hi.mu) hi = p;
  }

  e.min_mu = lo.mu;
  e.max_mu = hi.mu;
  e.argmin_tau = lo.tau;
  e.argmax_tau = hi.tau;
  e.tolerance = e.slope_bound * kPi / static_cast<double>(samples) + 1e-6;
  e.err_min = std::abs(e.min_mu - edge_lo);
  e.err_max = std::abs(e.max_mu - edge_hi);
  e.ok = e.err_min <= e.tolerance && e.err_max <= e.tolerance;
  return e;
}

}  // namespace

ShiftExtremaReport verify_shift_extrema(const PotentialSpec& spec, const SpectrumTable& table,
                                        std::size_t tau_samples, const IntegratorOptions& options,
                                        Exec exec) {
  if (tau_samples < 2) throw ConfigError("tau_samples must be >= 2");
  ShiftExtremaReport report;
  report.tau_samples = tau_samples;
  for (const SpectrumRow& r : table.rows) {
    ShiftExtremum anti = scan_curve(spec, r.k, EdgeParity::Antiperiodic, r.lambda_p_2k_minus_1,
                                    r.lambda_p_2k, tau_samples, options, exec);
    ShiftExtremum per = scan_curve(spec, r.k, EdgeParity::Periodic, r.lambda_2k_minus_1,
                                   r.lambda_2k, tau_samples, options, exec);
    if (r.k == 0) {
      per.skipped = true;
      per.ok = true;
      const bool inside = per.min_mu > per.edge_lo && per.max_mu < per.edge_hi;
      per.note = inside ? "mu_0(tau) stays strictly inside (lambda_-1, lambda_0)"
                        : "mu_0(tau) reaches an edge of [lambda_-1, lambda_0]";
    }
    report.all_ok = report.all_ok && anti.ok && per.ok;
    report.rows.push_back(std::move(anti));
    report.rows.push_back(std::move(per));
  }
  return report;
}

ShiftExtremaReport verify_shift_extrema(const PotentialSpec& spec, long k_min, long k_max,
                                        std::size_t tau_samples, const IntegratorOptions& options,
                                        Exec exec) {
  return verify_shift_extrema(spec, band_edges(spec, k_min, k_max, options, exec), tau_samples,
                              options, exec);
}

}  // namespace canonsys
