#include "canonsys/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>

#include "canonsys/asymptotics.hpp"
#include "canonsys/cli.hpp"
#include "canonsys/errors.hpp"
#include "canonsys/inverse.hpp"
#include "canonsys/potential.hpp"
#include "canonsys/prufer.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/spectra.hpp"
#include "canonsys/sweep.hpp"

namespace canonsys {

namespace {

using nlohmann::json;

CriterionResult start(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

ScalarFunction trig1(double a0, double c1, double s1) { return ScalarFunction::trig(a0, {c1}, {s1}); }

PotentialSpec sigma1() { return PotentialSpec::constant(0.0, 0.0, 1.0); }

PotentialSpec free_dirac(double m) {
  return PotentialSpec::canonical(ScalarFunction::constant(m), ScalarFunction::constant(0.0));
}

PotentialSpec extrema_potential() {
  return PotentialSpec::canonical(trig1(0.0, 0.3, 0.0), trig1(0.0, 0.0, 0.2));
}

std::vector<PotentialSpec> random_specimens(std::uint64_t seed) {
  return {random_potential(seed + 1), random_potential(seed + 2), random_potential(seed + 3)};
}

std::vector<PotentialSpec> scalar_specimens(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return {PotentialSpec::zero(), PotentialSpec::scalar(ScalarFunction::constant(3.0)),
          PotentialSpec::scalar(trig1(2.0, 1.0, 0.0)), PotentialSpec::scalar(trig1(1.0, 1.0, 0.0)),
          PotentialSpec::scalar(ScalarFunction::trig(random_trig_poly(rng, 3)))};
}

CriterionResult c1_free(const AcceptanceOptions& o) {
  CriterionResult r = start(1, "free-case discriminant");
  const auto lambdas = linspace(-10.0, 10.0, 201);
  double worst = 0.0;
  for (double l : lambdas) {
    worst = std::max(worst, std::abs(discriminant(PotentialSpec::zero(), l, o.integrator) - 2.0 * std::cos(l * kPi)));
  }
  r.pass = worst <= 1e-8;
  r.detail = "max |Delta - 2cos(lambda pi)| = " + sci(worst) + " over 201 samples (tol 1e-8)";
  r.artifact = json{{"samples", lambdas.size()}, {"max_error", worst}};
  return r;
}

CriterionResult c2_dirac(const AcceptanceOptions& o) {
  CriterionResult r = start(2, "free Dirac discriminant");
  const auto lambdas = linspace(-8.0, 8.0, 101);
  double worst = 0.0;
  json per_m = json::array();
  for (double m : {0.5, 1.0, 2.0}) {
    const PotentialSpec spec = free_dirac(m);
    double w = 0.0;
    for (double l : lambdas) {
      w = std::max(w, std::abs(discriminant(spec, l, o.integrator) - free_dirac_discriminant(m, l)));
    }
    per_m.push_back(json{{"m", m}, {"max_error", w}});
    worst = std::max(worst, w);
  }
  r.pass = worst <= 1e-7;
  r.detail = "max |Delta - 2cos(sqrt(lambda^2 - m^2) pi)| = " + sci(worst) + " for m in {0.5, 1, 2} (tol 1e-7)";
  r.artifact = json{{"per_m", per_m}, {"max_error", worst}};
  return r;
}

CriterionResult c3_forward(const AcceptanceOptions& o) {
  CriterionResult r = start(3, "scalar-identity forward direction");
  const PotentialSpec spec = PotentialSpec::scalar(trig1(1.0, 1.0, 0.0));
  const ForwardReport f = forward_check(spec, 6, 1e-6, o.integrator);
  r.pass = f.report.gaps.size() == 26;
  r.detail = std::to_string(f.report.gaps.size()) + " gaps, max width " + sci(f.max_width) +
             ", max edge error " + sci(f.max_edge_error) + ", " + std::to_string(f.doubles_checked) +
             " edges double";
  r.artifact = json{{"gaps", f.report.gaps.size()},
                    {"max_width", f.max_width},
                    {"max_edge_error", f.max_edge_error},
                    {"doubles_checked", f.doubles_checked},
                    {"shift_constant", f.shift_constant}};
  return r;
}

CriterionResult c4_example(const AcceptanceOptions& o) {
  CriterionResult r = start(4, "worked example Q = sigma_1");
  const PotentialSpec spec = sigma1();
  const auto taus = tau_grid(16);
  double dirichlet = 0.0;
  for (double tau : taus) {
    const PotentialSpec s = shift(spec, tau);
    dirichlet = std::max(dirichlet, std::abs(find_mu(s, 0, o.integrator).value));
    dirichlet = std::max(dirichlet, std::abs(find_nu(s, 0, o.integrator).value));
  }
  const double delta0 = discriminant(spec, 0.0, o.integrator);
  const double delta_err = std::abs(delta0 - 2.0 * std::cosh(kPi));
  const SpectrumTable t = band_edges(spec, 0, 0, o.integrator);
  const double lo = t.rows[0].lambda_2k_minus_1, hi = t.rows[0].lambda_2k;
  const double edge_err = std::max(std::abs(lo + 1.0), std::abs(hi - 1.0));
  const bool strict = lo < 0.0 && 0.0 < hi;
  r.pass = dirichlet <= 1e-8 && delta_err <= 1e-8 && edge_err <= 1e-6 && strict;
  r.detail = "max |mu_0|, |nu_0| = " + sci(dirichlet) + ", |Delta(0) - 2cosh pi| = " + sci(delta_err) +
             ", I_0 edge error " + sci(edge_err) + (strict ? ", lambda_-1 < 0 < lambda_0" : ", ordering FAILED");
  r.artifact = json{{"max_dirichlet", dirichlet}, {"delta0", delta0}, {"delta0_error", delta_err},
                    {"lambda_m1", lo}, {"lambda_0", hi}, {"edge_error", edge_err}, {"strict", strict}};
  return r;
}

CriterionResult c5_shift(const AcceptanceOptions& o) {
  CriterionResult r = start(5, "shift invariance of Delta");
  const auto taus = tau_grid(8);
  const auto lambdas = linspace(-6.0, 6.0, 16);
  double worst = 0.0;
  for (const PotentialSpec& spec : random_specimens(o.seed)) {
    const auto base = discriminant_sweep(spec, lambdas, false, o.integrator);
    for (double tau : taus) {
      const auto moved = discriminant_sweep(shift(spec, tau), lambdas, false, o.integrator);
      for (std::size_t i = 0; i < lambdas.size(); ++i) {
        worst = std::max(worst, std::abs(moved[i].m.delta - base[i].m.delta));
      }
    }
  }
  r.pass = worst <= 1e-7;
  r.detail = "max |Delta(lambda, tau) - Delta(lambda, 0)| = " + sci(worst) + " (3 potentials, 8 tau, 16 lambda; tol 1e-7)";
  r.artifact = json{{"seed", o.seed}, {"max_difference", worst}};
  return r;
}

CriterionResult c6_derivative(const AcceptanceOptions& o) {
  CriterionResult r = start(6, "derivative identity vs central difference");
  // 16 spread points; a point with |Delta'| < 1e-4 is nudged until it qualifies.
  const auto base = linspace(-5.9713, 5.9713, 16);
  double worst = 0.0;
  std::size_t used_total = 0;
  bool enough = true;
  for (const PotentialSpec& spec : random_specimens(o.seed)) {
    std::size_t used = 0;
    for (double l0 : base) {
      for (int nudge = 0; nudge < 8; ++nudge) {
        const double l = l0 + 0.0371 * nudge;
        DiscriminantDerivative d;
        try {
          d = discriminant_derivative(spec, l, o.integrator);
        } catch (const DerivativeMismatch&) {
          worst = INFINITY;
          ++used;
          break;
        }
        if (std::abs(d.value) < 1e-4) continue;
        worst = std::max(worst, d.relative_error);
        ++used;
        break;
      }
    }
    enough = enough && used == base.size();
    used_total += used;
  }
  r.pass = enough && worst <= 1e-5;
  r.detail = "max relative error " + sci(worst) + " over " + std::to_string(used_total) +
             " points with |Delta'| >= 1e-4 (tol 1e-5)";
  r.artifact = json{{"seed", o.seed}, {"points", used_total}, {"max_relative_error", worst}};
  return r;
}

CriterionResult c7_chain(const AcceptanceOptions& o) {
  CriterionResult r = start(7, "interlacing and indexing chain");
  std::vector<std::pair<std::string, PotentialSpec>> specs{
      {"zero", PotentialSpec::zero()},
      {"sigma1", sigma1()},
      {"scalar_1_plus_cos", PotentialSpec::scalar(trig1(1.0, 1.0, 0.0))},
      {"dirac_m1", free_dirac(1.0)},
      {"canonical_trig", extrema_potential()}};
  const auto randoms = random_specimens(o.seed);
  for (std::size_t i = 0; i < randoms.size(); ++i) specs.emplace_back("random_" + std::to_string(i + 1), randoms[i]);

  bool ok = true;
  double worst = 0.0;
  json rows = json::array();
  for (const auto& [name, spec] : specs) {
    json row{{"potential", name}};
    try {
      const SpectrumTable t = band_edges(spec, -3, 3, o.integrator);
      worst = std::max(worst, t.chain_violation);
      row.update({{"chain_violation", t.chain_violation}, {"interlacing_ok", t.interlacing_ok}});
    } catch (const IndexingViolation& e) {
      ok = false;
      row["error"] = e.what();
    }
    rows.push_back(row);
  }
  r.pass = ok && worst <= kChainSlack;
  r.detail = std::to_string(specs.size()) + " potentials, |n| <= 6, max chain violation " + sci(worst) + " (slack 1e-8)";
  r.artifact = json{{"potentials", rows}, {"max_chain_violation", worst}};
  return r;
}

CriterionResult c8_extrema(const AcceptanceOptions& o) {
  CriterionResult r = start(8, "shift extrema of mu curves");
  const PotentialSpec spec = extrema_potential();
  json rows = json::array();
  bool ok = true;
  for (long k : {-1L, 1L}) {
    const ShiftExtremaReport rep = verify_shift_extrema(spec, k, k, 64, o.integrator);
    for (const ShiftExtremum& e : rep.rows) {
      const double tol = std::max(1e-4, e.slope_bound * kPi / 64.0);
      const bool pass = e.err_min <= tol && e.err_max <= tol;
      ok = ok && pass;
      rows.push_back(json{{"k", e.k},
                          {"parity", to_string(e.parity)},
                          {"n", e.n},
                          {"edge_lo", e.edge_lo},
                          {"edge_hi", e.edge_hi},
                          {"min_mu", e.min_mu},
                          {"max_mu", e.max_mu},
                          {"slope_bound", e.slope_bound},
                          {"tolerance", tol},
                          {"pass", pass}});
    }
  }
  double worst = 0.0;
  for (const auto& row : rows) {
    worst = std::max({worst, std::abs(row["min_mu"].get<double>() - row["edge_lo"].get<double>()),
                      std::abs(row["max_mu"].get<double>() - row["edge_hi"].get<double>())});
  }
  r.pass = ok;
  r.detail = "k in {-1, 1}, periodic and antiperiodic rows, max |extremum - edge| = " + sci(worst);
  r.artifact = json{{"rows", rows}, {"max_error", worst}};
  return r;
}

CriterionResult c9_asymptotics(const AcceptanceOptions& o) {
  CriterionResult r = start(9, "asymptotic remainder decay");
  const std::vector<double> lambdas{25.0, 50.0, 100.0, 200.0};
  const std::vector<std::pair<std::string, PotentialSpec>> specs{
      {"dirac_m1", free_dirac(1.0)}, {"random_canonical", random_canonical_potential(o.seed, 2)}};
  bool ok = true;
  json rows = json::array();
  std::string detail;
  for (const auto& [name, spec] : specs) {
    const DecayReport d = remainder_decay_check(spec, lambdas, o.integrator);
    ok = ok && d.ok_full && d.ok_coarse;
    rows.push_back(json{{"potential", name},
                        {"err_full", d.err_full},
                        {"err_coarse", d.err_coarse},
                        {"slope_full", d.slope_full},
                        {"slope_coarse", d.slope_coarse}});
    detail += (detail.empty() ? "" : "; ") + name + " slopes " + sci(d.slope_full) + " / " + sci(d.slope_coarse);
  }
  r.pass = ok;
  r.detail = detail + " (bounds -1.7 / -0.9)";
  r.artifact = json{{"lambdas", lambdas}, {"rows", rows}};
  return r;
}

CriterionResult c10_soundness(const AcceptanceOptions& o) {
  CriterionResult r = start(10, "inverse soundness");
  const ContrapositiveResult s1 = contrapositive_check(sigma1(), 4, 1e-6, o.integrator);
  const bool certified = s1.verdict == ContrapositiveVerdict::CertifiedNotScalarIdentity;
  bool never = true;
  json specimens = json::array();
  for (const PotentialSpec& spec : scalar_specimens(o.seed)) {
    const ContrapositiveResult c = contrapositive_check(spec, 4, 1e-6, o.integrator);
    const bool bad = c.verdict == ContrapositiveVerdict::CertifiedNotScalarIdentity;
    never = never && !bad && is_scalar_identity(spec, 1e-9);
    specimens.push_back(json{{"verdict", to_string(c.verdict)}, {"max_width", c.report.max_width}});
  }
  r.pass = certified && never;
  r.detail = std::string("sigma_1: ") + to_string(s1.verdict) + " (gap j = " +
             std::to_string(s1.report.gap_index) + ", width " + sci(s1.report.gap_width) + "); " +
             (never ? "no scalar specimen certified" : "a scalar specimen was certified");
  r.artifact = json{{"sigma1_verdict", to_string(s1.verdict)},
                    {"sigma1_gap_index", s1.report.gap_index},
                    {"sigma1_gap_width", s1.report.gap_width},
                    {"scalar_specimens", specimens}};
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<int> numeric_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  static const std::function<CriterionResult(const AcceptanceOptions&)> table[] = {
      c1_free, c2_dirac, c3_forward, c4_example, c5_shift,
      c6_derivative, c7_chain, c8_extrema, c9_asymptotics, c10_soundness};
  if (id < 1 || id > 10) throw ConfigError("unknown criterion " + std::to_string(id));
  try {
    return table[id - 1](options);
  } catch (const Error& e) {
    CriterionResult r = start(id, "criterion " + std::to_string(id));
    r.pass = false;
    r.detail = e.code() + ": " + e.what();
    r.artifact = json{{"error", e.code()}, {"message", e.what()}};
    return r;
  }
}

CriterionResult run_determinism(const AcceptanceOptions& options, const std::filesystem::path& work_dir,
                                const std::vector<int>& only) {
  namespace fs = std::filesystem;
  CriterionResult r = start(11, "selftest determinism");
  const fs::path a = work_dir / "run_a", b = work_dir / "run_b";
  fs::remove_all(a);
  fs::remove_all(b);

  auto run = [&](const fs::path& dir) {
    std::vector<std::string> args{"selftest", "--seed", std::to_string(options.seed), "--out-dir", dir.string()};
    if (!only.empty()) {
      std::string list;
      for (int id : only) list += (list.empty() ? "" : ",") + std::to_string(id);
      args.insert(args.end(), {"--only", list});
    }
    std::ostringstream out, err;
    run_cli(args, out, err);
    return out.str();
  };
  const std::string log_a = run(a);
  const std::string log_b = run(b);

  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  std::size_t count_b = 0;
  for ([[maybe_unused]] const auto& entry : fs::directory_iterator(b)) ++count_b;

  std::vector<std::string> differing;
  for (const std::string& n : names) {
    if (!fs::exists(b / n) || read_file(a / n) != read_file(b / n)) differing.push_back(n);
  }
  const bool same_log = log_a == log_b;
  r.pass = !names.empty() && count_b == names.size() && differing.empty() && same_log;
  r.detail = std::to_string(names.size()) + " artifact files compared, " + std::to_string(differing.size()) +
             " differ" + (same_log ? "" : ", console output differs");
  r.artifact = json{{"files", names}, {"differing", differing}, {"console_identical", same_log}};
  return r;
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.title + ": " + r.detail;
}

}  // namespace canonsys
