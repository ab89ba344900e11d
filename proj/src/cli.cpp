#include "canonsys/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "canonsys/acceptance.hpp"
#include "canonsys/asymptotics.hpp"
#include "canonsys/errors.hpp"
#include "canonsys/inverse.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"
#include "canonsys/prufer.hpp"
#include "canonsys/random_potential.hpp"
#include "canonsys/spectra.hpp"
#include "canonsys/sweep.hpp"

namespace canonsys {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Common {
  std::string potential;
  std::string output;
  std::uint64_t seed = 0;
  int threads = 0;
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;

  IntegratorOptions integrator() const {
    IntegratorOptions o;
    o.rel_tol = rel_tol;
    o.abs_tol = abs_tol;
    return o;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--potential", c.potential,
                  "Potential config (JSON), or random:general / random:canonical drawn from --seed")
      ->required();
  sub->add_option("--output,-o", c.output, "Output file (default: stdout)");
  sub->add_option("--seed", c.seed, "Seed for random:* potentials")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker cap, 0 = OpenMP default")->capture_default_str();
  sub->add_option("--rtol", c.rel_tol, "Integrator relative tolerance")->capture_default_str();
  sub->add_option("--atol", c.abs_tol, "Integrator absolute tolerance")->capture_default_str();
}

PotentialSpec resolve_potential(const Common& c) {
  if (c.potential == "random:general") return random_potential(c.seed);
  if (c.potential == "random:canonical") return random_canonical_potential(c.seed);
  return load_potential(c.potential);
}

json base_config(const std::string& command, const Common& c, const PotentialSpec& spec) {
  return json{{"command", command},   {"potential_source", c.potential},
              {"potential", to_json(spec)}, {"seed", c.seed},
              {"threads", c.threads}, {"rel_tol", c.rel_tol},
              {"abs_tol", c.abs_tol}};
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
      return;
    }
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw IOError("cannot open output file: " + path);
    os_ = &file_;
  }
  std::ostream& os() { return *os_; }
  bool is_file() const { return os_ == &file_; }
  void finish() {
    os_->flush();
    if (!*os_) throw IOError("write failed: " + (is_file() ? path_ : std::string("stdout")));
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

void csv_header(std::ostream& os, const json& config, const std::vector<std::string>& columns) {
  os << "# " << config.dump() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

json to_json(const SpectrumRow& r) {
  return json{{"k", r.k},
              {"lambda_2k_minus_1", r.lambda_2k_minus_1},
              {"lambda_2k", r.lambda_2k},
              {"lambda_p_2k_minus_1", r.lambda_p_2k_minus_1},
              {"lambda_p_2k", r.lambda_p_2k},
              {"mu_2k_minus_1", r.mu_2k_minus_1},
              {"nu_2k_minus_1", r.nu_2k_minus_1},
              {"mu_2k", r.mu_2k},
              {"nu_2k", r.nu_2k},
              {"residuals", {r.residuals[0], r.residuals[1], r.residuals[2], r.residuals[3]}}};
}

json to_json(const InstabilityInterval& g) {
  return json{{"j", g.j}, {"lo", g.lo}, {"hi", g.hi}, {"width", g.width}, {"parity", to_string(g.parity)}};
}

json to_json(const ShiftExtremaReport& rep) {
  json rows = json::array();
  for (const ShiftExtremum& e : rep.rows) {
    rows.push_back(json{{"k", e.k},
                        {"parity", to_string(e.parity)},
                        {"n", e.n},
                        {"edge_lo", e.edge_lo},
                        {"edge_hi", e.edge_hi},
                        {"min_mu", e.min_mu},
                        {"max_mu", e.max_mu},
                        {"argmin_tau", e.argmin_tau},
                        {"argmax_tau", e.argmax_tau},
                        {"slope_bound", e.slope_bound},
                        {"tolerance", e.tolerance},
                        {"err_min", e.err_min},
                        {"err_max", e.err_max},
                        {"continuous", e.continuous},
                        {"skipped", e.skipped},
                        {"ok", e.ok},
                        {"note", e.note}});
  }
  return json{{"tau_samples", rep.tau_samples}, {"all_ok", rep.all_ok}, {"rows", rows}};
}

// --- subcommands -----------------------------------------------------------

struct DiscriminantArgs {
  double lambda_min = 0.0, lambda_max = 0.0;
  std::size_t samples = 0;
  bool derivative = false;
};

int cmd_discriminant(const Common& c, const DiscriminantArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("discriminant", c, spec);
  config.update({{"lambda_min", a.lambda_min}, {"lambda_max", a.lambda_max},
                 {"samples", a.samples}, {"derivative", a.derivative}});
  const auto rows = discriminant_sweep(spec, linspace(a.lambda_min, a.lambda_max, a.samples),
                                       a.derivative, c.integrator());
  Sink sink(c.output, out);
  std::ostream& os = sink.os();
  std::vector<std::string> cols{"lambda", "delta"};
  if (a.derivative) cols.push_back("delta_prime");
  cols.insert(cols.end(), {"y11", "y12", "y21", "y22", "stability"});
  csv_header(os, config, cols);
  for (const SweepRow& r : rows) {
    os << num(r.m.lambda) << ',' << num(r.m.delta);
    if (a.derivative) os << ',' << num(r.delta_prime);
    os << ',' << num(r.m.y11()) << ',' << num(r.m.y12()) << ',' << num(r.m.y21()) << ','
       << num(r.m.y22()) << ',' << to_string(r.stability) << '\n';
  }
  sink.finish();
  return kExitOk;
}

struct EigsArgs {
  std::string kind = "mu";
  long n_min = 0, n_max = 0;
};

int cmd_eigs(const Common& c, const EigsArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("eigs", c, spec);
  config.update({{"kind", a.kind}, {"n_min", a.n_min}, {"n_max", a.n_max}});
  const DirichletKind kind = a.kind == "nu" ? DirichletKind::Nu : DirichletKind::Mu;
  const auto eigs = dirichlet_eigenvalues(spec, kind, a.n_min, a.n_max, c.integrator());
  Sink sink(c.output, out);
  csv_header(sink.os(), config, {"n", "kind", "value", "residual"});
  for (const DirichletEigenvalue& e : eigs) {
    sink.os() << e.n << ',' << to_string(e.kind) << ',' << num(e.value) << ',' << num(e.residual) << '\n';
  }
  sink.finish();
  return kExitOk;
}

struct ShiftScanArgs {
  long n = 0;
  std::size_t tau_samples = 64;
};

int cmd_shift_scan(const Common& c, const ShiftScanArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("shift-scan", c, spec);
  config.update({{"n", a.n}, {"tau_samples", a.tau_samples}});
  const MuCurve curve = shifted_mu_curve(spec, a.n, tau_grid(a.tau_samples), c.integrator());
  Sink sink(c.output, out);
  csv_header(sink.os(), config, {"tau", "mu_n_tau"});
  for (const MuCurvePoint& p : curve.points) sink.os() << num(p.tau) << ',' << num(p.mu) << '\n';
  sink.finish();
  return kExitOk;
}

struct BandsArgs {
  long k_min = 0, k_max = 0;
  std::size_t tau_samples = 0;
};

int cmd_bands(const Common& c, const BandsArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("bands", c, spec);
  config.update({{"k_min", a.k_min}, {"k_max", a.k_max}, {"tau_samples", a.tau_samples}});
  const IntegratorOptions opts = c.integrator();
  const SpectrumTable table = band_edges(spec, a.k_min, a.k_max, opts);

  json edges = json::array();
  for (const SpectrumRow& r : table.rows) edges.push_back(to_json(r));
  json gaps = json::array();
  for (const InstabilityInterval& g : instability_intervals(table)) gaps.push_back(to_json(g));

  json doc{{"config", config},
           {"edges", edges},
           {"gaps", gaps},
           {"interlacing_ok", table.interlacing_ok},
           {"chain_violation", table.chain_violation},
           {"lambda_p_next", table.lambda_p_next},
           {"shift_extrema", nullptr}};
  if (a.tau_samples > 0) {
    doc["shift_extrema"] = to_json(verify_shift_extrema(spec, table, a.tau_samples, opts));
  }
  Sink sink(c.output, out);
  sink.os() << doc.dump(2) << '\n';
  sink.finish();
  return kExitOk;
}

struct AsymArgs {
  std::vector<double> lambdas;
  std::string summary;
};

int cmd_asym(const Common& c, const AsymArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("asym-check", c, spec);
  config.update({{"lambdas", a.lambdas}});
  const DecayReport r = remainder_decay_check(spec, a.lambdas, c.integrator());

  json summary{{"slope_full", r.slope_full},
               {"slope_coarse", r.slope_coarse},
               {"exact_full", r.exact_full},
               {"exact_coarse", r.exact_coarse},
               {"ok_full", r.ok_full},
               {"ok_coarse", r.ok_coarse},
               {"scaled_spread_full", r.scaled_spread_full},
               {"slope_bound_full", kFullSlopeBound},
               {"slope_bound_coarse", kCoarseSlopeBound}};

  Sink sink(c.output, out);
  csv_header(sink.os(), config, {"lambda", "err_full", "err_coarse"});
  for (std::size_t i = 0; i < r.lambdas.size(); ++i) {
    sink.os() << num(r.lambdas[i]) << ',' << num(r.err_full[i]) << ',' << num(r.err_coarse[i]) << '\n';
  }
  std::string summary_path = a.summary;
  if (summary_path.empty() && sink.is_file()) summary_path = c.output + ".summary.json";
  if (summary_path.empty()) {
    sink.os() << "# summary: " << summary.dump() << '\n';
  } else {
    Sink s(summary_path, out);
    s.os() << summary.dump(2) << '\n';
    s.finish();
  }
  sink.finish();
  return kExitOk;
}

struct InverseArgs {
  long n_gaps = 8;
  double tol = 1e-6;
};

int cmd_inverse(const Common& c, const InverseArgs& a, std::ostream& out) {
  const PotentialSpec spec = resolve_potential(c);
  json config = base_config("inverse-check", c, spec);
  config.update({{"n_gaps", a.n_gaps}, {"tol", a.tol}});
  const IntegratorOptions opts = c.integrator();
  const ContrapositiveResult res = contrapositive_check(spec, a.n_gaps, a.tol, opts);
  const GapReport& rep = res.report;

  json table = json::array();
  for (const InstabilityInterval& g : rep.gaps) table.push_back(to_json(g));
  json oracles = json::array();
  for (const OracleResidual& o : oracle_residuals(spec, opts)) {
    oracles.push_back(json{{"name", o.name}, {"max_residual", o.max_residual}, {"samples", o.samples}});
  }
  json verdict{{"kind", to_string(rep.verdict)}, {"tol", rep.tol}};
  if (rep.verdict == GapVerdict::GapFound) verdict.update({{"j", rep.gap_index}, {"width", rep.gap_width}});

  json doc{{"config", config},
           {"verdict", verdict},
           {"contrapositive", to_string(res.verdict)},
           {"max_width", rep.max_width},
           {"gap_table", table},
           {"potential_class", to_string(rep.potential_class)},
           {"oracle_residuals", oracles}};
  Sink sink(c.output, out);
  sink.os() << doc.dump(2) << '\n';
  sink.finish();
  return kExitOk;
}

struct SelftestArgs {
  std::uint64_t seed = kDefaultSeed;
  std::string out_dir = "selftest-artifacts";
  std::vector<int> only;
  int threads = 0;
};

int cmd_selftest(const SelftestArgs& a, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(a.out_dir, ec);
  if (ec) throw IOError("cannot create " + a.out_dir + ": " + ec.message());

  std::vector<int> ids = a.only.empty() ? numeric_criteria() : a.only;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const std::vector<int> known = numeric_criteria();
  for (int id : ids) {
    if (std::find(known.begin(), known.end(), id) == known.end()) {
      throw ConfigError("selftest runs criteria 1-10; criterion " + std::to_string(id) +
                        " is checked by the acceptance binary");
    }
  }

  AcceptanceOptions opts;
  opts.seed = a.seed;
  json summary_rows = json::array();
  bool all = true;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, opts);
    out << format_result(r) << '\n';
    all = all && r.pass;
    char name[32];
    std::snprintf(name, sizeof name, "criterion_%02d.json", id);
    Sink sink((fs::path(a.out_dir) / name).string(), out);
    sink.os() << json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail},
                      {"artifact", r.artifact}}
                     .dump(2)
              << '\n';
    sink.finish();
    summary_rows.push_back(json{{"id", r.id}, {"title", r.title}, {"pass", r.pass}});
  }
  Sink sink((fs::path(a.out_dir) / "summary.json").string(), out);
  sink.os() << json{{"seed", a.seed}, {"criteria", summary_rows}, {"all_pass", all}}.dump(2) << '\n';
  sink.finish();
  if (!all) {
    err << json{{"error", "AcceptanceFailure"}, {"message", "one or more criteria failed"}}.dump() << '\n';
    return kExitDomainError;
  }
  return kExitOk;
}

const char* kDiscriminantFooter =
    "CSV columns: lambda, delta = trace Y(pi), delta_prime (with --derivative, from the Gram\n"
    "integral identity), y11 y12 y21 y22 (y_ij = component j of column solution i at pi),\n"
    "stability (stable | unstable | boundary, tol 1e-9).";
const char* kEigsFooter =
    "CSV columns: n, kind (mu | nu), value (the eigenvalue), residual (|theta(pi) - target|).";
const char* kShiftFooter = "CSV columns: tau (uniform in [0, pi)), mu_n_tau (mu_n of Q(. + tau)).";
const char* kBandsFooter =
    "JSON keys: edges (per k: periodic pair lambda_2k-1, lambda_2k; antiperiodic pair\n"
    "lambda_p_2k-1, lambda_p_2k; Dirichlet anchors; edge residuals), gaps ({j, lo, hi, width,\n"
    "parity}), interlacing_ok, chain_violation, lambda_p_next, shift_extrema (null unless\n"
    "--tau-samples > 0).";
const char* kAsymFooter =
    "CSV columns: lambda, err_full (column norm of Y(pi) minus the full expansion), err_coarse\n"
    "(same for the coarse expansion). The summary JSON holds the log-log slopes.";
const char* kInverseFooter =
    "JSON keys: verdict {kind, tol, j, width}, contrapositive, max_width, gap_table,\n"
    "potential_class, oracle_residuals.";

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of periodic 2x2 canonical systems J Y' + Q Y = lambda Y", "canonsys"};
  app.require_subcommand(1);
  app.fallthrough(false);

  Common common;
  DiscriminantArgs disc;
  auto* s_disc = app.add_subcommand("discriminant", "Delta(lambda), monodromy entries and stability");
  add_common(s_disc, common);
  s_disc->add_option("--lambda-min", disc.lambda_min, "First lambda")->required();
  s_disc->add_option("--lambda-max", disc.lambda_max, "Last lambda")->required();
  s_disc->add_option("--samples", disc.samples, "Number of equispaced lambdas")
      ->required()
      ->check(CLI::PositiveNumber);
  s_disc->add_flag("--derivative", disc.derivative, "Add the delta_prime column");
  s_disc->footer(kDiscriminantFooter);

  EigsArgs eigs;
  auto* s_eigs = app.add_subcommand("eigs", "Dirichlet-type eigenvalues mu_n or nu_n");
  add_common(s_eigs, common);
  s_eigs->add_option("--kind", eigs.kind, "mu or nu")->required()->check(CLI::IsMember({"mu", "nu"}));
  s_eigs->add_option("--n-min", eigs.n_min, "First index")->required();
  s_eigs->add_option("--n-max", eigs.n_max, "Last index")->required();
  s_eigs->footer(kEigsFooter);

  ShiftScanArgs scan;
  auto* s_scan = app.add_subcommand("shift-scan", "mu_n of the shifted potential across tau");
  add_common(s_scan, common);
  s_scan->add_option("--n", scan.n, "Index n")->required();
  s_scan->add_option("--tau-samples", scan.tau_samples, "Uniform tau samples in [0, pi)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
  s_scan->footer(kShiftFooter);

  BandsArgs bands;
  auto* s_bands = app.add_subcommand("bands", "Band edges, instability intervals, shift extrema");
  add_common(s_bands, common);
  s_bands->add_option("--k-min", bands.k_min, "First k")->required();
  s_bands->add_option("--k-max", bands.k_max, "Last k")->required();
  s_bands->add_option("--tau-samples", bands.tau_samples, "Tau samples for the extremum check (0 = skip)")
      ->capture_default_str();
  s_bands->footer(kBandsFooter);

  AsymArgs asym;
  auto* s_asym = app.add_subcommand("asym-check", "Large-lambda expansion remainders (canonical form)");
  add_common(s_asym, common);
  s_asym->add_option("--lambdas", asym.lambdas, "Comma-separated lambdas, |lambda| >= 10")
      ->required()
      ->delimiter(',');
  s_asym->add_option("--summary", asym.summary,
                     "Summary JSON path (default <output>.summary.json, or a trailing '# summary:' line on stdout)");
  s_asym->footer(kAsymFooter);

  InverseArgs inv;
  auto* s_inv = app.add_subcommand("inverse-check", "Gap vanishing report and scalar-identity diagnostic");
  add_common(s_inv, common);
  s_inv->add_option("--n-gaps", inv.n_gaps, "Gap index range [-N, N]")->capture_default_str();
  s_inv->add_option("--tol", inv.tol, "Width below which a gap counts as vanished")->capture_default_str();
  s_inv->footer(kInverseFooter);

  SelftestArgs self;
  auto* s_self = app.add_subcommand("selftest", "Run acceptance criteria 1-10 and write artifacts");
  s_self->add_option("--seed", self.seed, "Seed for the random potentials")->capture_default_str();
  s_self->add_option("--out-dir", self.out_dir, "Artifact directory")->capture_default_str();
  s_self->add_option("--only", self.only, "Comma-separated criterion ids")->delimiter(',');
  s_self->add_option("--threads", self.threads, "Worker cap, 0 = OpenMP default")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  struct ThreadCap {
    explicit ThreadCap(int n) { set_thread_cap(n); }
    ~ThreadCap() { set_thread_cap(0); }
  };

  try {
    if (*s_self) {
      ThreadCap cap(self.threads);
      return cmd_selftest(self, out, err);
    }
    ThreadCap cap(common.threads);
    if (*s_disc) return cmd_discriminant(common, disc, out);
    if (*s_eigs) return cmd_eigs(common, eigs, out);
    if (*s_scan) return cmd_shift_scan(common, scan, out);
    if (*s_bands) return cmd_bands(common, bands, out);
    if (*s_asym) return cmd_asym(common, asym, out);
    if (*s_inv) return cmd_inverse(common, inv, out);
  } catch (const Error& e) {
    err << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace canonsys
