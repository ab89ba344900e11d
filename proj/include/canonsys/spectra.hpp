#pragma once

#include <string>
#include <vector>

#include "canonsys/monodromy.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"
#include "canonsys/prufer.hpp"

namespace canonsys {

/// Edges and Dirichlet anchors of the periodic component n = 2k and the
/// antiperiodic component n = 2k - 1.
struct SpectrumRow {
  long k = 0;
  double lambda_2k_minus_1 = 0.0;  ///< periodic, Delta = 2
  double lambda_2k = 0.0;
  double lambda_p_2k_minus_1 = 0.0;  ///< antiperiodic, Delta = -2
  double lambda_p_2k = 0.0;
  double mu_2k_minus_1 = 0.0, nu_2k_minus_1 = 0.0;
  double mu_2k = 0.0, nu_2k = 0.0;
  /// |Delta - 2| at the periodic edges, |Delta + 2| at the antiperiodic ones,
  /// in the order lambda_2k-1, lambda_2k, lambda'_2k-1, lambda'_2k.
  double residuals[4] = {0.0, 0.0, 0.0, 0.0};
};

struct SpectrumTable {
  long k_min = 0;
  long k_max = 0;
  std::vector<SpectrumRow> rows;
  /// lambda'_{2 k_max + 1}, closing the chain after the last row.
  double lambda_p_next = 0.0;
  /// Dirichlet anchors for n = anchor_n_min .. 2 k_max + 1.
  long anchor_n_min = 0;
  std::vector<DirichletEigenvalue> mu;
  std::vector<DirichletEigenvalue> nu;
  /// Largest amount by which any link of the ordering chain is violated (0 if none).
  double chain_violation = 0.0;
  bool interlacing_ok = true;
};

inline constexpr double kChainSlack = 1e-8;
inline constexpr double kCollapsedWidth = 1e-8;

/// Periodic and antiperiodic edges for k = k_min..k_max. Each edge is the root of
/// (-1)^n Delta - 2 bracketed between consecutive Dirichlet anchors. Throws
/// IndexingViolation when the assembled ordering chain fails beyond kChainSlack.
SpectrumTable band_edges(const PotentialSpec& spec, long k_min, long k_max,
                         const IntegratorOptions& options = {}, Exec exec = Exec::Parallel);

enum class EdgeParity { Periodic, Antiperiodic };

const char* to_string(EdgeParity p);

struct InstabilityInterval {
  long j = 0;
  double lo = 0.0;
  double hi = 0.0;
  double width = 0.0;
  EdgeParity parity = EdgeParity::Periodic;
};

/// (lambda'_2k-1, lambda'_2k) as j = 2k - 1 and (lambda_2k-1, lambda_2k) as j = 2k,
/// ordered by j. Empty gaps are kept with width 0.
std::vector<InstabilityInterval> instability_intervals(const SpectrumTable& table);

/// True iff |Delta -/+ 2| <= tol and ||Y(pi) -/+ I||_max <= tol, with parity +1
/// comparing against I and -1 against -I.
bool detect_double(const PotentialSpec& spec, double lambda, int parity, double tol,
                   const IntegratorOptions& options = {});

struct ShiftExtremum {
  long k = 0;
  EdgeParity parity = EdgeParity::Periodic;
  long n = 0;  ///< index of the mu curve
  double edge_lo = 0.0;
  double edge_hi = 0.0;
  double min_mu = 0.0;
  double max_mu = 0.0;
  double argmin_tau = 0.0;
  double argmax_tau = 0.0;
  double slope_bound = 0.0;
  double tolerance = 0.0;  ///< slope_bound * pi / samples + 1e-6
  double err_min = 0.0;
  double err_max = 0.0;
  bool continuous = true;
  bool skipped = false;  ///< k = 0 periodic row: computed and reported only
  bool ok = true;
  std::string note;
};

struct ShiftExtremaReport {
  std::size_t tau_samples = 0;
  std::vector<ShiftExtremum> rows;
  bool all_ok = true;
};

/// Compares min/max over tau of mu_2k(tau) with (lambda_2k-1, lambda_2k) and of
/// mu_2k-1(tau) with (lambda'_2k-1, lambda'_2k), for every row of `table`.
/// Uniform tau grid plus one 3x refinement around each observed extremum.
ShiftExtremaReport verify_shift_extrema(const PotentialSpec& spec, const SpectrumTable& table,
                                        std::size_t tau_samples = 64,
                                        const IntegratorOptions& options = {},
                                        Exec exec = Exec::Parallel);
ShiftExtremaReport verify_shift_extrema(const PotentialSpec& spec, long k_min, long k_max,
                                        std::size_t tau_samples = 64,
                                        const IntegratorOptions& options = {},
                                        Exec exec = Exec::Parallel);

}  // namespace canonsys
