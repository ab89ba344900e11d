#pragma once

#include <vector>

#include "canonsys/monodromy.hpp"
#include "canonsys/parallel.hpp"
#include "canonsys/potential.hpp"

namespace canonsys {

struct SweepRow {
  Monodromy m;
  bool has_derivative = false;
  double delta_prime = 0.0;
  Stability stability = Stability::Stable;
};

inline constexpr double kStabilityTol = 1e-9;

/// n equispaced values from a to b inclusive (just a when n == 1).
std::vector<double> linspace(double a, double b, std::size_t n);

/// Monodromy (and optionally d Delta / d lambda) at every lambda.
std::vector<SweepRow> discriminant_sweep(const PotentialSpec& spec, const std::vector<double>& lambdas,
                                         bool derivative, const IntegratorOptions& options = {},
                                         Exec exec = Exec::Parallel);
std::vector<SweepRow> discriminant_sweep_serial(const PotentialSpec& spec,
                                                const std::vector<double>& lambdas, bool derivative,
                                                const IntegratorOptions& options = {});

}  // namespace canonsys
