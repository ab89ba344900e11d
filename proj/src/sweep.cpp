#include "canonsys/sweep.hpp"

namespace canonsys {

namespace {

SweepRow evaluate_row(const PotentialSpec& spec, double lambda, bool derivative,
                      const IntegratorOptions& options) {
  SweepRow row;
  if (derivative) {
    const DiscriminantDerivative d = discriminant_derivative(spec, lambda, options);
    row.m = d.monodromy;
    row.has_derivative = true;
    row.delta_prime = d.value;
  } else {
    row.m = monodromy(spec, lambda, options);
  }
  row.stability = classify_stability(row.m.delta, kStabilityTol);
  return row;
}

}  // namespace

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<SweepRow> discriminant_sweep(const PotentialSpec& spec, const std::vector<double>& lambdas,
                                         bool derivative, const IntegratorOptions& options,
                                         Exec exec) {
  std::vector<SweepRow> out(lambdas.size());
  parallel_for(lambdas.size(), exec,
               [&](std::size_t i) { out[i] = evaluate_row(spec, lambdas[i], derivative, options); });
  return out;
}

std::vector<SweepRow> discriminant_sweep_serial(const PotentialSpec& spec,
                                                const std::vector<double>& lambdas, bool derivative,
                                                const IntegratorOptions& options) {
  std::vector<SweepRow> out;
  out.reserve(lambdas.size());
  for (double l : lambdas) out.push_back(evaluate_row(spec, l, derivative, options));
  return out;
}

}  // namespace canonsys
