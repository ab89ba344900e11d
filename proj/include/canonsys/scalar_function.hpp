#pragma once

#include <functional>
#include <memory>
#include <numbers>
#include <variant>
#include <vector>

namespace canonsys {

inline constexpr double kPi = std::numbers::pi;

/// a0 + sum_k a_k cos(2kz) + b_k sin(2kz), k = 1..degree. Period pi.
struct TrigPoly {
  double a0 = 0.0;
  std::vector<double> cos_coeffs;  // a_1..a_K
  std::vector<double> sin_coeffs;  // b_1..b_K

  std::size_t degree() const;
  double operator()(double z) const;
  double derivative(double z) const;
  /// Value at z + tau, as a new polynomial of the same degree.
  TrigPoly shifted(double tau) const;
  /// Antiderivative minus its linear part: returns g with g' = f - a0, g(0) = 0.
  TrigPoly periodic_antiderivative() const;
  /// int_0^z f(t) dt.
  double integral_from_zero(double z) const;

  friend TrigPoly operator*(const TrigPoly& f, const TrigPoly& g);
  friend TrigPoly combine(double alpha, const TrigPoly& f, double beta, const TrigPoly& g);
  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;
};

/// Values on the periodic grid z_i = i*pi/n (i = 0..n-1), linearly interpolated,
/// read at z + offset.
struct SampledGrid {
  std::vector<double> values;
  double offset = 0.0;

  double operator()(double z) const;
  friend bool operator==(const SampledGrid&, const SampledGrid&) = default;
};

/// Smooth function given by closures; produced internally by gauge transforms
/// with z-dependent phase. Not serializable.
struct ComposedFunction {
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

/// A real pi-periodic scalar function.
class ScalarFunction {
 public:
  enum class Kind { Constant, TrigPoly, Samples, Composed };

  ScalarFunction() : rep_(0.0) {}
  static ScalarFunction constant(double c);
  static ScalarFunction trig(TrigPoly p);
  static ScalarFunction trig(double a0, std::vector<double> cos_coeffs,
                             std::vector<double> sin_coeffs);
  static ScalarFunction samples(std::vector<double> values, double offset = 0.0);
  static ScalarFunction composed(std::function<double(double)> value,
                                 std::function<double(double)> slope);

  Kind kind() const;
  double operator()(double z) const;
  /// f'(z). Throws ACRequired for sampled functions.
  double derivative(double z) const;
  ScalarFunction shifted(double tau) const;

  /// Sampled functions are only a piecewise-linear surrogate; everything else is AC.
  bool is_absolutely_continuous() const { return kind() != Kind::Samples; }
  /// Exact (to rounding) constancy test; only constants qualify.
  bool is_constant() const { return kind() == Kind::Constant; }

  /// (1/pi) int_0^pi f.
  double mean() const;
  /// int_0^z f for z in [0, pi]. Exact for constant, trig and sampled kinds.
  double integral_from_zero(double z) const;

  /// Trig-poly view of a constant or trig function; nullptr otherwise.
  const TrigPoly* as_trig() const { return std::get_if<TrigPoly>(&rep_); }
  const SampledGrid* as_samples() const { return std::get_if<SampledGrid>(&rep_); }
  double constant_value() const { return std::get<double>(rep_); }
  /// Constant or trig promoted to TrigPoly. Throws for other kinds.
  TrigPoly to_trig() const;

  /// alpha*f + beta*g, staying in the narrowest representation that can hold it.
  friend ScalarFunction combine(double alpha, const ScalarFunction& f, double beta,
                                const ScalarFunction& g);

  friend bool operator==(const ScalarFunction& a, const ScalarFunction& b);

 private:
  explicit ScalarFunction(std::variant<double, TrigPoly, SampledGrid,
                                       std::shared_ptr<const ComposedFunction>> rep)
      : rep_(std::move(rep)) {}

  std::variant<double, TrigPoly, SampledGrid, std::shared_ptr<const ComposedFunction>> rep_;
};

/// 64 equispaced points in [0, pi) used by pointwise predicates.
std::vector<double> check_grid(std::size_t n = 64);

}  // namespace canonsys
