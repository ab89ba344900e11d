#pragma once

#include <string>

#include "json.hpp"

#include "canonsys/matrix2.hpp"
#include "canonsys/scalar_function.hpp"

namespace canonsys {

/// Real symmetric pi-periodic potential Q = [[q1, q], [q, q2]].
///
/// Immutable; the shape tags are computed once on construction against the
/// 64-point check grid.
class PotentialSpec {
 public:
  PotentialSpec() : PotentialSpec(ScalarFunction{}, ScalarFunction{}, ScalarFunction{}) {}
  PotentialSpec(ScalarFunction q1, ScalarFunction q2, ScalarFunction q);

  static PotentialSpec zero() { return {}; }
  static PotentialSpec constant(double q1, double q2, double q);
  /// p(z) * I.
  static PotentialSpec scalar(ScalarFunction p);
  /// Canonical form [[a, b], [b, -a]].
  static PotentialSpec canonical(ScalarFunction a, ScalarFunction b);

  const ScalarFunction& q1() const { return q1_; }
  const ScalarFunction& q2() const { return q2_; }
  const ScalarFunction& q() const { return q_; }

  Mat2 operator()(double z) const { return {q1_(z), q_(z), q_(z), q2_(z)}; }
  /// Q'(z); throws ACRequired when any entry is sampled.
  Mat2 derivative(double z) const;

  bool is_constant() const { return is_constant_; }
  bool is_scalar_identity() const { return is_scalar_identity_; }
  bool is_canonical_form() const { return is_canonical_form_; }
  bool is_absolutely_continuous() const {
    return q1_.is_absolutely_continuous() && q2_.is_absolutely_continuous() &&
           q_.is_absolutely_continuous();
  }

 private:
  ScalarFunction q1_, q2_, q_;
  bool is_constant_ = false;
  bool is_scalar_identity_ = false;
  bool is_canonical_form_ = false;
};

inline Mat2 evaluate(const PotentialSpec& spec, double z) { return spec(z); }

/// Potential z -> Q(z + tau).
PotentialSpec shift(const PotentialSpec& spec, double tau);

/// e^{2 J omega} Q for canonical-form Q; throws NotCanonicalForm otherwise.
PotentialSpec gauge_rotate(const PotentialSpec& spec, double omega);

/// Angle omega with e^{2 J omega} Q = m sigma_3, m = sqrt(a^2 + b^2), for constant
/// canonical Q = [[a, b], [b, -a]].
double diagonalizing_angle(const PotentialSpec& spec);

struct TraceSplit {
  ScalarFunction p;       ///< trace(Q)/2
  ScalarFunction h;       ///< gauge phase, h(0) = h(pi) = 0
  PotentialSpec tilde;    ///< e^{-Jh}(Q - pI)e^{Jh}, canonical form
  double shift_constant;  ///< (1/pi) int_0^pi p
};

/// Splits Q into its scalar part and a gauge-conjugated canonical part.
/// Throws ACRequired for sampled entries.
TraceSplit trace_split(const PotentialSpec& spec);

/// max over the check grid of |q| and |q1 - q2| is <= tol.
bool is_scalar_identity(const PotentialSpec& spec, double tol);
/// max over the check grid of |q1 + q2| is <= tol.
bool is_canonical_form(const PotentialSpec& spec, double tol);

// --- config format -------------------------------------------------------

nlohmann::json to_json(const ScalarFunction& f);
ScalarFunction scalar_function_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const nlohmann::json& j);
PotentialSpec load_potential(const std::string& path);

}  // namespace canonsys
