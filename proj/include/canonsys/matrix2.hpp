#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace canonsys {

/// Real 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }

  constexpr double trace() const { return a11 + a22; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 transpose() const { return {a11, a21, a12, a22}; }

  constexpr Mat2& operator+=(const Mat2& o) {
    a11 += o.a11; a12 += o.a12; a21 += o.a21; a22 += o.a22;
    return *this;
  }
  constexpr Mat2& operator-=(const Mat2& o) {
    a11 -= o.a11; a12 -= o.a12; a21 -= o.a21; a22 -= o.a22;
    return *this;
  }
  constexpr Mat2& operator*=(double s) {
    a11 *= s; a12 *= s; a21 *= s; a22 *= s;
    return *this;
  }

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
constexpr Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
constexpr Mat2 operator-(const Mat2& a) { return {-a.a11, -a.a12, -a.a21, -a.a22}; }
constexpr Mat2 operator*(Mat2 a, double s) { return a *= s; }
constexpr Mat2 operator*(double s, Mat2 a) { return a *= s; }
constexpr Mat2 operator/(Mat2 a, double s) { return a *= (1.0 / s); }

constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
          a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
}

/// Symplectic unit J = [[0,1],[-1,0]]; J^2 = -I.
inline constexpr Mat2 kJ{0.0, 1.0, -1.0, 0.0};
inline constexpr Mat2 kSigma1{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 kSigma3{1.0, 0.0, 0.0, -1.0};

/// e^{tJ} = cos(t) I + sin(t) J.
inline Mat2 exp_j(double t) {
  const double c = std::cos(t), s = std::sin(t);
  return {c, s, -s, c};
}

/// Column-max Euclidean norm max_j sqrt(sum_i |c_ij|^2).
inline double column_norm(const Mat2& m) {
  return std::max(std::hypot(m.a11, m.a21), std::hypot(m.a12, m.a22));
}

inline double max_abs(const Mat2& m) {
  return std::max(std::max(std::abs(m.a11), std::abs(m.a12)),
                  std::max(std::abs(m.a21), std::abs(m.a22)));
}

}  // namespace canonsys
