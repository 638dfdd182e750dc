#pragma once

#include <complex>

namespace szego {

using Complex = std::complex<double>;

/// Complex 2x2 matrix, row-major entries [[a, b], [c, d]].
struct Mat2 {
  Complex a{}, b{}, c{}, d{};

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 diagonal(Complex x, Complex y) { return {x, 0.0, 0.0, y}; }
  static constexpr Mat2 swap() { return {0.0, 1.0, 1.0, 0.0}; }

  bool isFinite() const;

  friend Mat2 operator*(Complex s, const Mat2& m) {
    return {s * m.a, s * m.b, s * m.c, s * m.d};
  }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 mul(const Mat2& x, const Mat2& y);
inline Mat2 operator*(const Mat2& x, const Mat2& y) { return mul(x, y); }

Complex det(const Mat2& x);

/// Conjugate transpose.
Mat2 adjoint(const Mat2& x);

/// Throws std::domain_error when det(x) == 0.
Mat2 inverse(const Mat2& x);

/// Largest singular value from the closed-form 2x2 formula
///   sigma_max^2 = (F + sqrt(max(F^2 - 4|det|^2, 0))) / 2,  F = sum |entry|^2.
double opNorm(const Mat2& x);

/// Entrywise max-modulus distance.
double maxDistance(const Mat2& x, const Mat2& y);

/// x* J x == J within `tol` in max norm, J = diag(1, -1).
bool isU11(const Mat2& x, double tol);

/// x* x == I within `tol` in max norm.
bool isUnitary(const Mat2& x, double tol);

}  // namespace szego
