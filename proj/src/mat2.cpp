#include "szego/mat2.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace szego {

namespace {

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

bool Mat2::isFinite() const { return finite(a) && finite(b) && finite(c) && finite(d); }

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Complex det(const Mat2& x) { return x.a * x.d - x.b * x.c; }

Mat2 adjoint(const Mat2& x) {
  return {std::conj(x.a), std::conj(x.c), std::conj(x.b), std::conj(x.d)};
}

Mat2 inverse(const Mat2& x) {
  const Complex D = det(x);
  if (D == Complex{}) throw std::domain_error("inverse of a singular 2x2 matrix");
  return {x.d / D, -x.b / D, -x.c / D, x.a / D};
}

double opNorm(const Mat2& x) {
  const double F = std::norm(x.a) + std::norm(x.b) + std::norm(x.c) + std::norm(x.d);
  const double D = std::norm(det(x));
  const double disc = std::max(F * F - 4.0 * D, 0.0);
  return std::sqrt(0.5 * (F + std::sqrt(disc)));
}

double maxDistance(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                   std::abs(x.d - y.d)});
}

bool isU11(const Mat2& x, double tol) {
  const Mat2 J = Mat2::diagonal(1.0, -1.0);
  return maxDistance(adjoint(x) * J * x, J) <= tol;
}

bool isUnitary(const Mat2& x, double tol) {
  return maxDistance(adjoint(x) * x, Mat2::identity()) <= tol;
}

}  // namespace szego
