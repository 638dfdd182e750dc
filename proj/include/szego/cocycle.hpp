#pragma once

#include <cstdint>

#include "szego/dynamics.hpp"
#include "szego/mat2.hpp"

namespace szego {

/// Point z of the unit circle together with one fixed branch of z^{1/2}
/// (principal, argument in (-pi, pi]).
class SpectralParameter {
 public:
  /// Requires ||z| - 1| <= 1e-12; z is then projected onto the circle.
  explicit SpectralParameter(Complex z);

  /// z = e^{2 pi i t}.
  static SpectralParameter fromTurns(double t);

  Complex z() const { return z_; }
  Complex sqrtZ() const { return sqrtZ_; }

 private:
  Complex z_;
  Complex sqrtZ_;
};

/// Selects the one-step kernel. `flippedNormalization` replaces the (1-|f|^2)^{-1/2}
/// prefactor by (1-|f|^2)^{+1/2}; it exists only so that verification harnesses
/// can be shown to reject a broken cocycle.
enum class KernelVariant { standard, flippedNormalization };

/// (1 - |f|^2)^{-1/2} [[z, -conj f], [-f z, 1]].
/// Throws DegenerateCoefficientError when 1 - |f|^2 is not a positive double.
Mat2 szegoMatrix(Complex f, const SpectralParameter& s,
                 KernelVariant kernel = KernelVariant::standard);

/// Swap matrix for j = 0, diag(z^{1/2}, z^{-1/2}) for j = 1.
Mat2 conjugator(PhasePoint p, const SpectralParameter& s);

/// Closed form of C(theta, j) A(theta, j) C(theta, j-1)^{-1} for the exponential family:
///   (z^{1/2}/eps) [[-s e^{2 pi i k theta}, z^j], [z^{-j}, -s e^{-2 pi i k theta}]].
Mat2 conjugatedStep(PhasePoint p, const SpectralParameter& s, const ExpGenerator& g);

/// Running product rescaled to unit norm after every factor; the stripped scale is
/// kept in `logNorm`, so log||A_n|| = logNorm + log(opNorm(current)).
struct ProductAccumulator {
  Mat2 current = Mat2::identity();
  double logNorm = 0.0;
  std::int64_t steps = 0;

  double logOpNorm() const;
};

/// Left-multiplies `m` into the product and renormalizes.
/// Throws NumericalBlowupError on non-finite or vanishing products.
ProductAccumulator accumulate(ProductAccumulator acc, const Mat2& m);
void accumulateInPlace(ProductAccumulator& acc, const Mat2& m);

/// A^z(T^{n-1} p0) ... A^z(p0), newest factor on the left.
template <CoefficientSource G>
ProductAccumulator orbitProduct(PhasePoint p0, const Rotation& r, const G& g,
                                const SpectralParameter& s, std::int64_t n,
                                KernelVariant kernel = KernelVariant::standard);

ProductAccumulator orbitProduct(PhasePoint p0, const Rotation& r, const Generator& g,
                                const SpectralParameter& s, std::int64_t n,
                                KernelVariant kernel = KernelVariant::standard);

/// Same product assembled as C(T^{n-1} p0)^{-1} [prod of conjugatedStep] C(p0 with j-1).
ProductAccumulator conjugatedOrbitProduct(PhasePoint p0, const Rotation& r,
                                          const ExpGenerator& g, const SpectralParameter& s,
                                          std::int64_t n);

// ---------------------------------------------------------------------------

template <CoefficientSource G>
ProductAccumulator orbitProduct(PhasePoint p0, const Rotation& r, const G& g,
                                const SpectralParameter& s, std::int64_t n,
                                KernelVariant kernel) {
  ProductAccumulator acc;
  OrbitWalker walker(p0, r);
  for (std::int64_t m = 0; m < n; ++m) {
    accumulateInPlace(acc, szegoMatrix(g(walker.point()), s, kernel));
    walker.advance();
  }
  return acc;
}

}  // namespace szego
