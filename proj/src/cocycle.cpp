#include "szego/cocycle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "szego/errors.hpp"

namespace szego {

SpectralParameter::SpectralParameter(Complex z) {
  const double r = std::abs(z);
  if (!(std::abs(r - 1.0) <= 1e-12))
    throw InvalidParameter("spectral parameter must lie on the unit circle, |z| = " +
                           std::to_string(r));
  z_ = z / r;
  double arg = std::arg(z_);
  if (arg <= -std::numbers::pi) arg = std::numbers::pi;
  sqrtZ_ = std::polar(1.0, 0.5 * arg);
}

SpectralParameter SpectralParameter::fromTurns(double t) {
  return SpectralParameter(std::polar(1.0, kTwoPi * frac(t)));
}

Mat2 szegoMatrix(Complex f, const SpectralParameter& s, KernelVariant kernel) {
  const double gap = 1.0 - std::norm(f);
  if (!(gap > 0.0) || !std::isfinite(gap))
    throw DegenerateCoefficientError("1 - |f|^2 is not positive for |f| = " +
                                     std::to_string(std::abs(f)));
  const double scale =
      kernel == KernelVariant::standard ? 1.0 / std::sqrt(gap) : std::sqrt(gap);
  const Complex z = s.z();
  return {scale * z, -scale * std::conj(f), -scale * f * z, scale};
}

Mat2 conjugator(PhasePoint p, const SpectralParameter& s) {
  if (p.j == 0) return Mat2::swap();
  return Mat2::diagonal(s.sqrtZ(), std::conj(s.sqrtZ()));
}

Mat2 conjugatedStep(PhasePoint p, const SpectralParameter& s, const ExpGenerator& g) {
  const Complex phase = std::polar(1.0, kTwoPi * frac(g.k() * p.theta));
  const Complex zj = p.j == 0 ? Complex{1.0} : s.z();
  const Complex pre = s.sqrtZ() / g.epsilon();
  return pre * Mat2{-g.modulus() * phase, zj, std::conj(zj), -g.modulus() * std::conj(phase)};
}

double ProductAccumulator::logOpNorm() const { return logNorm + std::log(opNorm(current)); }

void accumulateInPlace(ProductAccumulator& acc, const Mat2& m) {
  Mat2 next = m * acc.current;
  const double norm = opNorm(next);
  if (!next.isFinite() || !std::isfinite(norm) || !(norm > 0.0))
    throw NumericalBlowupError("running product became non-finite or zero after " +
                               std::to_string(acc.steps) + " steps");
  const double inv = 1.0 / norm;
  acc.current = Complex{inv} * next;
  acc.logNorm += std::log(norm);
  ++acc.steps;
}

ProductAccumulator accumulate(ProductAccumulator acc, const Mat2& m) {
  accumulateInPlace(acc, m);
  return acc;
}

ProductAccumulator orbitProduct(PhasePoint p0, const Rotation& r, const Generator& g,
                                const SpectralParameter& s, std::int64_t n,
                                KernelVariant kernel) {
  return std::visit(
      [&](const auto& gen) { return orbitProduct(p0, r, gen, s, n, kernel); }, g);
}

ProductAccumulator conjugatedOrbitProduct(PhasePoint p0, const Rotation& r,
                                          const ExpGenerator& g, const SpectralParameter& s,
                                          std::int64_t n) {
  // C is unitary, so seeding with it leaves logNorm at zero.
  ProductAccumulator acc;
  acc.current = conjugator({p0.theta, p0.j ^ 1}, s);
  OrbitWalker walker(p0, r);
  PhasePoint last = p0;
  for (std::int64_t m = 0; m < n; ++m) {
    last = walker.point();
    accumulateInPlace(acc, conjugatedStep(last, s, g));
    walker.advance();
  }
  acc.current = adjoint(conjugator(last, s)) * acc.current;
  return acc;
}

}  // namespace szego
