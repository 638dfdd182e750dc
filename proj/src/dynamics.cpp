#include "szego/dynamics.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "szego/errors.hpp"

namespace szego {

namespace {

Complex unitPhase(double turns) { return std::polar(1.0, kTwoPi * frac(turns)); }

void requireEpsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidParameter("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
}

}  // namespace

double frac(double x) {
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  return r >= 1.0 ? 0.0 : r;
}

PhasePoint PhasePoint::make(double theta, int j) {
  if (!std::isfinite(theta)) throw InvalidParameter("theta must be finite");
  return {frac(theta), ((j % 2) + 2) % 2};
}

Rotation::Rotation(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidParameter("rotation number must lie in (0, 1), got " + std::to_string(alpha));
}

PhasePoint step(PhasePoint p, const Rotation& r) {
  return {frac(p.theta + r.alpha()), (p.j + 1) % 2};
}

PhasePoint orbitPoint(PhasePoint p, const Rotation& r, std::int64_t n) {
  // n * alpha split into hi + lo exactly; the integer part of hi drops out mod 1.
  const double nd = static_cast<double>(n);
  const double hi = nd * r.alpha();
  const double lo = std::fma(nd, r.alpha(), -hi);
  const double theta = frac(frac(p.theta + frac(hi)) + lo);
  const int parity = static_cast<int>(((n % 2) + 2) % 2);
  return {theta, (p.j + parity) % 2};
}

void OrbitWalker::advance() {
  const double y = alpha_ - carry_;
  const double t = point_.theta + y;
  carry_ = (t - point_.theta) - y;
  point_.theta = t >= 1.0 ? t - 1.0 : t;
  point_.j ^= 1;
}

ExpGenerator::ExpGenerator(double epsilon, int k) : epsilon_(epsilon), k_(k) {
  requireEpsilon(epsilon);
  if (k == 0) throw InvalidParameter("frequency k must be nonzero");
  modulus_ = std::sqrt((1.0 - epsilon) * (1.0 + epsilon));
}

Complex ExpGenerator::operator()(PhasePoint p) const {
  const double turns = static_cast<double>(k_) * p.theta;
  return modulus_ * unitPhase(p.j == 0 ? turns : -turns);
}

double lambdaMax(double epsilon, std::span<const Complex> coeffs) {
  requireEpsilon(epsilon);
  const double total = std::accumulate(coeffs.begin(), coeffs.end(), 0.0,
                                       [](double acc, Complex a) { return acc + std::abs(a); });
  if (total == 0.0) return std::numeric_limits<double>::infinity();
  const double s = std::sqrt((1.0 - epsilon) * (1.0 + epsilon));
  return (1.0 / s - 1.0) / total;
}

PerturbedGenerator::PerturbedGenerator(double epsilon, int k, Complex lambda,
                                       std::vector<Complex> coeffs)
    : base_(epsilon, k), lambda_(lambda), coeffs_(std::move(coeffs)) {
  if (k < 1) throw InvalidParameter("perturbed family requires k >= 1");
  if (coeffs_.size() != static_cast<std::size_t>(2 * k))
    throw InvalidParameter("perturbed family needs 2k = " + std::to_string(2 * k) +
                           " coefficients, got " + std::to_string(coeffs_.size()));
  if (!(std::abs(lambda_) < lambdaMax(epsilon, coeffs_)))
    throw InvalidParameter("|lambda| = " + std::to_string(std::abs(lambda_)) +
                           " is not below lambdaMax = " +
                           std::to_string(lambdaMax(epsilon, coeffs_)));
}

Complex PerturbedGenerator::operator()(PhasePoint p) const {
  const double sign = p.j == 0 ? 1.0 : -1.0;
  const int k = base_.k();
  Complex sum{};
  for (int l = -k; l < k; ++l)
    sum += coeffs_[static_cast<std::size_t>(l + k)] * unitPhase(sign * l * p.theta);
  const Complex value =
      base_.modulus() * (unitPhase(sign * k * p.theta) + lambda_ * sum);
  if (!(std::abs(value) < 1.0))
    throw AdmissibilityError("perturbed coefficient left the unit disk at theta = " +
                             std::to_string(p.theta));
  return value;
}

ConstantGenerator::ConstantGenerator(Complex value) : value_(value) {
  if (!(std::abs(value) < 1.0)) throw InvalidParameter("constant coefficient must satisfy |c| < 1");
}

Complex evaluate(const Generator& g, PhasePoint p) {
  return std::visit([p](const auto& gen) -> Complex { return gen(p); }, g);
}

}  // namespace szego
