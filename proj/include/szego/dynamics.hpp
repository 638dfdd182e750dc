#pragma once

#include <concepts>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "szego/mat2.hpp"

namespace szego {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// (sqrt(5) - 1) / 2
inline constexpr double kGoldenMean = 0.61803398874989484820458683436564;

/// Point (theta, j) of the torus-times-Z2 base, theta in [0, 1), j in {0, 1}.
struct PhasePoint {
  double theta = 0.0;
  int j = 0;

  /// Reduces theta into [0, 1) and j mod 2.
  static PhasePoint make(double theta, int j);
};

/// Rotation number alpha in (0, 1).
class Rotation {
 public:
  explicit Rotation(double alpha = kGoldenMean);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

/// frac(x) in [0, 1).
double frac(double x);

/// One application of T(theta, j) = (theta + alpha, j + 1).
PhasePoint step(PhasePoint p, const Rotation& r);

/// T^n p via the closed form (frac(theta + n alpha), (j + n) mod 2).
PhasePoint orbitPoint(PhasePoint p, const Rotation& r, std::int64_t n);

/// Iterates T with compensated summation on theta so that long orbits track the
/// closed form to ~1e-15 per step instead of accumulating rounding.
class OrbitWalker {
 public:
  OrbitWalker(PhasePoint start, const Rotation& r) : point_(start), alpha_(r.alpha()) {}

  const PhasePoint& point() const { return point_; }
  void advance();

 private:
  PhasePoint point_;
  double alpha_;
  double carry_ = 0.0;
};

/// f(theta, 0) = s e^{2 pi i k theta},  f(theta, 1) = s e^{-2 pi i k theta},
/// with s = (1 - epsilon^2)^{1/2}.
class ExpGenerator {
 public:
  ExpGenerator(double epsilon, int k);

  double epsilon() const { return epsilon_; }
  int k() const { return k_; }
  /// (1 - epsilon^2)^{1/2}
  double modulus() const { return modulus_; }

  Complex operator()(PhasePoint p) const;

 private:
  double epsilon_;
  int k_;
  double modulus_;
};

/// Sufficient bound on |lambda| keeping the perturbed generator inside the unit
/// disk: ((1 - eps^2)^{-1/2} - 1) / sum |a_l|, +inf for an empty/zero sum.
double lambdaMax(double epsilon, std::span<const Complex> coeffs);

/// s (e^{2 pi i k theta} + lambda sum_{l=-k}^{k-1} a_l e^{2 pi i l theta}) for j = 0,
/// every phase negated for j = 1.
class PerturbedGenerator {
 public:
  /// coeffs holds a_{-k}, ..., a_{k-1} (2k values). Throws InvalidParameter when
  /// |lambda| >= lambdaMax(epsilon, coeffs).
  PerturbedGenerator(double epsilon, int k, Complex lambda, std::vector<Complex> coeffs);

  double epsilon() const { return base_.epsilon(); }
  int k() const { return base_.k(); }
  Complex lambda() const { return lambda_; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  const ExpGenerator& unperturbed() const { return base_; }

  /// Throws AdmissibilityError if the value has modulus >= 1.
  Complex operator()(PhasePoint p) const;

 private:
  ExpGenerator base_;
  Complex lambda_;
  std::vector<Complex> coeffs_;
};

/// Theta-independent coefficient; mostly a test fixture (value 0 is the free case).
class ConstantGenerator {
 public:
  explicit ConstantGenerator(Complex value);
  Complex value() const { return value_; }
  Complex operator()(PhasePoint) const { return value_; }

 private:
  Complex value_;
};

/// Anything mapping a phase point to a coefficient in the open unit disk.
template <class G>
concept CoefficientSource = requires(const G& g, PhasePoint p) {
  { g(p) } -> std::convertible_to<Complex>;
};

using Generator = std::variant<ExpGenerator, PerturbedGenerator, ConstantGenerator>;

Complex evaluate(const Generator& g, PhasePoint p);

inline Complex evalExp(const ExpGenerator& g, PhasePoint p) { return g(p); }
inline Complex evalPerturbed(const PerturbedGenerator& g, PhasePoint p) { return g(p); }

}  // namespace szego
