#include "szego/lyapunov.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "szego/errors.hpp"

namespace szego {

namespace {

void requireSteps(std::int64_t n) {
  if (n < 1) throw InvalidParameter("step count n must be >= 1, got " + std::to_string(n));
}

void requireGrid(int gridSize, int minimum) {
  if (gridSize < minimum)
    throw InvalidParameter("theta grid must have at least " + std::to_string(minimum) +
                           " points, got " + std::to_string(gridSize));
}

LyapunovEstimate finish(LyapunovEstimate e, const Generator& g) {
  e.bound = referenceBound(g);
  e.margin = e.gammaHat - e.bound;
  return e;
}

}  // namespace

std::string_view methodName(EstimatorMethod m) {
  return m == EstimatorMethod::birkhoff ? "birkhoff" : "phase";
}

double theorem1Bound(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw InvalidParameter("epsilon must lie in (0, 1), got " + std::to_string(epsilon));
  return 0.5 * std::log1p(-epsilon * epsilon) - std::log(epsilon);
}

double referenceBound(const Generator& g) {
  if (const auto* e = std::get_if<ExpGenerator>(&g)) return theorem1Bound(e->epsilon());
  if (const auto* p = std::get_if<PerturbedGenerator>(&g)) return theorem1Bound(p->epsilon());
  return 0.0;
}

LyapunovEstimate estimateBirkhoff(PhasePoint p0, const Rotation& r, const Generator& g,
                                  const SpectralParameter& s, std::int64_t n,
                                  KernelVariant kernel) {
  requireSteps(n);
  const ProductAccumulator acc = orbitProduct(p0, r, g, s, n, kernel);
  LyapunovEstimate e;
  e.gammaHat = acc.logOpNorm() / static_cast<double>(n);
  e.method = EstimatorMethod::birkhoff;
  e.n = n;
  e.samples = 1;
  return finish(e, g);
}

std::vector<double> phaseAverageProfile(const Rotation& r, const Generator& g,
                                        const SpectralParameter& s, std::int64_t nMax,
                                        int gridSize, KernelVariant kernel) {
  requireSteps(nMax);
  requireGrid(gridSize, 16);
  std::vector<double> sums(static_cast<std::size_t>(nMax), 0.0);
  std::visit(
      [&](const auto& gen) {
        for (int j = 0; j < 2; ++j) {
          for (int i = 0; i < gridSize; ++i) {
            ProductAccumulator acc;
            OrbitWalker walker({static_cast<double>(i) / gridSize, j}, r);
            for (std::int64_t m = 0; m < nMax; ++m) {
              accumulateInPlace(acc, szegoMatrix(gen(walker.point()), s, kernel));
              walker.advance();
              sums[static_cast<std::size_t>(m)] += acc.logOpNorm();
            }
          }
        }
      },
      g);
  const double samples = 2.0 * gridSize;
  for (std::size_t m = 0; m < sums.size(); ++m)
    sums[m] /= samples * static_cast<double>(m + 1);
  return sums;
}

LyapunovEstimate estimatePhaseAverage(const Rotation& r, const Generator& g,
                                      const SpectralParameter& s, std::int64_t n,
                                      int gridSize, KernelVariant kernel) {
  requireSteps(n);
  requireGrid(gridSize, 16);
  double total = 0.0;
  for (int j = 0; j < 2; ++j) total += meanLogNormAtParity(r, g, s, j, n, gridSize, kernel);
  LyapunovEstimate e;
  e.gammaHat = 0.5 * total / static_cast<double>(n);
  e.method = EstimatorMethod::phaseAverage;
  e.n = n;
  e.samples = 2 * static_cast<std::int64_t>(gridSize);
  return finish(e, g);
}

double meanLogNormAtParity(const Rotation& r, const Generator& g, const SpectralParameter& s,
                           int j0, std::int64_t n, int gridSize, KernelVariant kernel) {
  requireSteps(n);
  requireGrid(gridSize, 1);
  double sum = 0.0;
  for (int i = 0; i < gridSize; ++i) {
    const PhasePoint p = PhasePoint::make(static_cast<double>(i) / gridSize, j0);
    sum += orbitProduct(p, r, g, s, n, kernel).logOpNorm();
  }
  return sum / gridSize;
}

Mat2 analyticFactor(const ExpGenerator& g, const Rotation& r, const SpectralParameter& s,
                    int j0, std::int64_t m, Complex w) {
  const int k = g.k();
  const int absK = std::abs(k);
  const double shift = frac(static_cast<double>(k) * frac(static_cast<double>(m) * r.alpha()));
  const Complex e = std::polar(1.0, kTwoPi * shift);
  const bool odd = ((j0 + m) % 2 + 2) % 2 == 1;
  const Complex zp = odd ? s.z() : Complex{1.0};
  const Complex wk = std::pow(w, absK);
  const Complex w2k = wk * wk;
  const double sm = g.modulus();
  if (k > 0) return {-sm * e * w2k, zp * wk, std::conj(zp) * wk, -sm * std::conj(e)};
  return {-sm * e, zp * wk, std::conj(zp) * wk, -sm * std::conj(e) * w2k};
}

double analyticLogNorm(const ExpGenerator& g, const Rotation& r, const SpectralParameter& s,
                       int j0, std::int64_t n, Complex w) {
  requireSteps(n);
  ProductAccumulator acc;
  for (std::int64_t m = 0; m < n; ++m) accumulateInPlace(acc, analyticFactor(g, r, s, j0, m, w));
  return acc.logOpNorm();
}

SubharmonicReport subharmonicCheck(const Rotation& r, const ExpGenerator& g,
                                   const SpectralParameter& s, int j0, std::int64_t n,
                                   int gridSize) {
  requireSteps(n);
  requireGrid(gridSize, 64);
  double sum = 0.0;
  for (int i = 0; i < gridSize; ++i) {
    const Complex w = std::polar(1.0, kTwoPi * static_cast<double>(i) / gridSize);
    sum += analyticLogNorm(g, r, s, j0, n, w);
  }
  SubharmonicReport rep;
  rep.n = n;
  rep.circleAverage = sum / gridSize;
  rep.centerValue = analyticLogNorm(g, r, s, j0, n, Complex{0.0});
  rep.slack = rep.circleAverage - rep.centerValue;
  return rep;
}

}  // namespace szego
