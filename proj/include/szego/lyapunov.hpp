#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "szego/cocycle.hpp"
#include "szego/dynamics.hpp"

namespace szego {

enum class EstimatorMethod { birkhoff, phaseAverage };

std::string_view methodName(EstimatorMethod m);

struct LyapunovEstimate {
  double gammaHat = 0.0;  ///< nats per step
  EstimatorMethod method = EstimatorMethod::birkhoff;
  std::int64_t n = 0;
  std::int64_t samples = 0;  ///< orbits (birkhoff) or grid points x parities (phase average)
  double bound = 0.0;        ///< reference lower bound
  double margin = 0.0;       ///< gammaHat - bound
};

/// Mean-value comparison for log||prod of analytic factors|| on the unit circle.
struct SubharmonicReport {
  std::int64_t n = 0;
  double circleAverage = 0.0;
  double centerValue = 0.0;
  double slack = 0.0;  ///< circleAverage - centerValue
};

/// log((1 - eps^2)^{1/2} / eps); positive iff eps < 1/sqrt(2).
double theorem1Bound(double epsilon);

/// Lower bound used to fill LyapunovEstimate::bound: theorem1Bound for both
/// trigonometric families (the perturbed family has no proved constant; callers
/// subtract an empirical continuity allowance), 0 for a constant coefficient.
double referenceBound(const Generator& g);

/// (1/n) log||A^z_n(p0)|| along a single orbit.
LyapunovEstimate estimateBirkhoff(PhasePoint p0, const Rotation& r, const Generator& g,
                                  const SpectralParameter& s, std::int64_t n,
                                  KernelVariant kernel = KernelVariant::standard);

/// (1/n) times the mean of log||A^z_n(theta, j)|| over theta = i/gridSize and j in {0, 1}.
LyapunovEstimate estimatePhaseAverage(const Rotation& r, const Generator& g,
                                      const SpectralParameter& s, std::int64_t n,
                                      int gridSize,
                                      KernelVariant kernel = KernelVariant::standard);

/// estimatePhaseAverage(n).gammaHat for n = 1 ... nMax, sharing one pass over the orbits.
std::vector<double> phaseAverageProfile(const Rotation& r, const Generator& g,
                                        const SpectralParameter& s, std::int64_t nMax,
                                        int gridSize,
                                        KernelVariant kernel = KernelVariant::standard);

/// Mean over theta = i/gridSize of log||A^z_n(theta, j0)|| (not divided by n).
double meanLogNormAtParity(const Rotation& r, const Generator& g, const SpectralParameter& s,
                           int j0, std::int64_t n, int gridSize,
                           KernelVariant kernel = KernelVariant::standard);

/// m-th factor of the w-analytic product, m = 0 ... n-1. For k > 0:
///   [[-s e^{2 pi i k m alpha} w^{2k}, z^p w^k], [z^{-p} w^k, -s e^{-2 pi i k m alpha}]]
/// with p = (j0 + m) mod 2; for k < 0 the w^{2|k|} moves to the (2,2) slot.
Mat2 analyticFactor(const ExpGenerator& g, const Rotation& r, const SpectralParameter& s,
                    int j0, std::int64_t m, Complex w);

/// log||prod_{m=n-1}^{0} analyticFactor(m, w)||.
double analyticLogNorm(const ExpGenerator& g, const Rotation& r, const SpectralParameter& s,
                       int j0, std::int64_t n, Complex w);

/// Compares the circle average of analyticLogNorm over w = e^{2 pi i theta}
/// (theta = i/gridSize) with its value at w = 0.
SubharmonicReport subharmonicCheck(const Rotation& r, const ExpGenerator& g,
                                   const SpectralParameter& s, int j0, std::int64_t n,
                                   int gridSize);

}  // namespace szego
