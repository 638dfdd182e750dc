#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "szego/cocycle.hpp"
#include "szego/dynamics.hpp"
#include "szego/errors.hpp"
#include "szego/lyapunov.hpp"

namespace szego {

enum class MethodChoice { birkhoff, phase, both };

/// Everything a command needs. Unset optionals take command-specific defaults.
struct ScanConfig {
  std::vector<double> epsilons;
  int k = 1;
  double alpha = kGoldenMean;
  int zGridSize = 32;
  std::optional<std::int64_t> n;
  MethodChoice method = MethodChoice::birkhoff;
  std::optional<Complex> lambda;
  std::vector<Complex> coeffs;
  std::uint64_t seed = 1;
  std::string outPath;
  std::string svgPath;
  std::optional<int> gridSize;
  double tol = 1e-3;
  double threshold = 0.05;
  int ladder = 8;
  unsigned threads = 0;  ///< 0: hardware concurrency
  KernelVariant kernel = KernelVariant::standard;
};

/// Raised for malformed or out-of-range configuration values.
struct ConfigError : Error {
  using Error::Error;
};

/// Applies one `key=value` setting; keys match the long CLI flag names
/// (eps, k, alpha, z-grid, n, method, lambda, coeffs, seed, out, svg, grid, tol,
/// threshold, ladder, threads, test-flip-sign). Throws ConfigError.
void applySetting(ScanConfig& cfg, std::string_view key, std::string_view value);

/// Reads `key = value` lines; blank lines and `#` comments are skipped.
void loadConfigFile(ScanConfig& cfg, const std::string& path);

struct ScanRow {
  double zArg = 0.0;
  double epsilon = 0.0;
  double lambdaAbs = 0.0;
  std::int64_t n = 0;
  EstimatorMethod method = EstimatorMethod::birkhoff;
  double gammaHat = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

inline constexpr std::string_view kCsvHeader =
    "z_arg,epsilon,lambda_abs,n,method,gamma_hat,bound,margin";

std::string formatCsv(const std::vector<ScanRow>& rows);

/// Standalone SVG 1.1 line chart of gamma_hat and bound against z_arg.
std::string renderSvg(const std::vector<ScanRow>& rows, std::string_view title);

/// Starting point of the Birkhoff orbit for scan job `index` (depends only on seed, index).
PhasePoint samplingStart(std::uint64_t seed, std::uint64_t index);

/// Process exit codes shared with the C API.
enum ExitStatus : int { kSuccess = 0, kVerifyFailed = 1, kConfigFailure = 2, kNumericalFailure = 3 };

struct CommandResult {
  int status = kSuccess;
  std::string out;  ///< report text (stdout)
  std::string err;  ///< diagnostics (stderr)
};

CommandResult runBound(const ScanConfig& cfg);
CommandResult runScan(const ScanConfig& cfg);
CommandResult runVerifyT1(const ScanConfig& cfg);
CommandResult runVerifyT2(const ScanConfig& cfg);
CommandResult runSubharmonic(const ScanConfig& cfg);

/// Dispatches on the subcommand name (bound, scan, verify-t1, verify-t2, subharmonic).
CommandResult runCommand(std::string_view command, const ScanConfig& cfg);

}  // namespace szego
