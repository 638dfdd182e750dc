#include "szego/szego.h"

#include <new>
#include <string>
#include <vector>

#include "szego/errors.hpp"
#include "szego/harness.hpp"
#include "szego/lyapunov.hpp"

using szego::Complex;

struct szego_generator {
  szego::Generator rep;
};

struct szego_config {
  szego::ScanConfig rep;
};

struct szego_report {
  szego::CommandResult rep;
};

namespace {

thread_local std::string lastError;

szego_status fail(szego_status status, std::string message) {
  lastError = std::move(message);
  return status;
}

/// Maps library exceptions onto status codes.
template <class Fn>
szego_status guard(Fn&& fn) {
  try {
    fn();
    lastError.clear();
    return SZEGO_OK;
  } catch (const szego::DegenerateCoefficientError& e) {
    return fail(SZEGO_NUMERICAL_ERROR, e.what());
  } catch (const szego::NumericalBlowupError& e) {
    return fail(SZEGO_NUMERICAL_ERROR, e.what());
  } catch (const szego::AdmissibilityError& e) {
    return fail(SZEGO_NUMERICAL_ERROR, e.what());
  } catch (const szego::Error& e) {
    return fail(SZEGO_CONFIG_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SZEGO_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(SZEGO_INVALID_ARGUMENT, e.what());
  }
}

std::vector<Complex> complexArray(const double* data, size_t count) {
  std::vector<Complex> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) out.emplace_back(data[2 * i], data[2 * i + 1]);
  return out;
}

szego_estimate toC(const szego::LyapunovEstimate& e) {
  return {e.gammaHat, e.bound, e.margin, e.n, e.samples,
          e.method == szego::EstimatorMethod::birkhoff ? SZEGO_METHOD_BIRKHOFF
                                                       : SZEGO_METHOD_PHASE_AVERAGE};
}

#define SZEGO_REQUIRE(cond) \
  if (!(cond)) return fail(SZEGO_INVALID_ARGUMENT, "invalid argument: " #cond)

}  // namespace

extern "C" {

const char* szego_version(void) { return "1.0.0"; }

const char* szego_last_error(void) { return lastError.c_str(); }

szego_status szego_theorem1_bound(double epsilon, double* out) {
  SZEGO_REQUIRE(out);
  return guard([&] { *out = szego::theorem1Bound(epsilon); });
}

szego_status szego_lambda_max(double epsilon, const double* coeffs, size_t count, double* out) {
  SZEGO_REQUIRE(out && (coeffs || count == 0));
  return guard([&] { *out = szego::lambdaMax(epsilon, complexArray(coeffs, count)); });
}

szego_status szego_generator_new_exp(double epsilon, int k, szego_generator** out) {
  SZEGO_REQUIRE(out);
  return guard([&] { *out = new szego_generator{szego::ExpGenerator(epsilon, k)}; });
}

szego_status szego_generator_new_perturbed(double epsilon, int k, double lambda_re,
                                           double lambda_im, const double* coeffs, size_t count,
                                           szego_generator** out) {
  SZEGO_REQUIRE(out && (coeffs || count == 0));
  return guard([&] {
    *out = new szego_generator{szego::PerturbedGenerator(
        epsilon, k, Complex{lambda_re, lambda_im}, complexArray(coeffs, count))};
  });
}

szego_status szego_generator_new_constant(double re, double im, szego_generator** out) {
  SZEGO_REQUIRE(out);
  return guard([&] { *out = new szego_generator{szego::ConstantGenerator(Complex{re, im})}; });
}

void szego_generator_free(szego_generator* g) { delete g; }

szego_status szego_generator_eval(const szego_generator* g, double theta, int j, double* re,
                                  double* im) {
  SZEGO_REQUIRE(g && re && im);
  return guard([&] {
    const Complex v = szego::evaluate(g->rep, szego::PhasePoint::make(theta, j));
    *re = v.real();
    *im = v.imag();
  });
}

szego_status szego_estimate_birkhoff(const szego_generator* g, double alpha, double theta0, int j0,
                                     double z_turns, int64_t n, szego_estimate* out) {
  SZEGO_REQUIRE(g && out);
  return guard([&] {
    *out = toC(szego::estimateBirkhoff(szego::PhasePoint::make(theta0, j0), szego::Rotation(alpha),
                                       g->rep, szego::SpectralParameter::fromTurns(z_turns), n));
  });
}

szego_status szego_estimate_phase_average(const szego_generator* g, double alpha, double z_turns,
                                          int64_t n, int grid, szego_estimate* out) {
  SZEGO_REQUIRE(g && out);
  return guard([&] {
    *out = toC(szego::estimatePhaseAverage(szego::Rotation(alpha), g->rep,
                                           szego::SpectralParameter::fromTurns(z_turns), n, grid));
  });
}

szego_status szego_subharmonic_check(const szego_generator* g, double alpha, double z_turns,
                                     int j0, int64_t n, int grid, szego_subharmonic* out) {
  SZEGO_REQUIRE(g && out);
  const auto* exp = std::get_if<szego::ExpGenerator>(&g->rep);
  if (!exp) return fail(SZEGO_CONFIG_ERROR, "subharmonic check needs an exponential generator");
  return guard([&] {
    const auto r = szego::subharmonicCheck(szego::Rotation(alpha), *exp,
                                           szego::SpectralParameter::fromTurns(z_turns), j0, n, grid);
    *out = {r.n, r.circleAverage, r.centerValue, r.slack};
  });
}

szego_status szego_config_new(szego_config** out) {
  SZEGO_REQUIRE(out);
  return guard([&] { *out = new szego_config{}; });
}

void szego_config_free(szego_config* cfg) { delete cfg; }

szego_status szego_config_set(szego_config* cfg, const char* key, const char* value) {
  SZEGO_REQUIRE(cfg && key && value);
  return guard([&] { szego::applySetting(cfg->rep, key, value); });
}

szego_status szego_config_load(szego_config* cfg, const char* path) {
  SZEGO_REQUIRE(cfg && path);
  return guard([&] { szego::loadConfigFile(cfg->rep, path); });
}

szego_status szego_run(const szego_config* cfg, const char* command, szego_report** out) {
  SZEGO_REQUIRE(cfg && command && out);
  *out = nullptr;
  const szego_status status = guard([&] {
    *out = new szego_report{szego::runCommand(command, cfg->rep)};
  });
  if (status != SZEGO_OK) return status;
  if ((*out)->rep.status != SZEGO_OK) lastError = (*out)->rep.err;
  return static_cast<szego_status>((*out)->rep.status);
}

szego_status szego_report_status(const szego_report* r) {
  return r ? static_cast<szego_status>(r->rep.status) : SZEGO_INVALID_ARGUMENT;
}

const char* szego_report_output(const szego_report* r) { return r ? r->rep.out.c_str() : ""; }

const char* szego_report_diagnostics(const szego_report* r) { return r ? r->rep.err.c_str() : ""; }

void szego_report_free(szego_report* r) { delete r; }

}  // extern "C"
