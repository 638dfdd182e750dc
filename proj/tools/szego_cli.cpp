// Command-line front end; talks to the library only through the C interface.

#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "szego/szego.h"

namespace {

struct FlagSpec {
  const char* name;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"eps", "coupling values in (0,1), comma separated (required)"},
    {"k", "nonzero frequency k (default 1)"},
    {"alpha", "rotation number in (0,1) or 'golden' (default golden)"},
    {"z-grid", "points on the unit circle, z = exp(2 pi i m / M) (default 32)"},
    {"n", "steps per product (scan/verify-t2: 100000, verify-t1: 6, subharmonic: 8)"},
    {"method", "birkhoff | phase | both (scan only, default birkhoff)"},
    {"lambda", "perturbation coupling re,im"},
    {"coeffs", "perturbation coefficients a_{-k}..a_{k-1} as 're,im;re,im;...' (default all 1)"},
    {"seed", "seed for Birkhoff starting points (default 1)"},
    {"out", "CSV output path (scan prints to stdout when omitted)"},
    {"svg", "SVG chart output path"},
    {"grid", "theta quadrature size (scan: 64, verify-t1/subharmonic: 2048)"},
    {"tol", "tolerance for verification checks (default 1e-3)"},
    {"threshold", "verify-t2 positivity threshold (default 0.05)"},
    {"ladder", "verify-t2 number of nonzero lambda rungs (default 8)"},
    {"threads", "worker threads, 0 = hardware concurrency (default 0)"},
};

struct Command {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string configPath;
  bool flipSign = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents of almost periodic Szego cocycles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", szego_version());

  const std::vector<std::pair<std::string, std::string>> names = {
      {"bound", "print the closed-form lower bound log(sqrt(1-eps^2)/eps)"},
      {"scan", "estimate the exponent over a grid of z and write CSV (and SVG)"},
      {"verify-t1", "check the finite-n phase average against the lower bound"},
      {"verify-t2", "sweep the perturbation strength and report the positivity region"},
      {"subharmonic", "check the mean-value inequality for the analytic product"},
  };
  std::vector<std::unique_ptr<Command>> commands;
  for (const auto& [name, description] : names) {
    auto cmd = std::make_unique<Command>();
    cmd->app = app.add_subcommand(name, description);
    cmd->app->add_option("--config", cmd->configPath, "key=value file; flags override it");
    for (const auto& flag : kFlags)
      cmd->app->add_option(std::string("--") + flag.name, cmd->values[flag.name], flag.help);
    cmd->app->add_flag("--test-flip-sign", cmd->flipSign)->group("");
    commands.push_back(std::move(cmd));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SZEGO_CONFIG_ERROR;
  }

  for (const auto& cmd : commands) {
    if (!cmd->app->parsed()) continue;

    szego_config* raw = nullptr;
    if (szego_config_new(&raw) != SZEGO_OK) {
      std::fprintf(stderr, "error: %s\n", szego_last_error());
      return SZEGO_NUMERICAL_ERROR;
    }
    std::unique_ptr<szego_config, decltype(&szego_config_free)> cfg(raw, szego_config_free);

    if (!cmd->configPath.empty() && szego_config_load(cfg.get(), cmd->configPath.c_str()) != SZEGO_OK) {
      std::fprintf(stderr, "configuration error: %s\n", szego_last_error());
      return SZEGO_CONFIG_ERROR;
    }
    for (const auto& flag : kFlags) {
      if (cmd->app->count(std::string("--") + flag.name) == 0) continue;
      if (szego_config_set(cfg.get(), flag.name, cmd->values[flag.name].c_str()) != SZEGO_OK) {
        std::fprintf(stderr, "configuration error: %s\n", szego_last_error());
        return SZEGO_CONFIG_ERROR;
      }
    }
    if (cmd->flipSign) szego_config_set(cfg.get(), "test-flip-sign", "1");

    szego_report* report = nullptr;
    const szego_status status = szego_run(cfg.get(), cmd->app->get_name().c_str(), &report);
    if (!report) {
      std::fprintf(stderr, "error: %s\n", szego_last_error());
      return status;
    }
    std::fputs(szego_report_output(report), stdout);
    std::fputs(szego_report_diagnostics(report), stderr);
    szego_report_free(report);
    return status;
  }
  return SZEGO_CONFIG_ERROR;
}
