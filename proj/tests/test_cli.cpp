#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

/// Runs the CLI with stderr discarded.
Run cli(const std::string& args) {
  const std::string cmd = std::string(SZEGO_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("bound subcommand") {
  const auto r = cli("bound --eps 0.5,0.8");
  CHECK(r.status == 0);
  CHECK(r.out.find("0.5,0.549306144334054") != std::string::npos);
  CHECK(r.out.find(",false") != std::string::npos);
  CHECK(cli("bound --eps 1.5").status == 2);
  CHECK(cli("bound").status == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("").status == 2);
  CHECK(cli("scan --bogus 1").status == 2);
  CHECK(cli("scan --eps 0.5 --method qr").status == 2);
  CHECK(cli("verify-t2 --eps 0.5 --k 2 --lambda 0.5").status == 2);
  CHECK(cli("--help").status == 0);
}

TEST_CASE("scan writes identical CSV on repeat runs") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "szego_cli_a.csv", b = dir / "szego_cli_b.csv", svg = dir / "szego_cli.svg";
  const std::string common = "scan --eps 0.4,0.6 --z-grid 5 --n 2000 --seed 3 --method both --grid 32 ";
  REQUIRE(cli(common + "--out " + a.string() + " --svg " + svg.string()).status == 0);
  REQUIRE(cli(common + "--threads 3 --out " + b.string()).status == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("z_arg,epsilon,lambda_abs,n,method,gamma_hat,bound,margin\n", 0) == 0);
  CHECK(slurp(svg).find("<svg") != std::string::npos);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  std::filesystem::remove(svg);
}

TEST_CASE("config file with flag override") {
  const auto cfgPath = std::filesystem::temp_directory_path() / "szego_cli.cfg";
  std::ofstream(cfgPath) << "eps = 0.3\nk = 2\n";
  const auto fromFile = cli("bound --config " + cfgPath.string());
  CHECK(fromFile.out.find("\n0.29999999999999999,") != std::string::npos);
  const auto overridden = cli("bound --config " + cfgPath.string() + " --eps 0.6");
  CHECK(overridden.out.find("\n0.59999999999999998,") != std::string::npos);
  CHECK(overridden.out.find("0.29999") == std::string::npos);
  CHECK(cli("bound --config /nonexistent.cfg").status == 2);
  std::filesystem::remove(cfgPath);
}

TEST_CASE("verification subcommands") {
  CHECK(cli("verify-t1 --eps 0.5 --z-grid 8").status == 0);
  const auto broken = cli("verify-t1 --eps 0.5 --z-grid 8 --test-flip-sign");
  CHECK(broken.status == 1);
  CHECK(broken.out.find("FAIL") != std::string::npos);
  CHECK(cli("subharmonic --eps 0.3 --z-grid 2 --n 8").status == 0);
  CHECK(cli("verify-t2 --eps 0.5 --k 2 --z-grid 4 --n 4000 --ladder 2").status == 0);
}
