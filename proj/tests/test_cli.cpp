#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "gkpstab/io.hpp"

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(GKPSTAB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult res;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("lattice info emits the hexagonal geometry") {
  const CliResult res = run_cli("lattice info hexagonal");
  REQUIRE(res.exit_code == 0);
  const gkpstab::Json j = gkpstab::Json::parse(res.out);
  CHECK(j["label"] == "hexagonal");
  CHECK(j["self_dual"] == true);
  CHECK(std::abs(j["shortest_over_ell"].get<double>() - 1.0745699318) < 1e-9);
}

TEST_CASE("unknown lattice is a config error") {
  CHECK(run_cli("lattice info nosuch").exit_code == 2);
}

TEST_CASE("reduce reproduces the universal sqrep2 gain under --check") {
  const CliResult res = run_cli("reduce sqrep2:1.3 --check");
  REQUIRE(res.exit_code == 0);
  const gkpstab::Json j = gkpstab::Json::parse(res.out);
  CHECK(std::abs(j["gains"][0].get<double>() - 1.2071067811865475) < 1e-9);
}

TEST_CASE("bounds sweep emits versioned csv and passes its check") {
  const CliResult res = run_cli("bounds");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("format_version,", 0) == 0);
  CHECK(res.out.find("m_over_n") != std::string::npos);
  CHECK(run_cli("bounds --check").exit_code == 0);
}

TEST_CASE("bounds output is run-to-run deterministic") {
  const CliResult a = run_cli("bounds --sigma 0.3 --sigma-gm-sq 0.05");
  const CliResult b = run_cli("bounds --sigma 0.3 --sigma-gm-sq 0.05");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("decode evaluates a fixed gain deterministically") {
  const std::string args =
      "decode --lattice square --gain 4.923320 --sigma-sq 1e-2 "
      "--estimator mmse --method quadrature";
  const CliResult res = run_cli(args);
  REQUIRE(res.exit_code == 0);
  const gkpstab::Json j = gkpstab::Json::parse(res.out);
  CHECK(std::abs(j["sigma_rms_sq"].get<double>() - 1.25129031e-3) < 1e-7);

  const CliResult res2 = run_cli(args);
  CHECK(res.out == res2.out);
}

TEST_CASE("seeded monte carlo reruns are bitwise identical") {
  const std::string args =
      "decode --lattice square --gain 4.0 --sigma-sq 1e-2 --estimator mmse "
      "--method mc --samples 20000 --seed 9";
  const CliResult a = run_cli(args);
  const CliResult b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("sigma and sigma-sq together are rejected") {
  CHECK(run_cli("decode --lattice square --gain 2 --sigma 0.1 "
                "--sigma-sq 0.01")
            .exit_code == 2);
}

TEST_CASE("unknown config keys are rejected") {
  const std::string path = "cli_bad_config.json";
  {
    std::ofstream f(path);
    f << "{\"no_such_option\": 1}\n";
  }
  CHECK(run_cli("decode --lattice square --gain 2 --sigma-sq 0.01 --config " +
                path)
            .exit_code == 2);
  std::remove(path.c_str());
}

TEST_CASE("config supplies defaults that flags override") {
  const std::string path = "cli_good_config.json";
  {
    std::ofstream f(path);
    f << "{\"gain\": 4.923320, \"sigma-sq\": 0.01}\n";
  }
  const CliResult res = run_cli(
      "decode --lattice square --estimator mmse --method quadrature --config " +
      path);
  REQUIRE(res.exit_code == 0);
  const gkpstab::Json j = gkpstab::Json::parse(res.out);
  CHECK(std::abs(j["sigma_rms_sq"].get<double>() - 1.25129031e-3) < 1e-7);
  std::remove(path.c_str());
}

TEST_CASE("an off-lattice sweep minimum fails the check") {
  const CliResult res = run_cli(
      "sweep --r-min 2 --r-max 3 --r-points 2 --theta-points 2 "
      "--sigma-sq 1e-2 --check");
  CHECK(res.exit_code == 4);
}

}  // TEST_SUITE
