#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifndef TEMPERMC_CLI_PATH
#error "TEMPERMC_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run_cli(const std::string& args) {
  CommandResult result;
  const std::string command = std::string(TEMPERMC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buffer;
  while (std::fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

double table_value(const std::string& text, const std::string& row, int column) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first != row) continue;
    double value = 0.0;
    for (int i = 0; i < column; ++i) fields >> value;
    return value;
  }
  FAIL("row not found: " + row + " in\n" + text);
  return 0.0;
}

}  // namespace

TEST_CASE("volatility command reports a pass for a correct formula") {
  const CommandResult r =
      run_cli("volatility --a 0.25 --b 0.25 --c 0.5 --steps 100000 --replicates 20 --seed 3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("theoretical v       0.5") != std::string::npos);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("volatility command rejects an invalid triple with a nonzero exit") {
  const CommandResult r = run_cli("volatility --a 0.3 --b 0.3 --c 0.5");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("optimal command halves ell and quarters eff at c=2") {
  const CommandResult c1 = run_cli("optimal --c 1");
  const CommandResult c2 = run_cli("optimal --c 2");
  REQUIRE(c1.exit_code == 0);
  REQUIRE(c2.exit_code == 0);
  for (const std::string row : {"reversible", "nonreversible"}) {
    CHECK(table_value(c2.output, row, 1) ==
          Catch::Approx(table_value(c1.output, row, 1) / 2.0).epsilon(1e-4));
    CHECK(table_value(c2.output, row, 3) ==
          Catch::Approx(table_value(c1.output, row, 3) / 4.0).epsilon(1e-4));
  }
}

TEST_CASE("sweep then fit runs end to end") {
  const CommandResult sweep = run_cli(
      "sweep --d 20 --beta-min 0.4 --grid 6 --iters 200000 --seed 11 --out cli_sweep.csv");
  REQUIRE(sweep.exit_code == 0);
  const CommandResult fit = run_cli("fit --in cli_sweep.csv --out cli_fit.csv");
  CHECK(fit.exit_code == 0);
  CHECK(fit.output.find("reversible") != std::string::npos);
  CHECK(fit.output.find("scale ratio") != std::string::npos);
  std::ifstream fitted("cli_fit.csv");
  std::string header;
  std::getline(fitted, header);
  CHECK(header == "mode,acc,rate_per_million,fitted_curve,rel_dev");
  std::remove("cli_sweep.csv");
  std::remove("cli_fit.csv");
}

TEST_CASE("fit rejects a missing input file") {
  const CommandResult r = run_cli("fit --in does_not_exist.csv");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("config file preloads options and flags win") {
  {
    std::ofstream config("cli_test_config.ini");
    config << "[sweep]\n"
              "d=20\n"
              "beta-min=0.4\n"
              "grid=4\n"
              "iters=150000\n"
              "seed=9\n"
              "out=cli_cfg_a.csv\n";
  }
  const CommandResult from_config = run_cli("--config cli_test_config.ini sweep");
  REQUIRE(from_config.exit_code == 0);
  CHECK(from_config.output.find("cli_cfg_a.csv") != std::string::npos);

  const CommandResult with_override =
      run_cli("--config cli_test_config.ini sweep --out cli_cfg_b.csv --grid 3");
  REQUIRE(with_override.exit_code == 0);
  CHECK(with_override.output.find("cli_cfg_b.csv (6 points") != std::string::npos);
  std::remove("cli_test_config.ini");
  std::remove("cli_cfg_a.csv");
  std::remove("cli_cfg_b.csv");
}

TEST_CASE("curves command writes the table and a plot script") {
  const CommandResult r = run_cli("curves --c 1 --grid 40 --out cli_curves.csv");
  REQUIRE(r.exit_code == 0);
  std::ifstream csv("cli_curves.csv");
  CHECK(csv.good());
  std::ifstream script("cli_curves_plot.py");
  CHECK(script.good());
  std::string first;
  std::getline(script, first);
  CHECK(first == "#!/usr/bin/env python3");
  std::remove("cli_curves.csv");
  std::remove("cli_curves_plot.py");
}
