// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>
#include <string>

#include "config.hpp"
#include "doctest.h"
#include "output.hpp"
#include "spikedyn/theory.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("spikedyn_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

int run(const std::string& args, const std::string& log = "log.txt") {
  std::string cmd = std::string(SPIKEDYN_CLI) + " " + args + " > " + (scratch() / log).string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Csv read_csv(const fs::path& p) {
  Csv c;
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) c.header.push_back(cell);
  while (std::getline(in, line)) {
    std::stringstream rs(line);
    std::vector<double> row;
    for (std::string cell; std::getline(rs, cell, ',');) row.push_back(std::stod(cell));
    c.rows.push_back(row);
  }
  return c;
}

void check_rectangular(const Csv& c) {
  for (const auto& r : c.rows) {
    REQUIRE(r.size() == c.header.size());
    for (double v : r) CHECK(std::isfinite(v));
  }
  for (std::size_t i = 1; i < c.rows.size(); ++i) CHECK(c.rows[i][0] > c.rows[i - 1][0]);
}

}  // namespace

TEST_CASE("config file parsing") {
  auto path = scratch() / "ok.cfg";
  std::ofstream(path) << "# comment\nlambda = 3\nalpha=0.2  # trailing\n\ntau_max=4\n";
  auto kv = cli::parse_config_file(path.string());
  CHECK(kv.at("lambda") == "3");
  CHECK(kv.at("alpha") == "0.2");
  CHECK(kv.at("tau-max") == "4");
  std::ofstream(scratch() / "bad.cfg") << "bogus=1\n";
  try {
    cli::parse_config_file((scratch() / "bad.cfg").string());
    FAIL("expected a config error");
  } catch (const cli::ConfigError& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  cli::JobConfig job("theory", {{"lambda", "2.5"}, {"n", "12"}, {"emit-svg", "true"}, {"x", "abc"}});
  CHECK(job.real("lambda", 0.0) == 2.5);
  CHECK(job.integer("n", 0) == 12);
  CHECK(job.flag("emit-svg", false));
  CHECK(job.real("alpha", 0.7) == 0.7);
  CHECK_THROWS_AS(job.real("x", 0.0), cli::ConfigError);
  CHECK_THROWS_AS(job.require_keys({"alpha"}), cli::ConfigError);
}

TEST_CASE("csv formatting") {
  cli::Table t{{"tau", "v"}, {{0.0, 0.5}, {0.1, 1.0 / 3.0}}};
  std::string s = cli::format_csv(t);
  CHECK(s == "tau,v\n0,0.10000000000000001\n0.5,0.33333333333333331\n");
  CHECK(cli::format_csv(t) == s);
  CHECK(t.all_finite());
  t.cols[1][0] = NAN;
  CHECK_FALSE(t.all_finite());
  t.cols[1][0] = 0.1;
  std::string svg = cli::format_svg(t, {"title", "tau", "value", {"v"}});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg == cli::format_svg(t, {"title", "tau", "value", {"v"}}));
}

TEST_CASE("theory subcommand") {
  auto out = scratch() / "theory";
  REQUIRE(run("theory --lambda 2 --alpha 0.1 --tau-max 10 --points 200 --emit-svg --output-dir " + out.string()) == 0);
  auto csv = read_csv(out / "theory.csv");
  CHECK(csv.header == std::vector<std::string>{"tau", "q_bar", "cost", "p1_bar"});
  CHECK(csv.rows.size() == 200);
  check_rectangular(csv);
  CHECK(csv.rows.back()[0] == doctest::Approx(10.0));
  CHECK(fs::exists(out / "theory.svg"));
  std::string first = slurp(out / "theory.csv");
  REQUIRE(run("theory --lambda 2 --alpha 0.1 --tau-max 10 --points 200 --output-dir " + out.string()) == 0);
  CHECK(slurp(out / "theory.csv") == first);
}

TEST_CASE("flags override the config file") {
  std::ofstream(scratch() / "job.cfg") << "lambda=5\nalpha=0.3\npoints=5\ntau-max=2\n";
  auto out = scratch() / "override";
  REQUIRE(run("theory --config " + (scratch() / "job.cfg").string() + " --lambda 2 --output-dir " + out.string()) ==
          0);
  auto csv = read_csv(out / "theory.csv");
  REQUIRE(csv.rows.size() == 5);
  spikedyn::ScenarioParams p{2.0, 0.3, {}};
  CHECK(csv.rows[4][1] == doctest::Approx(spikedyn::bar_q(p, 2.0)).epsilon(1e-15));
}

TEST_CASE("exit codes") {
  CHECK(run("theory --alpha 1.5 --output-dir " + (scratch() / "x").string()) == 2);
  std::ofstream(scratch() / "unknown.cfg") << "lambda=2\nbogus_key=4\n";
  CHECK(run("theory --config " + (scratch() / "unknown.cfg").string(), "unknown.txt") == 2);
  CHECK(slurp(scratch() / "unknown.txt").find("bogus-key") != std::string::npos);
  CHECK(run("ide --lambda 0.0001 --alpha 0.3 --dt 0.01 --tau-max 5 --output-dir " + (scratch() / "div").string()) == 3);
  CHECK_FALSE(fs::exists(scratch() / "div" / "ide.csv"));
  CHECK(run("nonsense") == 2);
  CHECK(run("simulate --lambda 2 --alpha 0.1 --n 1 --output-dir " + (scratch() / "x").string()) == 2);
}

TEST_CASE("other subcommands") {
  auto out = scratch() / "all";
  CHECK(run("ide --lambda 2 --alpha 0.3 --tau-max 1 --points 5 --output-dir " + out.string()) == 0);
  check_rectangular(read_csv(out / "ide.csv"));
  CHECK(run("compare --lambda 2 --alpha 0.1 --n 200 --runs 4 --dt 0.1 --steps 20 --emit-svg --output-dir " +
            out.string()) == 0);
  auto cmp = read_csv(out / "compare.csv");
  check_rectangular(cmp);
  CHECK(std::find(cmp.header.begin(), cmp.header.end(), "q_theory") != cmp.header.end());
  CHECK(std::find(cmp.header.begin(), cmp.header.end(), "q_p50") != cmp.header.end());
  CHECK(fs::exists(out / "compare.svg"));
  CHECK(run("simulate --lambda 2 --alpha 0.1 --n 100 --runs 3 --steps 10 --output-dir " + out.string()) == 0);
  CHECK(run("concentration --n 50,100 --runs 3 --output-dir " + out.string()) == 0);
  auto conc = read_csv(out / "concentration.csv");
  CHECK(conc.header == std::vector<std::string>{"n", "p10", "p50", "p90"});
  CHECK(run("rf --d 30 --points 11 --runs 20 --output-dir " + out.string()) == 0);
  check_rectangular(read_csv(out / "rf.csv"));
  CHECK(run("landscape --n 40 --lambda 4 --output-dir " + out.string()) == 0);
  check_rectangular(read_csv(out / "landscape.csv"));
}
