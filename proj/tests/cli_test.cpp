#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Drives the installed command-line binary end to end: exit codes, report
// schema, golden values and byte-level reproducibility.

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kCli = LCLAB_CLI_PATH;

struct RunResult {
  int exit_code = -1;
  json report;
};

RunResult run(const std::string& args, const fs::path& dir,
              const std::string& report_name = "report.json") {
  const fs::path report = dir / report_name;
  const std::string cmd = kCli.string() + " " + args + " --report " +
                          report.string() + " > " + (dir / "stdout.txt").string() +
                          " 2> " + (dir / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(raw);
  if (fs::exists(report)) {
    std::ifstream in(report);
    try {
      r.report = json::parse(in);
    } catch (...) {
    }
  }
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lclab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("figure1 subcommand") {
  const auto dir = fresh_dir("fig1");
  const auto r = run("figure1 --out " + (dir / "fig.csv").string(), dir);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("schema") == 1);
  CHECK(r.report.at("pass") == true);
  CHECK(r.report.at("results").at("rational_path_exact") == true);
  CHECK(std::abs(r.report.at("results").at("density_at_3").get<double>() - 1.0) < 1e-12);
  CHECK(fs::exists(dir / "fig.csv"));
  const auto csv = slurp(dir / "fig.csv");
  CHECK(csv.find("s,density") == 0);
  CHECK(csv.find("\n3,1\n") != std::string::npos);
}

TEST_CASE("check-logconcave on measures and sequences") {
  const auto dir = fresh_dir("check");
  CHECK(run("check-logconcave --measure 'exponential(1)' --t 1 --N 20", dir).exit_code == 0);

  std::ofstream(dir / "bad.json") << "[1, 0, 1]";
  const auto bad = run("check-logconcave --sequence " + (dir / "bad.json").string(), dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.report.at("pass") == false);
  CHECK(bad.report.at("results").at("sequence").at("violation_index") == 1);

  std::ofstream(dir / "good.json") << "[1, 2, 2, 1]";
  CHECK(run("check-logconcave --sequence " + (dir / "good.json").string(), dir).exit_code == 0);
}

TEST_CASE("parse failures exit with 2") {
  const auto dir = fresh_dir("parse");
  CHECK(run("check-logconcave --measure 'cauchy(1)'", dir).exit_code == 2);
  CHECK(run("bb-transform --measure 'uniform(1,2)' --quad 0,2,1,3", dir).exit_code == 2);
  CHECK(run("nonsense-subcommand", dir).exit_code == 2);
  // stochastic commands demand a seed
  std::ofstream(dir / "payoff.json") << R"({"values": {"0": 0.5}, "beyond": 0})";
  CHECK(run("poisson-variational --payoff " + (dir / "payoff.json").string(), dir)
            .exit_code == 2);
  // malformed inputs are configuration errors, not assertion failures
  std::ofstream(dir / "badkeys.json") << R"({"values": {"zero": 0.5}, "beyond": 0})";
  CHECK(run("poisson-variational --payoff " + (dir / "badkeys.json").string() +
                " --seed 1",
            dir).exit_code == 2);
  std::ofstream(dir / "nobeyond.json") << R"({"values": {"0": 0.5}})";
  CHECK(run("poisson-variational --payoff " + (dir / "nobeyond.json").string() +
                " --seed 1",
            dir).exit_code == 2);
}

TEST_CASE("reports are byte-identical for identical configurations") {
  const auto dir = fresh_dir("repro");
  std::ofstream(dir / "payoff.json") << R"({"values": {"0": 0.6931471805599453}, "beyond": 0})";
  const std::string args = "poisson-variational --payoff " +
                           (dir / "payoff.json").string() +
                           " --horizon 1 --trajectories 2000 --seed 99 --policy optimal";
  const auto a = run(args, dir, "a.json");
  const auto b = run(args, dir, "b.json");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
  CHECK(a.report.at("results").at("verdict") == "equality within 3 se");
}

TEST_CASE("bb-transform writes the measure and the plot") {
  const auto dir = fresh_dir("bb");
  const auto r = run("bb-transform --measure 'uniform(1,2)' --quad 0,1,1,2 --out " +
                         (dir / "nu.json").string() + " --plot " + (dir / "nu.csv").string(),
                     dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "nu.json"));
  CHECK(fs::exists(dir / "nu.csv"));
  const auto nu = json::parse(slurp(dir / "nu.json"));
  CHECK(nu.at("signed") == false);
  CHECK(nu.at("pieces").size() >= 2);
}

TEST_CASE("discrete-pl subcommand") {
  const auto dir = fresh_dir("pl");
  std::ofstream(dir / "quad.json") << R"({
    "f": {"0": 0, "1": 0.6931471805599453, "2": 0},
    "g": {"0": 0, "1": 0},
    "h": {"0": 0.34657359027997264, "1": 0.34657359027997264, "2": 0},
    "k": {"0": 0.34657359027997264, "1": 0.34657359027997264, "2": 0}
  })";
  CHECK(run("discrete-pl --quad " + (dir / "quad.json").string(), dir).exit_code == 0);
  const auto poisson = run("discrete-pl --quad " + (dir / "quad.json").string() +
                               " --mode poisson --T 1 --limit 10,50,200",
                           dir);
  CHECK(poisson.exit_code == 0);
  CHECK(poisson.report.at("results").at("limit").size() == 3);

  std::ofstream(dir / "violating.json") << R"({
    "f": {"0": 0, "1": 1},
    "g": {"0": 0, "1": 0},
    "h": {"0": 0, "1": 0},
    "k": {"0": 0, "1": 0}
  })";
  const auto bad = run("discrete-pl --quad " + (dir / "violating.json").string(), dir);
  CHECK(bad.exit_code == 1);
  CHECK(bad.report.at("results").at("hypothesis").at("pass") == false);
}

TEST_CASE("poisson-variational with a constant policy and flat payoff") {
  const auto dir = fresh_dir("pv_const");
  std::ofstream(dir / "const0.json") << R"({"values": {}, "beyond": 0})";
  const auto r = run("poisson-variational --payoff " + (dir / "const0.json").string() +
                         " --horizon 1 --policy constant:1 --trajectories 1000 --seed 7",
                     dir);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("results").at("lhs").get<double>() == 0.0);
  CHECK(r.report.at("results").at("estimate").get<double>() == 0.0);
}

TEST_CASE("coupling-check subcommand") {
  const auto dir = fresh_dir("cc");
  const auto r = run(
      "coupling-check --alpha constant:2 --beta constant:1 --horizon 1 "
      "--noises 200 --seed 5",
      dir);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("results").at("mismatches") == 0);
}

TEST_CASE("post-invert and root-convexity subcommands") {
  const auto dir = fresh_dir("post");
  const auto post = run(
      "post-invert --measure 'uniform(1,2)' --t 50 --t 400 --R 1.2 --R 1.5 --gt-csv " +
          (dir / "gt.csv").string(),
      dir);
  CHECK(post.exit_code == 0);
  CHECK(fs::exists(dir / "gt.csv"));
  CHECK(run("root-convexity --measure 'exponential(1)' --n 1", dir).exit_code == 0);
}

TEST_CASE("cm-certify with the closed-form gamma source") {
  const auto dir = fresh_dir("cm");
  const auto r = run("cm-certify --gamma 2,1 --quads 1,2,2,3 --jmax 4", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.report.at("results").at("quadruples").at(0).at("pass") == true);
}
