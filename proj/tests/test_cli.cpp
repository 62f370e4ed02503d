#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qhd/cli.hpp"
#include "qhd/random.hpp"

using namespace qhd;

namespace {

const std::string kDir = QHD_CONFIG_DIR;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("classical") {
  const auto r = run({"classical", "--resource-value", "50", "--injury-cost", "-100", "--display-cost", "-10"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "(-25, -25)"));
  CHECK(contains(r.out, "(50, 0)"));
  CHECK(contains(r.out, "(15, 15)"));
  CHECK(contains(r.out, "Hawk: not-ESS"));
  CHECK(contains(r.out, "Dove: not-ESS"));
  CHECK(contains(r.out, "mixed ESS h = 0.58333333333333337"));

  const auto j = run({"classical", "--resource-value", "50", "--injury-cost", "-100", "--display-cost", "-10",
                      "--format", "json"});
  REQUIRE(j.code == kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["mixed"]["h"].get<double>() == doctest::Approx(7.0 / 12));
  CHECK(doc["matrix"]["row"][0][0].get<double>() == -25);
}

TEST_CASE("analyze the mixed-ESS state") {
  const auto r = run({"analyze", "--config", kDir + "/symmetric_case3.conf"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "game: symmetric"));
  CHECK(contains(r.out, "NE (0.583333333333, 0.583333333333) kind=interior"));
  CHECK(contains(r.out, "ESS=true"));
  CHECK(contains(r.out, "A=8.75 B=8.75"));

  const auto j = run({"analyze", "--config", kDir + "/symmetric_case3.conf", "--format", "json"});
  REQUIRE(j.code == kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["surface_A"]["k_pq"].get<double>() == doctest::Approx(-20));
  bool found = false;
  for (const auto& c : doc["candidates"]) {
    if (c["kind"] == "interior" && c["ess_status"] == "ESS") found = true;
  }
  CHECK(found);
}

TEST_CASE("analyze with flags") {
  const auto r = run({"analyze", "--resource-value", "50", "--injury-cost", "-100", "--display-cost", "-10", "--hh",
                      "1/4", "--dd", "sqrt(1/8)", "--hd", "3/4", "--dh", "1/2"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "game: asymmetric"));
  CHECK(contains(r.out, "NE (0.55, 0.466666666667) kind=interior ne=NE ESS=false"));
}

TEST_CASE("sweep CSV") {
  const std::vector<std::string> args{"sweep", "--config", kDir + "/sweep_ab.conf", "--resolution", "5"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto lines = split_lines(a.out);
  REQUIRE(!lines.empty());
  CHECK(lines[0] == "a2,b2,c2,d2,kpq_A,kp_A,kq_A,k0_A,kpq_B,kp_B,kq_B,k0_B,symmetric,ne_kinds,p_star,q_star,ess_found");
  // Triangular grid of 5 points per axis: 15 rows.
  CHECK(lines.size() == 16);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(std::count(lines[i].begin(), lines[i].end(), ',') == 16);
  }
}

TEST_CASE("simulate") {
  auto r = run({"simulate", "--config", kDir + "/symmetric_case1.conf", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("generation,share\n0,0.01", 0) == 0);
  CHECK(contains(r.out, "# verdict: mutant-extinct"));

  r = run({"simulate", "--config", kDir + "/asymmetric_case1.conf", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("generation,row_share,col_share", 0) == 0);

  r = run({"simulate", "--config", kDir + "/symmetric_case1.conf", "--incumbent", "0", "--mutant", "0"});
  CHECK(r.code != kExitOk);
}

TEST_CASE("verify") {
  const auto r = run({"verify", "--trials", "1000", "--seed", "42", "--tol", "1e-12"});
  CHECK(r.code == kExitOk);
  CHECK(contains(r.out, "trace-vs-closed-form: 1000 draws"));
  CHECK_FALSE(contains(r.out, "FAIL"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"classical", "--no-such-flag"}).code == kExitUsage);
  CHECK(run({"analyze", "--config", "/nonexistent.conf"}).code == kExitUsage);
  CHECK(run({"classical", "--format", "xml"}).code == kExitUsage);
}

TEST_CASE("output to a file") {
  const auto path = std::filesystem::temp_directory_path() / "qhd_cli_classical.json";
  std::filesystem::remove(path);
  const auto r = run({"classical", "--resource-value", "2", "--injury-cost", "-2", "--display-cost", "-1", "--format",
                      "json", "--out", path.string()});
  CHECK(r.code == kExitOk);
  std::ifstream in(path);
  const auto doc = nlohmann::json::parse(in);
  CHECK(doc["matrix"]["row"][0][1].get<double>() == 2);
}

TEST_CASE("malformed inputs never exit 0") {
  const std::string good = "[game]\nresource_value = 50\ninjury_cost = -100\ndisplay_cost = -10\n";
  const std::vector<std::string> breakages{
      "[state]\nhh = 2\n",          "[state]\nhh = sqrt(0.9)\n", "[state]\nhh = nan\n",
      "[tactics]\np = -0.1\n",      "[tactics]\nq = 1 +\n",      "[game]\n",
      "injury_cost = 3\n",          "[simulation]\nepsilon = 1\n", "[sweep]\nresolution = 0\n",
      "[oops]\n",                   "bogus line\n",              "[state]\nhh = [1, 2, 3]\n",
      "[state]\npolicy = ignore\n", "[output]\nformat = yaml\n", "[simulation]\nincumbent = 2\n"};
  UnitRandom rng(9);
  for (std::size_t i = 0; i < breakages.size(); ++i) {
    const auto path = temp_file("qhd_bad_" + std::to_string(i) + ".conf", good + breakages[i]);
    for (const char* cmd : {"analyze", "sweep", "simulate"}) {
      CAPTURE(breakages[i]);
      CAPTURE(cmd);
      CHECK(run({cmd, "--config", path.string()}).code != kExitOk);
    }
  }
  // Random garbage flag values.
  for (int t = 0; t < 50; ++t) {
    const double v = rng.uniform(-10, 10);
    const std::string bad_prob = std::to_string(v > 0 ? 1 + v : v - 0.01);
    CHECK(run({"analyze", "--config", kDir + "/symmetric_case1.conf", "--p", bad_prob}).code != kExitOk);
    CHECK(run({"simulate", "--config", kDir + "/symmetric_case1.conf", "--mutant", bad_prob}).code != kExitOk);
  }
  CHECK(run({"analyze", "--hh", "1", "--hd", "1"}).code != kExitOk);
  CHECK(run({"classical", "--resource-value", "-5"}).code != kExitOk);
}
