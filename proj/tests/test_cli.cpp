#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracdense/io.hpp"

namespace fs = std::filesystem;
using doctest::Approx;

namespace {

const std::string kCli = FRACDENSE_CLI;
const fs::path kData = FRACDENSE_TEST_DATA;

struct Run {
  int code;
  fs::path dir;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracdense_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& name, const std::string& args) {
  const fs::path dir = fresh_dir(name);
  const std::string cmd = kCli + " --out-dir " + dir.string() + " " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, dir};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::string exterior() { return (kData / "single_bump.json").string(); }

}  // namespace

TEST_CASE("extend matches the golden table") {
  const Run r = run("golden", "--s 0.5 extend --exterior " + exterior() +
                                  " --points=-0.9,-0.5,0,0.3,0.5,0.9,1.5,2.5,3.5");
  REQUIRE(r.code == 0);
  const auto got = read_csv(r.dir / "extend.csv");
  const auto want = read_csv(kData / "extend_s0.5_golden.csv");
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i][0] == want[i][0]);
    CHECK(got[i][1] == Approx(want[i][1]).epsilon(1e-12));
  }
  // Golden entries at 0 and 0.5 against the mpmath reference.
  CHECK(want[2][1] == Approx(0.034348192777019031843).epsilon(1e-12));
  CHECK(want[4][1] == Approx(0.037393358668643364959).epsilon(1e-12));
  CHECK(slurp(r.dir / "stdout.txt").find("extend.csv") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::string args = "--seed 5 span --beta 2";
  const Run a = run("det_a", args);
  const Run b = run("det_b", args);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(slurp(a.dir / "span.json") == slurp(b.dir / "span.json"));
  CHECK(slurp(a.dir / "span_residual.csv") == slurp(b.dir / "span_residual.csv"));

  const std::string approx = "approx --target square --k 1 --eps 0.1 --method global-lsq";
  const Run c = run("det_c", approx);
  const Run d = run("det_d", approx);
  REQUIRE(c.code == 0);
  REQUIRE(d.code == 0);
  CHECK(slurp(c.dir / "approx.json") == slurp(d.dir / "approx.json"));
  CHECK(slurp(c.dir / "approx_profile.csv") == slurp(d.dir / "approx_profile.csv"));
  CHECK(slurp(c.dir / "approx.json").find("wall_time") == std::string::npos);
}

TEST_CASE("timing is opt-in") {
  const Run r = run("timing", "--timing approx --target square --k 0 --eps 0.1 --method global-lsq");
  REQUIRE(r.code == 0);
  CHECK(slurp(r.dir / "approx.json").find("wall_time") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("bad_flag", "extend --no-such-flag").code == 2);
  CHECK(run("missing", "extend").code == 2);
  CHECK(run("bad_s", "--s 1.5 extend --exterior " + exterior() + " --points 0").code == 2);
  CHECK(run("malformed", "extend --exterior " + (kData / "malformed.json").string() + " --points 0").code == 2);
  CHECK(run("no_file", "extend --exterior /nonexistent.json --points 0").code == 2);
  CHECK(run("bad_target", "approx --target nonsense --k 0 --eps 0.1").code == 2);
  CHECK(run("bad_method", "approx --target square --k 0 --eps 0.1 --method newton").code == 2);
  CHECK(run("bad_order", "approx --target square --k 4 --eps 0.1").code == 2);
  CHECK(run("bad_e", "blowup --j 4 --e 0").code == 2);
  const Run r = run("msg", "--s 1.5 extend --exterior " + exterior() + " --points 0");
  CHECK_FALSE(slurp(r.dir / "stderr.txt").empty());
}

TEST_CASE("numerical failures exit with 3") {
  CHECK(run("rank", "span --beta 3 --count 2").code == 3);
  CHECK(run("budget", "approx --target exp --k 0 --eps 0.1").code == 3);
}

TEST_CASE("explicit flags override the config file") {
  const std::string cfg = (kData / "config_quarter.json").string();
  const Run from_cfg = run("cfg", "--config " + cfg + " extend --exterior " + exterior() + " --points 0,0.5");
  REQUIRE(from_cfg.code == 0);
  const auto a = read_csv(from_cfg.dir / "extend.csv");
  CHECK(a[0][1] == Approx(0.036399454799921450032).epsilon(1e-9));
  CHECK(a[1][1] == Approx(0.042539022595804046739).epsilon(1e-9));

  const Run both = run("cfg_flag", "--config " + cfg + " --s 0.75 extend --exterior " + exterior() +
                                       " --points 0,0.5");
  REQUIRE(both.code == 0);
  const auto b = read_csv(both.dir / "extend.csv");
  CHECK(b[0][1] == Approx(0.01624413442056652916).epsilon(1e-9));
  CHECK(b[1][1] == Approx(0.016473521578333943983).epsilon(1e-9));

  // The config grid (21 points) drives the --from/--to range.
  const Run grid = run("cfg_grid", "--config " + cfg + " extend --exterior " + exterior() +
                                       " --from=-0.5 --to 0.5");
  REQUIRE(grid.code == 0);
  CHECK(read_csv(grid.dir / "extend.csv").size() == 21);
}

TEST_CASE("every subcommand writes its outputs") {
  CHECK(run("growth", "growth").code == 0);
  CHECK(fs::exists(run("growth2", "growth --amplitude 2").dir / "growth.json"));
  const Run g = run("growth3", "--s 0.5 growth");
  const fracdense::Json j = fracdense::parse_json(slurp(g.dir / "growth.json"), "growth");
  CHECK(j["kappa_direct"].get<double>() == Approx(0.11686458818775874865).epsilon(1e-9));
  CHECK(j["kappa_fit"].get<double>() == Approx(0.11686458818775874865).epsilon(0.02));

  const Run b = run("blowup", "blowup --j 4,64 --e -1");
  REQUIRE(b.code == 0);
  const auto rows = read_csv(b.dir / "blowup.csv");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][2] < rows[0][2]);

  const Run r = run("residual", "residual --exterior " + exterior());
  REQUIRE(r.code == 0);
  const fracdense::Json rj = fracdense::parse_json(slurp(r.dir / "residual.json"), "residual");
  CHECK(rj["relative_max"].get<double>() <= 1e-6);

  const Run m = run("mollify", "mollify --target exp --k 1 --eps 0.05");
  REQUIRE(m.code == 0);
  const fracdense::Json mj = fracdense::parse_json(slurp(m.dir / "mollify.json"), "mollify");
  CHECK(mj["error"].get<double>() <= 0.05);
  CHECK(mj["n"] == 1);

  const Run t = run("target_file", "approx --target-file " + (kData / "square.json").string() +
                                       " --k 1 --eps 0.1 --method global-lsq");
  REQUIRE(t.code == 0);
  CHECK(fs::exists(t.dir / "approx_profile.csv"));
}
