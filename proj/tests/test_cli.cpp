// End-to-end tests of the command line tool: exit codes, artifact formats,
// manifest hashes and byte-level determinism across reruns and worker counts.

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "zc/runconfig.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CmdResult {
  int status = -1;
  std::string output;  // stdout + stderr combined
};

const fs::path& test_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "zc_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture = test_dir() / ("cmd_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(ZETACHAOS_BIN) + " " + args + " > " + capture.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  CmdResult res;
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  std::ifstream is(capture);
  std::ostringstream os;
  os << is.rdbuf();
  res.output = os.str();
  return res;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and usage errors") {
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("").status == 2);              // no subcommand
  CHECK(run_cli("frobnicate").status == 2);    // unknown subcommand
  CHECK(run_cli("spectrum").status == 2);      // missing sub-subcommand
  CHECK(run_cli("verify nosuch").status == 2); // not a suite
}

TEST_CASE("seed is mandatory for sampling runs") {
  const auto dir = (test_dir() / "noseed").string();
  const auto r = run_cli("field sample --sigma-exp 3 --grid 16 --out f.csv --out-dir " + dir);
  CHECK(r.status == 2);
  CHECK(r.output.find("--seed") != std::string::npos);
  CHECK(run_cli("inject run --model disc --k 1..3 --replicas 4 --out i.csv --out-dir " +
                dir).status == 2);
  CHECK(run_cli("verify field --out-dir " + dir).status == 2);
}

TEST_CASE("spectrum f prints predicted values") {
  auto r = run_cli("spectrum f --beta 1");
  CHECK(r.status == 0);
  CHECK(lines_of(r.output).at(0) == "0.25");

  r = run_cli("spectrum f --beta 3");
  CHECK(r.status == 0);
  CHECK(lines_of(r.output).at(0) == "2");

  r = run_cli("spectrum f --beta 2i");
  CHECK(r.status == 0);
  CHECK(lines_of(r.output).at(0) == "1");

  // |1+2i| = sqrt(5) > 2, so the prediction is sqrt(5) - 1.
  r = run_cli("spectrum f --beta 1+2i");
  CHECK(r.status == 0);
  CHECK(lines_of(r.output).at(0).substr(0, 15) == "1.2360679774997");

  CHECK(run_cli("spectrum f --beta 1+2x").status == 2);
  CHECK(run_cli("spectrum f --beta ,,").status == 2);
}

TEST_CASE("primes dump prints one block, deep blocks hit the capacity exit") {
  auto r = run_cli("primes dump --k 2");
  CHECK(r.status == 0);
  const auto ls = lines_of(r.output);
  REQUIRE(ls.size() == 12);
  CHECK(ls.front() == "11");
  CHECK(ls.back() == "53");

  CHECK(run_cli("primes dump --k 0").status == 0);
  CHECK(run_cli("primes dump --k 7").status == 3);
  CHECK(run_cli("primes dump --k -1").status == 2);
}

TEST_CASE("primes verify emits the residual table") {
  const auto r = run_cli("primes verify");
  CHECK(r.status == 0);
  const auto ls = lines_of(r.output);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] == "k,sigma,exact,estimate,abs_err,rel_err");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto cells = lines_of(ls[i]);  // sanity: non-empty line
    CHECK(!cells.empty());
  }
}

TEST_CASE("field sample writes table, config sidecar and manifest") {
  const auto dir = (test_dir() / "field_a").string();
  const auto r = run_cli("--seed 5 field sample --sigma-exp 6 --grid 32 --k0 2 "
                         "--out field.csv --out-dir " + dir);
  CHECK(r.status == 0);

  const auto body = slurp(fs::path(dir) / "field.csv");
  const auto ls = lines_of(body);
  REQUIRE(ls.size() == 33);
  CHECK(ls[0] == "h,x");
  CHECK(ls[1].substr(0, 2) == "0,");
  CHECK(ls.back().substr(0, 2) == "1,");

  const json cfg = json::parse(slurp(fs::path(dir) / "field.csv.config.json"));
  CHECK(cfg.at("command") == "field sample");
  CHECK(cfg.at("seed") == 5);
  CHECK(cfg.at("grid") == 32);
  CHECK(cfg.at("k0") == 2);

  const json man = json::parse(slurp(fs::path(dir) / "field.csv.manifest.json"));
  CHECK(man.at("version") == "1.0.0");
  CHECK(man.at("outputs").size() == 2);
  CHECK(man.at("wall_ms").get<double>() >= 0.0);
  zc::config::RunConfig rc;
  rc.params = man.at("config");
  CHECK(rc.hash_hex() == man.at("config_hash").get<std::string>());

  // Identical config and seed must reproduce the table byte for byte.
  const auto dir2 = (test_dir() / "field_b").string();
  const auto r2 = run_cli("--seed 5 field sample --sigma-exp 6 --grid 32 --k0 2 "
                          "--out field.csv --out-dir " + dir2);
  CHECK(r2.status == 0);
  CHECK(slurp(fs::path(dir2) / "field.csv") == body);

  // A different seed must not.
  const auto dir3 = (test_dir() / "field_c").string();
  run_cli("--seed 6 field sample --sigma-exp 6 --grid 32 --k0 2 "
          "--out field.csv --out-dir " + dir3);
  CHECK(slurp(fs::path(dir3) / "field.csv") != body);
}

TEST_CASE("field sample rejects impossible block requests with the capacity exit") {
  const auto dir = (test_dir() / "field_cap").string();
  const auto r = run_cli("--seed 5 field sample --sigma-exp 6 --grid 8 --k0 7 "
                         "--out f.csv --out-dir " + dir);
  CHECK(r.status == 3);
}

TEST_CASE("json format renders tables as json arrays") {
  const auto dir = (test_dir() / "field_json").string();
  const auto r = run_cli("--seed 5 --format json field sample --sigma-exp 4 --grid 8 "
                         "--out f.json --out-dir " + dir);
  CHECK(r.status == 0);
  const json rows = json::parse(slurp(fs::path(dir) / "f.json"));
  REQUIRE(rows.is_array());
  REQUIRE(rows.size() == 8);
  CHECK(rows[0].at("h").is_number());
  CHECK(rows[0].at("x").is_number());
  CHECK(rows[0].at("h").get<double>() == 0.0);
}

TEST_CASE("disc sample writes a self-describing binary") {
  const auto dir = (test_dir() / "disc_a").string();
  const auto r = run_cli("--seed 9 disc sample --n 2 --grid 512 --out d.bin --out-dir " + dir);
  CHECK(r.status == 0);

  const auto raw = slurp(fs::path(dir) / "d.bin");
  const auto nl = raw.find('\n');
  REQUIRE(nl != std::string::npos);
  const json head = json::parse(raw.substr(0, nl));
  CHECK(head.at("grid") == 512);
  CHECK(head.at("n") == 2);
  CHECK(head.at("n_modes").get<int>() >= 1);
  CHECK(head.at("seed") == 9);
  CHECK(head.at("truncated_var").get<double>() > 0.0);

  const std::size_t payload = raw.size() - nl - 1;
  CHECK(payload == 512 * sizeof(double));
  double first = 0.0;
  std::memcpy(&first, raw.data() + nl + 1, sizeof(double));
  CHECK(std::isfinite(first));

  CHECK(fs::exists(fs::path(dir) / "d.bin.manifest.json"));

  // Rerun reproduces the payload bytes.
  const auto dir2 = (test_dir() / "disc_b").string();
  run_cli("--seed 9 disc sample --n 2 --grid 512 --out d.bin --out-dir " + dir2);
  CHECK(slurp(fs::path(dir2) / "d.bin") == raw);
}

TEST_CASE("disc sample rejects grids below the mode bandwidth") {
  const auto dir = (test_dir() / "disc_nyq").string();
  const auto r = run_cli("--seed 9 disc sample --n 8 --grid 512 --out d.bin --out-dir " + dir);
  CHECK(r.status == 2);
}

TEST_CASE("spectrum run writes rows, summary and manifest deterministically") {
  const auto dir = (test_dir() / "spec_a").string();
  const auto r = run_cli("--seed 11 spectrum run --model disc --betas 1 --scales 4..6 "
                         "--replicas 10 --out s.csv --out-dir " + dir);
  CHECK(r.status == 0);

  const auto body = slurp(fs::path(dir) / "s.csv");
  const auto ls = lines_of(body);
  REQUIRE(ls.size() == 31);  // header + 3 scales x 10 replicas
  CHECK(ls[0] == "model,beta_re,beta_im,n,replica,log_mean");
  CHECK(ls[1].substr(0, 5) == "disc,");

  const json summary = json::parse(slurp(fs::path(dir) / "s.csv.summary.json"));
  REQUIRE(summary.is_array());
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].at("slope").is_number());
  CHECK(summary[0].at("ci_halfwidth").get<double>() > 0.0);
  CHECK(summary[0].at("scales") == json({4, 5, 6}));
  CHECK(summary[0].at("predicted").get<double>() == 0.25);

  const json man = json::parse(slurp(fs::path(dir) / "s.csv.manifest.json"));
  zc::config::RunConfig rc;
  rc.params = man.at("config");
  CHECK(rc.hash_hex() == man.at("config_hash").get<std::string>());

  // Worker count must not change a single output byte.
  const auto dir2 = (test_dir() / "spec_b").string();
  const auto r2 = run_cli("--seed 11 --workers 3 spectrum run --model disc --betas 1 "
                          "--scales 4..6 --replicas 10 --out s.csv --out-dir " + dir2);
  CHECK(r2.status == 0);
  CHECK(slurp(fs::path(dir2) / "s.csv") == body);
  CHECK(slurp(fs::path(dir2) / "s.csv.summary.json") ==
        slurp(fs::path(dir) / "s.csv.summary.json"));
}

TEST_CASE("spectrum run handles beta lists and rejects thin designs") {
  const auto dir = (test_dir() / "spec_c").string();
  const auto r = run_cli("--seed 12 spectrum run --model rem --betas 0.5,1+1i "
                         "--scales 8,9,10 --replicas 10 --out rem.csv --out-dir " + dir);
  CHECK(r.status == 0);
  const json summary = json::parse(slurp(fs::path(dir) / "rem.csv.summary.json"));
  REQUIRE(summary.size() == 2);
  CHECK(summary[1].at("beta_im").get<double>() == 1.0);

  // Two scales cannot support the regression-plus-holdout design.
  CHECK(run_cli("--seed 12 spectrum run --model rem --betas 1 --scales 8..9 "
                "--replicas 10 --out x.csv --out-dir " + dir).status == 2);
  // Neither can fewer than ten replicas.
  CHECK(run_cli("--seed 12 spectrum run --model rem --betas 1 --scales 8..10 "
                "--replicas 5 --out x.csv --out-dir " + dir).status == 2);
  CHECK(run_cli("--seed 12 spectrum run --model pluto --betas 1 --scales 8..10 "
                "--replicas 10 --out x.csv --out-dir " + dir).status == 2);
}

TEST_CASE("inject run writes ladder rows and the exceedance report") {
  const auto dir = (test_dir() / "inj_a").string();
  const auto r = run_cli("--seed 13 inject run --model disc --k 1..6 --replicas 8 "
                         "--out inj.csv --out-dir " + dir);
  CHECK(r.status == 0);

  const auto ls = lines_of(slurp(fs::path(dir) / "inj.csv"));
  REQUIRE(ls.size() == 49);  // header + 8 replicas x 6 stages
  CHECK(ls[0] == "replica,k,y_abs,running_max");
  CHECK(ls[1].substr(0, 4) == "0,1,");

  const json exc = json::parse(slurp(fs::path(dir) / "inj.csv.exceedance.json"));
  CHECK(exc.at("note").get<std::string>().find("asymptotic") != std::string::npos);
  REQUIRE(exc.at("rows").size() == 3);
  CHECK(exc.at("rows")[0].at("threshold").get<double>() == 1.0);
  CHECK(exc.at("rows")[0].at("total").get<int>() == 8);

  // Sub-range drops the ladder head but keeps the running maximum semantics.
  const auto dir2 = (test_dir() / "inj_b").string();
  const auto r2 = run_cli("--seed 13 inject run --model disc --k 3..6 --replicas 8 "
                          "--out inj.csv --out-dir " + dir2);
  CHECK(r2.status == 0);
  const auto ls2 = lines_of(slurp(fs::path(dir2) / "inj.csv"));
  REQUIRE(ls2.size() == 33);  // header + 8 x 4
  CHECK(ls2[1].substr(0, 4) == "0,3,");

  // Euler ladder with a shallow exact head stays cheap.
  const auto dir3 = (test_dir() / "inj_c").string();
  const auto r3 = run_cli("--seed 14 inject run --model euler --k 1..3 --replicas 4 "
                          "--k0 2 --out eul.csv --out-dir " + dir3);
  CHECK(r3.status == 0);
  CHECK(lines_of(slurp(fs::path(dir3) / "eul.csv")).size() == 13);

  CHECK(run_cli("--seed 13 inject run --model rem --k 1..3 --replicas 4 "
                "--out x.csv --out-dir " + dir).status == 2);
  CHECK(run_cli("--seed 13 inject run --model disc --k 0..3 --replicas 4 "
                "--out x.csv --out-dir " + dir).status == 2);
}

TEST_CASE("verify specfun and primes run seedless and write reports") {
  const auto dir = (test_dir() / "ver_a").string();
  const auto r = run_cli("verify specfun --out-dir " + dir);
  CHECK(r.status == 0);
  CHECK(r.output.find("RESULT: PASS") != std::string::npos);

  const auto ls = lines_of(slurp(fs::path(dir) / "verify_specfun.csv"));
  REQUIRE(ls.size() >= 4);
  CHECK(ls[0] == "suite,name,kind,cmp,value,bound,pass");
  for (std::size_t i = 1; i < ls.size(); ++i)
    CHECK(ls[i].substr(ls[i].size() - 5) == ",pass");

  CHECK(run_cli("verify primes --out-dir " + dir).status == 0);
  CHECK(fs::exists(fs::path(dir) / "verify_primes.csv"));
}

TEST_CASE("verify field passes with a seed and writes its table") {
  const auto dir = (test_dir() / "ver_b").string();
  const auto r = run_cli("--seed 21 verify field --out-dir " + dir);
  CHECK(r.status == 0);
  CHECK(fs::exists(fs::path(dir) / "verify_field.csv"));
}

TEST_CASE("disc verify emits the covariance, mass and max reports") {
  const auto dir = (test_dir() / "ver_c").string();
  const auto r = run_cli("--seed 22 disc verify --out-dir " + dir);
  CHECK(r.status == 0);
  const auto cov = lines_of(slurp(fs::path(dir) / "disc_covariance.csv"));
  REQUIRE(cov.size() == 5);
  CHECK(cov[0] == "lag,delta_theta,empirical,closed_form,se,z");
  CHECK(fs::exists(fs::path(dir) / "disc_mass.csv"));
  const auto mx = lines_of(slurp(fs::path(dir) / "disc_max.csv"));
  REQUIRE(mx.size() == 3);
  CHECK(mx[0] == "n,replicas,median_over_n,frac_within_1_2");
  CHECK(fs::exists(fs::path(dir) / "verify_disc.csv"));
}

}  // TEST_SUITE
