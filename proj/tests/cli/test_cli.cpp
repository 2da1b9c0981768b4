#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "geowl/io.hpp"
#include "geowl/refine.hpp"
#include "geowl/symmetry.hpp"
#include "test_support.hpp"

using namespace geowl;
using namespace geowl::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GEOWL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

json parse_output(const RunResult& result) {
  const json j = json::parse(result.output, nullptr, false);
  REQUIRE_FALSE(j.is_discarded());
  return j;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("geowl_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& content) const {
    const fs::path p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

std::string fixture(const std::string& name) {
  return (fs::path(GEOWL_FIXTURE_DIR) / name).string();
}

const std::string kTriangleXyz =
    "3\nequilateral side 1.5\nC 0.8660254037844386 0 0\n"
    "C -0.4330127018922193 0.75 0\nC -0.4330127018922193 -0.75 0\n";

}  // namespace

TEST_CASE("distinguish verdicts and exit codes on a verified pair") {
  const std::string pair = fixture("pair_dodecahedron_s10_0.json");

  const RunResult blind = run_cli("distinguish --model d " + pair);
  CHECK(blind.exit_code == 3);
  CHECK(parse_output(blind)["verdict"] == "not_distinguished");

  for (const std::string model : {"geongnn", "dimenet-edge", "2fwl"}) {
    const RunResult sep = run_cli("distinguish --model " + model + " " + pair);
    CHECK(sep.exit_code == 0);
    CHECK(parse_output(sep)["verdict"] == "distinguished");
  }
}

TEST_CASE("fingerprint output matches the library on the same input") {
  TempDir tmp;
  const std::string file = tmp.file("tri.xyz", kTriangleXyz);
  const RunResult res = run_cli("fingerprint --model d --decimals 8 " + file);
  REQUIRE(res.exit_code == 0);
  const json out = parse_output(res);

  RefineConfig cfg;
  cfg.quantizer = Quantizer(8);
  const PointCloud cloud = parse_xyz(kTriangleXyz).front();
  const Fingerprint expected = fingerprint_of(cloud, Model::D, cfg);
  CHECK(out["results"][0]["digest"] == expected.digest.hex());
  CHECK(out["results"][0]["class_histogram"] == json::array({3}));
  CHECK(out["config"]["decimals"] == 8);
}

TEST_CASE("reports are byte-identical across runs") {
  TempDir tmp;
  const std::string file = tmp.file("tri.xyz", kTriangleXyz);
  const RunResult a = run_cli("fingerprint --model geongnn " + file);
  const RunResult b = run_cli("fingerprint --model geongnn " + file);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("symmetry command agrees with the library") {
  TempDir tmp;
  const std::string file = tmp.file("tri.xyz", kTriangleXyz);
  const RunResult res = run_cli("symmetry --eps 1e-6 " + file);
  REQUIRE(res.exit_code == 0);
  const json out = parse_output(res);
  CHECK(out["results"][0]["c_symmetric"] == true);
  CHECK(out["results"][0]["d_symmetric"] == true);

  const SymmetryReport rep =
      classify_symmetry(parse_xyz(kTriangleXyz).front(), Quantizer(9), 1e-6);
  CHECK(out["results"][0]["k_classes_d"] == rep.k_classes_d);
}

TEST_CASE("scan over seeded gaussian clouds reports zero symmetry") {
  TempDir tmp;
  Rng rng(7100);
  std::string xyz;
  for (int i = 0; i < 50; ++i) {
    xyz += "8\nrandom\n";
    for (int p = 0; p < 8; ++p) {
      char line[128];
      std::snprintf(line, sizeof(line), "X %.12f %.12f %.12f\n", rng.gaussian(),
                    rng.gaussian(), rng.gaussian());
      xyz += line;
    }
  }
  const std::string file = tmp.file("randoms.xyz", xyz);
  const std::string csv = (tmp.path / "table.csv").string();
  const RunResult res =
      run_cli("scan --eps-grid 1e-6,1e-3 --decimals 6 --csv " + csv + " " + file);
  REQUIRE(res.exit_code == 0);
  const json out = parse_output(res);
  CHECK(out["counted"] == 50);
  CHECK(out["rows"][0]["proportion_c"] == 0.0);
  CHECK(out["rows"][0]["proportion_d"] == 0.0);

  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "eps,proportion_c,proportion_d");

  // Without --decimals the scan preset drops to coarse rounding.
  const RunResult preset = run_cli("scan --eps-grid 1e-6 " + file);
  CHECK(parse_output(preset)["config"]["decimals"] == 2);
}

TEST_CASE("reconstruct round trips through the CLI") {
  TempDir tmp;
  Rng rng(7200);
  std::string xyz = "6\nseeded\n";
  for (int p = 0; p < 6; ++p) {
    char line[128];
    std::snprintf(line, sizeof(line), "X %.12f %.12f %.12f\n", rng.gaussian(), rng.gaussian(),
                  rng.gaussian());
    xyz += line;
  }
  const std::string file = tmp.file("cloud.xyz", xyz);
  for (const std::string group : {"e3", "se3"}) {
    const RunResult res = run_cli("reconstruct --group " + group + " " + file);
    REQUIRE(res.exit_code == 0);
    const json out = parse_output(res);
    CHECK(out["results"][0]["round_trip_rmsd"].get<double>() <= 1e-6);
  }
}

TEST_CASE("gen-counterexamples emits verified pairs") {
  const RunResult res =
      run_cli("gen-counterexamples --kind icosahedron --subset-size 6 --budget 1000000 --seed 1");
  REQUIRE(res.exit_code == 0);
  const json out = parse_output(res);
  REQUIRE(out["pairs"].size() >= 1);
  CHECK(out["pairs"][0]["verified_noniso"] == true);
  CHECK(out["pairs"][0]["verified_blind"]["d"] == true);
  CHECK(out["pairs"][0]["verified_blind"]["geongnn"] == false);
  CHECK(out["budget_exhausted"] == false);
}

TEST_CASE("config file supplies defaults that flags override") {
  TempDir tmp;
  const std::string file = tmp.file("tri.xyz", kTriangleXyz);
  const std::string cfg = tmp.file("geowl.cfg", "[fingerprint]\ndecimals=7\n");

  const RunResult via_config = run_cli("--config " + cfg + " fingerprint --model d " + file);
  REQUIRE(via_config.exit_code == 0);
  const RunResult via_flag = run_cli("fingerprint --model d --decimals 7 " + file);
  CHECK(parse_output(via_config)["results"][0]["digest"] ==
        parse_output(via_flag)["results"][0]["digest"]);

  const RunResult overridden =
      run_cli("--config " + cfg + " fingerprint --model d --decimals 5 " + file);
  CHECK(parse_output(overridden)["config"]["decimals"] == 5);

  const std::string bad = tmp.file("bad.cfg", "[fingerprint]\nno_such_option=1\n");
  const RunResult rejected = run_cli("--config " + bad + " fingerprint --model d " + file);
  CHECK(rejected.exit_code == 1);
}

TEST_CASE("error reporting") {
  TempDir tmp;
  SUBCASE("parse errors exit 1 with a machine-readable object") {
    const std::string file = tmp.file("broken.xyz", "3\n\nH 0 0 0\nH 1 0 0\n");
    const RunResult res = run_cli("fingerprint --model d " + file);
    CHECK(res.exit_code == 1);
    const json out = parse_output(res);
    CHECK(out["error"]["type"] == "ParseError");
    CHECK(out["error"]["line"] == 5);
  }
  SUBCASE("unknown model exits 1") {
    const std::string file = tmp.file("tri.xyz", kTriangleXyz);
    const RunResult res = run_cli("fingerprint --model bogus " + file);
    CHECK(res.exit_code == 1);
    CHECK(parse_output(res)["error"]["type"] == "ConfigError");
  }
  SUBCASE("internal limits exit 2") {
    // max-iters=1 trips the stabilization guard on this line cloud.
    std::string xyz = "4\nline\nX 0 0 0\nX 1 0 0\nX 2 0 0\nX 4 0 0\n";
    const std::string file = tmp.file("line.xyz", xyz);
    const RunResult res = run_cli("fingerprint --model d --max-iters 1 " + file);
    CHECK(res.exit_code == 2);
    CHECK(parse_output(res)["error"]["type"] == "InternalError");
  }
}

TEST_CASE("threads flag caps workers but keeps digests identical") {
  TempDir tmp;
  const std::string file = tmp.file("tri.xyz", kTriangleXyz);
  const RunResult one = run_cli("fingerprint --model geongnn --threads 1 " + file);
  const RunResult many = run_cli("fingerprint --model geongnn --threads 4 " + file);
  REQUIRE(one.exit_code == 0);
  REQUIRE(many.exit_code == 0);
  CHECK(parse_output(one)["results"][0]["digest"] ==
        parse_output(many)["results"][0]["digest"]);
}
