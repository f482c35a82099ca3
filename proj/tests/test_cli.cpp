#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "piclab/cli.hpp"
#include "piclab/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using piclab::cli::run_cli;

namespace {

const fs::path kFixtures = PICLAB_FIXTURE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("piclab_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

json read(const std::string& p) { return piclab::io::read_json_file(p); }

}  // namespace

TEST_CASE("decompose report on the bsc fixture") {
  TempDir tmp;
  const std::string out = tmp.file("report.json");
  const int rc = run_cli({"decompose", "--input", (kFixtures / "bsc01.json").string(),
                          "--output", out});
  REQUIRE(rc == 0);
  json rep = read(out);
  REQUIRE(rep.at("decomposition").at("lambdas").size() == 1);
  CHECK(rep["decomposition"]["lambdas"][0].get<double>() == doctest::Approx(0.64).epsilon(1e-10));
  CHECK(rep["maximal_correlation"].get<double>() == doctest::Approx(0.8).epsilon(1e-10));
}

TEST_CASE("bound report carries the exact error and the pic-fano value") {
  TempDir tmp;
  const std::string out = tmp.file("bounds.json");
  const int rc = run_cli({"bound", "--input", (kFixtures / "bsc01.json").string(), "--all",
                          "--M", "2", "--output", out});
  REQUIRE(rc == 0);
  json rep = read(out);
  CHECK(rep["exact"]["map_error"].get<double>() == doctest::Approx(0.1).epsilon(1e-10));
  bool found_fano = false;
  for (const auto& b : rep["bounds"]) {
    if (b["kind"] == "pic_fano") {
      found_fano = true;
      CHECK(b["value"].get<double>() == doctest::Approx(0.1).epsilon(1e-9));
    }
  }
  CHECK(found_fano);
  CHECK(rep["function_bounds"]["pem_exact"].get<double>() == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("privacy report on the erasure fixture") {
  TempDir tmp;
  const std::string out = tmp.file("privacy.json");
  const std::string csv = tmp.file("curves.csv");
  const int rc = run_cli({"privacy", "--input", (kFixtures / "erasure.json").string(),
                          "--output", out, "--csv-curves", csv});
  REQUIRE(rc == 0);
  json rep = read(out);
  CHECK(rep["perfect_privacy_feasible"].get<bool>());
  CHECK(rep["t_star_lower"].get<double>() == 1.0);
  CHECK(rep["t0"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

  std::ifstream curves(csv);
  std::string header;
  std::getline(curves, header);
  CHECK(header == "t,lower,upper,estimate");
  std::size_t rows = 0;
  for (std::string line; std::getline(curves, line);) rows += !line.empty();
  CHECK(rows == 64);
}

TEST_CASE("verify cross-checks and byte-identical round trip") {
  TempDir tmp;
  const std::string report = tmp.file("dec.json");
  REQUIRE(run_cli({"decompose", "--input", (kFixtures / "bsc01.json").string(), "--output",
                   report, "--seed", "9"}) == 0);
  const std::string vout = tmp.file("verify.json");
  const int rc = run_cli({"verify", "--input", (kFixtures / "bsc01.json").string(),
                          "--against", report, "--seed", "9", "--output", vout});
  REQUIRE(rc == 0);
  json rep = read(vout);
  CHECK(rep["pass"].get<bool>());
  bool saw_roundtrip = false;
  for (const auto& c : rep["checks"]) {
    CHECK(c["pass"].get<bool>());
    if (c["name"] == "roundtrip_lambdas") saw_roundtrip = true;
  }
  CHECK(saw_roundtrip);
}

TEST_CASE("boolean subcommand: spectrum and conjecture harness") {
  TempDir tmp;
  const std::string noise = tmp.file("noise.json");
  piclab::io::write_json_file(noise, json::array({0.81, 0.09, 0.09, 0.01}));
  const std::string out = tmp.file("boolean.json");
  REQUIRE(run_cli({"boolean", "--input", noise, "--n", "1", "--delta", "0.1", "--output",
                   out}) == 0);
  json rep = read(out);
  CHECK(rep["spectrum"]["c"][3].get<double>() == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(rep["pics"][0].get<double>() == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(rep["conjecture"]["violations"].empty());
}

TEST_CASE("csv ingestion drives empirical joints") {
  TempDir tmp;
  const std::string csv = tmp.file("samples.csv");
  {
    std::ofstream out(csv);
    out << "x,y\n";
    for (int i = 0; i < 10; ++i) out << "a,0\n";
    for (int i = 0; i < 10; ++i) out << "b,1\n";
  }
  const std::string out = tmp.file("emp.json");
  REQUIRE(run_cli({"decompose", "--input", csv, "--csv", "--header", "--output", out}) == 0);
  json rep = read(out);
  CHECK(rep["decomposition"]["lambdas"][0].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exit codes distinguish validation from numerical failures") {
  TempDir tmp;
  CHECK(run_cli({"decompose", "--input", tmp.file("missing.json")}) == 1);

  const std::string bad = tmp.file("bad.json");
  piclab::io::write_json_file(bad, json{{"p", json::array({json::array({0.7, 0.7})})}});
  CHECK(run_cli({"decompose", "--input", bad}) == 1);

  const std::string not_json = tmp.file("garbled.json");
  piclab::io::write_text_file(not_json, "not json at all");
  CHECK(run_cli({"decompose", "--input", not_json}) == 1);
}
