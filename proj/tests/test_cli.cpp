#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "rankcorr/error.hpp"

using rankcorr::cli::run_cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"rankcorr"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = fs::temp_directory_path() / ("rankcorr_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("estimate on the hand example") {
  const auto path = write_temp("hand.csv", "x,y\n1,10\n2,30\n3,20\n");
  const auto r = cli({"--json", "estimate", path.c_str()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["results"]["n"] == 3);
  CHECK(j["results"]["r_new"].get<double>() == doctest::Approx(0.2));
  CHECK(j["results"]["kendall"].get<double>() == doctest::Approx(1.0 / 3));
  CHECK(j["manifest"]["command"] == "estimate");
  CHECK(j["manifest"]["seed"] == 42);

  // Text and JSON carry the same numbers.
  const auto text = cli({"estimate", path.c_str()});
  CHECK(text.code == 0);
  CHECK(text.out.find("0.2") != std::string::npos);
}

TEST_CASE("column selection") {
  const auto path = write_temp("cols.csv", "1,5,10\n2,4,30\n3,3,20\n");
  const auto r = cli({"--json", "estimate", path.c_str(), "--cols", "1,2"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["results"]["kendall"].get<double>() == doctest::Approx(-1.0));
  CHECK(cli({"estimate", path.c_str(), "--cols", "1,7"}).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"estimate", "/nonexistent/file.csv"}).code == 2);
  CHECK(cli({"theory", "--model", "fgm", "--t", "3"}).code == 4);
  CHECK(cli({"theory", "--model", "nope", "--t", "0.1"}).code == 4);
  CHECK(cli({"table", "--reproduce", "9.9"}).code == 4);
  const auto tied = write_temp("tied.csv", "1,1\n2,1\n3,2\n");
  const auto r = cli({"estimate", tied.c_str()});
  CHECK(r.code == 3);
  CHECK(r.err.find("rows 1 and 2") != std::string::npos);
  CHECK(cli({"estimate", tied.c_str(), "--jitter"}).code == 0);
}

TEST_CASE("locale-formatted numbers are rejected") {
  std::istringstream in("1,5;2,5\n3,5;4,5\n");
  CHECK_THROWS_WITH_AS(rankcorr::cli::read_csv(in), doctest::Contains("decimal point only"), rankcorr::InputError);
  std::istringstream header("a,b\n1,2\n3,4\n");
  const auto d = rankcorr::cli::read_csv(header);
  CHECK(d.had_header);
  CHECK(d.x.size() == 2);
}

TEST_CASE("theory values") {
  auto j = nlohmann::json::parse(cli({"--json", "theory", "--model", "fgm", "--t", "0"}).out)["results"];
  CHECK(j["variances"][0]["leading_coeff"].get<double>() == doctest::Approx(4.0 / 9));
  CHECK(j["variances"][1]["leading_coeff"].get<double>() == doctest::Approx(0.25));

  j = nlohmann::json::parse(cli({"--json", "theory", "--model", "normal", "--t", "0.7"}).out)["results"];
  CHECK(j["coefficients"]["tau"].get<double>() == doctest::Approx(2 / M_PI * std::asin(0.7)).epsilon(1e-12));

  j = nlohmann::json::parse(cli({"--json", "theory", "--model", "pareto", "--t", "10"}).out)["results"];
  CHECK(j["coefficients"]["rho"].get<double>() == doctest::Approx(0.1));
  CHECK(j["coefficients"]["tau"].get<double>() == doctest::Approx(1.0 / 21));
}

TEST_CASE("table output is reproducible and the manifest sits beside it") {
  const auto out = (fs::temp_directory_path() / "rankcorr_test_table.txt").string();
  const auto a = cli({"--out", out.c_str(), "table", "--reproduce", "2.1", "--reps", "40", "--n", "100"});
  REQUIRE(a.code == 0);
  const auto first = slurp(out);
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["manifest"]["command"] == "table");
  CHECK(manifest["manifest"].contains("output_checksum"));
  REQUIRE(cli({"--out", out.c_str(), "table", "--reproduce", "2.1", "--reps", "40", "--n", "100"}).code == 0);
  CHECK(slurp(out) == first);

  // A different seed changes the simulated cells.
  REQUIRE(cli({"--seed", "7", "--out", out.c_str(), "table", "--reproduce", "2.1", "--reps", "40", "--n", "100"})
              .code == 0);
  CHECK(slurp(out) != first);
}

TEST_CASE("thread count does not change the table") {
  const auto one = cli({"--json", "--threads", "1", "table", "--reproduce", "2.4", "--reps", "30", "--n", "50"});
  const auto three = cli({"--json", "--threads", "3", "table", "--reproduce", "2.4", "--reps", "30", "--n", "50"});
  REQUIRE(one.code == 0);
  REQUIRE(three.code == 0);
  CHECK(nlohmann::json::parse(one.out)["results"] == nlohmann::json::parse(three.out)["results"]);
}

TEST_CASE("RANKCORR_THREADS is validated") {
  ::setenv("RANKCORR_THREADS", "zero", 1);
  CHECK(cli({"theory", "--model", "fgm", "--t", "0.2"}).code == 2);
  ::setenv("RANKCORR_THREADS", "2", 1);
  CHECK(cli({"theory", "--model", "fgm", "--t", "0.2"}).code == 0);
  ::unsetenv("RANKCORR_THREADS");
}

TEST_CASE("bench checks fast against naive") {
  const auto r = cli({"--json", "bench", "--n", "500,2000"});
  REQUIRE(r.code == 0);
  const auto rows = nlohmann::json::parse(r.out)["results"]["rows"];
  REQUIRE(rows.size() == 2);
  CHECK(rows[1]["checked_against_naive"] == true);
}

TEST_CASE("sci4 rendering") {
  CHECK(rankcorr::cli::sci4(4.0 / 9 / 1000) == "4.444e-04");
  CHECK(rankcorr::cli::sci4(0.00025) == "2.500e-04");
}
