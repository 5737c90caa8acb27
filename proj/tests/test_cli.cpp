#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cohere/cli.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cohere::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"verify", "--help"}).code == 0);
  CHECK(run({}).code == cohere::kExitUsage);
  CHECK(run({"frobnicate"}).code == cohere::kExitUsage);
  CHECK(run({"measures"}).code == cohere::kExitUsage);
  CHECK(run({"measures", "--named", "nope"}).code == cohere::kExitUsage);
  CHECK(run({"measures", "--named", "plus", "--format", "csv"}).code == cohere::kExitUsage);
  CHECK(run({"verify", "--d", "7"}).code == cohere::kExitUsage);
}

TEST_CASE("measures output") {
  const auto r = run({"measures", "--named", "ghz:3", "--cut", "A|BC"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["tool"] == "cohere");
  CHECK(doc["version"] == cohere::kVersion);
  CHECK(doc.contains("config"));
  CHECK(doc.contains("result"));
  CHECK(r.out.find("\"value\"") != std::string::npos);
}

TEST_CASE("numerical validation failures exit with 3") {
  const auto bad = temp_file("cohere_bad_state.json",
                             R"({"re": [[1.5, 0.0], [0.0, -0.5]], "dims": [2]})");
  const auto r = run({"measures", "--state", bad.string()});
  CHECK(r.code == cohere::kExitNumerical);
  CHECK(r.err.find("error") != std::string::npos);
  std::filesystem::remove(bad);

  const auto good = temp_file("cohere_good_state.json", R"({"amps": [0.8, 0.6]})");
  CHECK(run({"convert", "--state", good.string(), "--ancillas", "2"}).code == 0);
  std::filesystem::remove(good);
}

TEST_CASE("findings exit with 2") {
  CHECK(run({"verify", "--samples", "5", "--seed", "4"}).code == 0);
  CHECK(run({"verify", "--samples", "5", "--seed", "4", "--tolerance", "1e-300",
             "--theorem", "T5"})
            .code == cohere::kExitFinding);
}

TEST_CASE("repeated runs are byte-identical") {
  const std::vector<std::string> args{"cyclic", "--amps", "0.6,0.8", "--seed", "11"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const std::vector<std::string> dyn{"dynamics", "--alpha-steps", "3", "--p-steps", "3"};
  const auto c = run(dyn);
  REQUIRE(c.code == 0);
  CHECK(c.out == run(dyn).out);
  CHECK(c.out.rfind("# cohere ", 0) == 0);
  CHECK(c.out.find("alpha,p,c_d,c_f,tau_med_ub,tau_mef_lb,esd") != std::string::npos);
}

TEST_CASE("tolerance from the environment") {
  ::setenv(cohere::kToleranceEnv, "1e-7", 1);
  const auto r = run({"licc", "--named", "ghz:3", "--outcome", "1"});
  ::unsetenv(cohere::kToleranceEnv);
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["config"]["tolerance"].get<double>() == 1e-7);
  CHECK(doc["config"]["tolerance_source"] == "env");

  // The flag wins over the environment.
  ::setenv(cohere::kToleranceEnv, "1e-7", 1);
  const auto f = run({"--tolerance", "1e-5", "multilevel", "--amps", "0.5,0.5,0.5,0.5"});
  ::unsetenv(cohere::kToleranceEnv);
  REQUIRE(f.code == 0);
  CHECK(nlohmann::json::parse(f.out)["config"]["tolerance"].get<double>() == 1e-5);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "cohere_out.json";
  std::filesystem::remove(path);
  const auto r = run({"measures", "--named", "plus", "--out", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in)["tool"] == "cohere");
  std::filesystem::remove(path);
}
