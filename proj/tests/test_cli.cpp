#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "qkflag");
  std::ostringstream out, err;
  const int code = qkflag::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "qkflag_cli_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("present writes four presentations") {
  auto dir = scratch("present");
  auto r = run({"present", "--shape", "1,2:3", "--out", dir.string()});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["schema_version"] == qkflag::cli::kReportSchemaVersion);
  CHECK(doc["files"].size() == 8);
  for (auto kind : {"classical-whitney", "quantum-whitney", "bethe", "wronskian"}) {
    CHECK(std::filesystem::exists(dir / (std::string(kind) + ".json")));
    CHECK(std::filesystem::exists(dir / (std::string(kind) + ".txt")));
  }
  const auto ne_dir = scratch("ne");
  auto ne = run({"present", "--shape", "2:4", "--nonequivariant", "--out", ne_dir.string()});
  CHECK(ne.code == 0);
  std::ifstream f(ne_dir / "quantum-whitney.json");
  CHECK(json::parse(f)["equivariant"] == false);

  CHECK(run({"present", "--shape", "3,2:4"}).code == 2);
  CHECK(run({"present"}).code == 2);
  CHECK(run({}).code == 2);
}

TEST_CASE("verify shapes and files") {
  for (auto shape : {"1:2", "1,2:3"}) {
    auto r = run({"verify", "--shape", shape});
    INFO(r.out << r.err);
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["passed"] == true);
  }
  auto dir = scratch("verify");
  REQUIRE(run({"present", "--shape", "1,2:3", "--out", dir.string()}).code == 0);
  CHECK(run({"verify", "--presentation", (dir / "quantum-whitney.json").string()}).code == 0);

  std::ifstream in(dir / "quantum-whitney.json");
  auto doc = json::parse(in);
  doc["relations"][0]["terms"][0]["c"] = "7";
  std::ofstream(dir / "sabotaged.json") << doc.dump();
  auto bad = run({"verify", "--presentation", (dir / "sabotaged.json").string()});
  CHECK(bad.code == 1);
  auto rep = json::parse(bad.out);
  bool named = false;
  for (const auto& c : rep["checks"])
    if (c["name"] == "ideal-equality:quantum-whitney") named = c["passed"] == false;
  CHECK(named);

  std::ofstream(dir / "junk.json") << "{}";
  CHECK(run({"verify", "--presentation", (dir / "junk.json").string()}).code == 1);
  CHECK(run({"verify", "--presentation", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("spectrum refuses outside the radius") {
  auto r = run({"spectrum", "--shape", "1:2", "--nonequivariant", "--q", "1/4"});
  REQUIRE(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["checks"][0]["detail"]["max_relative_distance"].get<double>() < 1e-12);
  CHECK(run({"spectrum", "--shape", "1,2:3", "--seed", "17", "--q", "1/8,1/9"}).code == 0);
  CHECK(run({"spectrum", "--shape", "1:2", "--q", "0.9"}).code == 2);
  CHECK(run({"spectrum", "--shape", "1:2", "--q", "0.9", "--force"}).code == 0);
  CHECK(run({"spectrum", "--shape", "1:2"}).code == 2);
  CHECK(run({"spectrum", "--shape", "1:2", "--q", "1/4", "--lambda", "2,3,5"}).code == 2);
  CHECK(run({"spectrum", "--shape", "1:2", "--q", "1/4", "--lambda", "2,2"}).code == 0);
}

TEST_CASE("jfun sweeps and determinism") {
  auto r = run({"jfun", "--shape", "1:2", "--cap", "4"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["rows"].size() == 5);
  auto zero = json::parse(run({"jfun", "--shape", "1:2", "--cap", "0"}).out);
  CHECK(zero["rows"].size() == 1);
  CHECK(zero["rows"][0]["d"] == "0");
  auto f = run({"jfun", "--shape", "1,2:3", "--cap", "3"});
  CHECK(f.code == 0);
  CHECK(f.out == run({"jfun", "--shape", "1,2:3", "--cap", "3"}).out);

  auto dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"shape":"1,2:3","q":["1/8","1/9"],"seed":17})";
  auto a = run({"spectrum", "--config", (dir / "cfg.json").string()});
  auto b = run({"spectrum", "--shape", "1,2:3", "--seed", "17", "--q", "1/8,1/9"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto text = run({"jfun", "--shape", "1:2", "--cap", "1", "--text"});
  CHECK(text.out.find("PASS degree-bounds") != std::string::npos);
}
