#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fgo/emit.hpp"
#include "support/fixtures.hpp"

using namespace fgo;
using emit::CompileJob;
using emit::Mode;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result exec(const CompileJob& job) {
  std::ostringstream out, err;
  int code = emit::execute(job, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("fgoc-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CompileJob run_job(const std::string& entry, const std::string& args) {
  CompileJob job;
  job.mode = Mode::Run;
  job.inputPath = test::fixture_path("fig1.fml");
  job.entry = entry;
  job.args = args;
  return job;
}

}  // namespace

TEST_CASE("run prints the oracle value") {
  auto r = exec(run_job("hd2", "(Cons Zero (Cons (Suc Zero) Nil))"));
  CHECK(r.code == 0);
  CHECK(r.out == "Some(Suc(Zero))\n");
  CHECK(exec(run_job("hd2", "Nil")).out == "None\n");

  auto go = run_job("hd2", "(Cons Zero (Cons (Suc Zero) Nil))");
  go.engine = emit::Engine::Go;
  CHECK(exec(go).out == "Some(Suc(Zero))\n");

  auto missing = exec(run_job("frobnicate", "Nil"));
  CHECK(missing.code == emit::kTypeError);
  CHECK(!missing.err.empty());
}

TEST_CASE("run exit codes") {
  auto dir = scratch("run");
  std::string src = write(dir / "p.fml",
                          "datatype 'a list = Nil | Cons 'a ('a list)\n"
                          "fun hd :: 'a list => 'a where\n"
                          "  hd (Cons x xs) = x\n"
                          "fun loop :: int => int where\n"
                          "  loop n = loop (int_plus n 1)\n");
  CompileJob job;
  job.mode = Mode::Run;
  job.inputPath = src;
  job.entry = "hd";
  job.args = "Nil";
  auto r = exec(job);
  CHECK(r.code == emit::kMatchFailed);
  CHECK(r.out == "match failed\n");
  job.entry = "loop";
  job.args = "0";
  job.fuel = 10'000;
  CHECK(exec(job).code == emit::kOutOfFuel);
}

TEST_CASE("compile writes the package and manifest") {
  auto dir = scratch("compile");
  CompileJob job;
  job.inputPath = test::fixture_path("rbt.fml");
  job.outputDir = dir.string();
  job.packageName = "rbttest";
  auto r = exec(job);
  REQUIRE(r.code == 0);
  std::string go = slurp(dir / "rbttest.go");
  CHECK(go.rfind("package rbttest\n", 0) == 0);
  CHECK(go.find("func BaliL[a any]") != std::string::npos);
  auto manifest = nlohmann::json::parse(slurp(dir / "rbttest.manifest.json"));
  CHECK(manifest["values"]["baliL"] == "BaliL");
  CHECK(manifest["ctors"]["Pair"] == "Prod");

  // identical jobs give identical bytes
  std::string first = go, firstManifest = slurp(dir / "rbttest.manifest.json");
  REQUIRE(exec(job).code == 0);
  CHECK(slurp(dir / "rbttest.go") == first);
  CHECK(slurp(dir / "rbttest.manifest.json") == firstManifest);
}

TEST_CASE("empty input gives an empty package") {
  auto dir = scratch("empty");
  CompileJob job;
  job.inputPath = write(dir / "empty.fml", "");
  job.outputDir = dir.string();
  CHECK(exec(job).code == 0);
  CHECK(slurp(dir / "main.go") == "package main\n\nimport (\n)\n");
}

TEST_CASE("error exit codes") {
  auto dir = scratch("errors");
  CompileJob job;
  job.outputDir = dir.string();
  job.inputPath = write(dir / "syntax.fml", "fun f :: int where f =\n");
  auto parse = exec(job);
  CHECK(parse.code == emit::kParseError);
  CHECK(parse.err.find("1:") != std::string::npos);

  job.inputPath = write(dir / "type.fml", "fun f :: int => int where\n  f x = True\n");
  CHECK(exec(job).code == emit::kTypeError);

  job.inputPath = write(dir / "instance.fml",
                        "datatype unit = Unit\n"
                        "class semigroup where\n  (+) :: 'a => 'a => 'a\n"
                        "fun f :: unit => unit where\n  f x = x + x\n");
  CHECK(exec(job).code == emit::kTypeError);

  job.inputPath = test::fixture_path("fig1.fml");
  job.adaptPath = write(dir / "bad.json", R"({"consts": {"not": {"template": "!%1", "arity": 2}}})");
  CHECK(exec(job).code == emit::kCodegenError);
  job.adaptPath.reset();

  job.packageName = "Main";
  CHECK(exec(job).code == emit::kUsage);
  CHECK(!emit::valid_package_name("func"));
  CHECK(emit::valid_package_name("rbttest"));
}

TEST_CASE("test vectors") {
  auto dir = scratch("vectors");
  CompileJob job;
  job.mode = Mode::Vectors;
  job.inputPath = test::fixture_path("fig1.fml");
  job.specPath = write(dir / "spec.json",
                       R"js([{"entry": "hd2", "args": ["Nil"]},
                           {"entry": "sum", "args": ["Cons (Suc Zero) (Cons (Suc Zero) Nil)"]},
                           {"entry": "hd2", "args": ["nil"]}])js");
  auto r = exec(job);
  REQUIRE(r.code == 0);
  auto v = nlohmann::json::parse(r.out);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == nlohmann::json::parse(R"({"entry":"Hd2","args":["Nil"],"expected":"None"})"));
  CHECK(v[1]["expected"] == "Suc(Suc(Zero))");
  CHECK(v[2]["expectedPanic"] == true);
}

TEST_CASE("IR dump") {
  CompileJob job;
  job.mode = Mode::DumpIr;
  job.inputPath = test::fixture_path("hd2_eqn.fml");
  auto r = exec(job);
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j.contains("decls"));
  bool found = false;
  for (const auto& d : j["decls"])
    if (d["kind"] == "fun" && d["name"] == "hd2") {
      found = true;
      CHECK(d["equations"].size() == 3);
      CHECK(d["equations"][0]["params"][0]["kind"] == "pcon");
    }
  CHECK(found);

  job.inputPath = test::fixture_path("fig1.fml");
  job.elaborated = true;
  auto e = nlohmann::json::parse(exec(job).out);
  for (const auto& d : e["decls"]) CHECK(d["kind"] != "class");
}

TEST_CASE("check mode") {
  CompileJob job;
  job.mode = Mode::Check;
  job.inputPath = test::fixture_path("hierarchy.fml");
  auto r = exec(job);
  CHECK(r.code == 0);
  CHECK(r.out == "ok\n");
}
