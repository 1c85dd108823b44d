#include <iostream>

#include <CLI11.hpp>

#include "fgo/emit.hpp"

using fgo::emit::CompileJob;
using fgo::emit::Mode;

int main(int argc, char** argv) {
  CLI::App app{"fgoc: compile functional programs to Go"};
  app.require_subcommand(1);

  CompileJob job;
  std::string adapt;
  std::string engine = "oracle";

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", job.inputPath, "source file")->required()->check(CLI::ExistingFile);
    sub->add_option("--adapt", adapt, "adaptation table (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--package", job.packageName, "Go package name");
  };

  auto* compile = app.add_subcommand("compile", "write <out>/<package>.go and its manifest");
  common(compile);
  compile->add_option("--out", job.outputDir, "output directory");
  compile->add_flag("--go-check", job.goCheck, "run go vet and go build on the output");

  auto* check = app.add_subcommand("check", "generate and check well-formedness only");
  common(check);

  auto* run = app.add_subcommand("run", "evaluate an entry function");
  common(run);
  run->add_option("--entry", job.entry, "function name")->required();
  run->add_option("--args", job.args, "arguments in surface syntax");
  run->add_option("--fuel", job.fuel, "evaluation step budget");
  run->add_option("--engine", engine, "oracle or go")->check(CLI::IsMember({"oracle", "go"}));

  auto* dump = app.add_subcommand("dump-ir", "print the IR as JSON");
  common(dump);
  dump->add_flag("--elaborated", job.elaborated, "after dictionary elaboration");

  auto* vectors = app.add_subcommand("vectors", "export oracle test vectors");
  common(vectors);
  vectors->add_option("--spec", job.specPath, "JSON list of {entry, args}")->required()->check(CLI::ExistingFile);
  vectors->add_option("--fuel", job.fuel, "evaluation step budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return fgo::emit::kUsage;
  }

  if (!adapt.empty()) job.adaptPath = adapt;
  job.engine = engine == "go" ? fgo::emit::Engine::Go : fgo::emit::Engine::Oracle;
  if (*compile) job.mode = Mode::Compile;
  if (*check) job.mode = Mode::Check;
  if (*run) job.mode = Mode::Run;
  if (*dump) job.mode = Mode::DumpIr;
  if (*vectors) job.mode = Mode::Vectors;
  return fgo::emit::execute(job, std::cout, std::cerr);
}
