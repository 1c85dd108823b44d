#pragma once

// Pipeline driver behind the fgoc command line: parse, elaborate, generate,
// render; plus the oracle runner, IR dump and test-vector export.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fgo/codegen.hpp"
#include "fgo/ir.hpp"

namespace fgo::emit {

enum ExitCode {
  kOk = 0,
  kParseError = 1,
  kTypeError = 2,
  kCodegenError = 3,
  kToolchainError = 4,
  kMatchFailed = 5,
  kOutOfFuel = 6,
  kUsage = 64,
};

enum class Mode { Compile, Run, DumpIr, Check, Vectors };
enum class Engine { Oracle, Go };

struct CompileJob {
  Mode mode = Mode::Compile;
  std::string inputPath;
  std::string outputDir = ".";
  std::string packageName = "main";
  std::optional<std::string> adaptPath;
  bool goCheck = false;
  /// run: entry function and its arguments in surface syntax
  std::string entry;
  std::string args;
  Engine engine = Engine::Oracle;
  std::uint64_t fuel = 1'000'000;
  /// vectors: JSON array of {"entry": name, "args": [term, ...]}; the
  /// argument "nil" stands for a nil scrutinee
  std::string specPath;
  /// dump-ir: dump the program after dictionary elaboration
  bool elaborated = false;
};

/// Any pipeline failure, carrying its exit code.
struct Failure {
  int code;
  std::string message;
};

struct Pipeline {
  ir::Program source;
  ir::Program elaborated;
  std::unique_ptr<codegen::Generator> generator;
};

/// Throws Failure. With `generate` unset the generator is left empty.
Pipeline build(std::string_view src, const codegen::AdaptationTable& table,
               const std::string& package = "main", bool generate = true);

bool valid_package_name(std::string_view name);
std::string ir_json(const ir::Program& p);
std::string manifest_json(const codegen::Generator& g);

int execute(const CompileJob& job, std::ostream& out, std::ostream& err);

}  // namespace fgo::emit
