#pragma once

// Reference interpreter for class-free programs: call-by-value, left to
// right, first matching clause or equation wins.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fgo/ir.hpp"

namespace fgo::oracle {

struct OValue;
using Value = std::shared_ptr<const OValue>;

struct Frame;
using Scope = std::shared_ptr<const Frame>;

struct OCon {
  std::string ctor;
  std::vector<Value> args;
};

struct OClosure {
  std::string binder;
  ir::Term body;
  Scope env;
};

/// A top-level function, constructor or primitive still waiting for arguments.
struct OPartial {
  std::string name;
  std::vector<Value> args;
  std::size_t arity;
};

/// Nullary dictionary entry, evaluated again on every projection.
struct OThunk {
  ir::Term body;
  Scope env;
};

struct OValue {
  std::variant<OCon, OClosure, OPartial, OThunk, prim::Scalar> v;
};

struct Frame {
  std::string name;
  Value value;
  Scope next;
};

Value con(std::string ctor, std::vector<Value> args = {});
Value scalar(prim::Scalar s);

using Environment = std::map<std::string, Value>;

struct Failure {
  enum class Kind { MatchFailed, OutOfFuel };
  Kind kind;
  std::string message;
};

using Result = std::variant<Value, Failure>;

struct Options {
  std::uint64_t fuel = 1'000'000;
  /// Nesting limit; running into it is reported like fuel exhaustion.
  std::size_t maxDepth = 20'000;
};

/// `p` must be class-free (see dict::elaborate).
Result eval(const ir::Program& p, const ir::Term& t, const Environment& env = {},
            const Options& opts = {});

/// Bindings made by matching `pat` against `v`, or nullopt on mismatch.
std::optional<Environment> match(const ir::Pattern& pat, const Value& v);

/// `Ctor(a, b)`, decimal integers, quoted strings; closures print as `<fun>`.
std::string render(const Value& v);
std::string render(const Result& r);

bool is_failure(const Result& r, Failure::Kind k);

}  // namespace fgo::oracle
