#pragma once

// The functional fragment of Go targeted by the code generator, with a
// well-formedness checker, an evaluator and a printer.
//
// Beyond the core fragment (structs, empty interfaces, generic functions,
// return, if, type assertions) the AST has `==`, `&&`, panic, blank
// bindings, nested blocks, function types and native snippets for
// adapted base types.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fgo/prim.hpp"

namespace fgo::go {

struct Type {
  enum class Kind { Param, Struct, Interface, Func, Native };
  Kind kind = Kind::Param;
  /// Parameter name, declared type name, or native spelling (`*big.Int`).
  std::string name;
  /// Type arguments; parameter types for Func.
  std::vector<Type> args;
  std::vector<Type> results;  // Func only

  static Type param(std::string name);
  static Type strct(std::string name, std::vector<Type> args = {});
  static Type iface(std::string name, std::vector<Type> args = {});
  static Type func(std::vector<Type> params, std::vector<Type> results);
  static Type native(std::string spelling);

  friend bool operator==(const Type&, const Type&) = default;
};

struct Expr;
struct Stmt;
using ExprP = std::shared_ptr<const Expr>;
using StmtP = std::shared_ptr<const Stmt>;

struct Param {
  std::string name;
  Type type;
};

struct Expr {
  enum class Kind {
    Var,
    Call,
    StructLit,
    FuncLit,
    FieldSel,
    TypeConv,
    Nil,
    ExprCall,
    Eq,
    And,
    /// Adapted primitive: `text` with holes %1..%n, semantics of prim `name`.
    Native,
    Lit,
  };
  Kind kind = Kind::Nil;
  /// Var name, called function, struct type, selected field, primitive name.
  std::string name;
  std::string text;
  std::vector<Type> typeArgs;
  /// Conversion target; literal type; native result type.
  Type type;
  /// Call/StructLit/ExprCall/Native arguments, Eq/And operands.
  std::vector<ExprP> args;
  /// FieldSel/TypeConv/ExprCall operand.
  ExprP target;
  std::vector<Param> params;  // FuncLit
  std::vector<Type> results;  // FuncLit
  StmtP body;                 // FuncLit
  prim::Scalar literal;
};

ExprP var(std::string name);
ExprP call(std::string fn, std::vector<Type> typeArgs, std::vector<ExprP> args);
ExprP struct_lit(std::string type, std::vector<Type> typeArgs, std::vector<ExprP> fields);
ExprP func_lit(std::vector<Param> params, std::vector<Type> results, StmtP body);
ExprP field_sel(ExprP target, std::string field);
ExprP type_conv(Type to, ExprP inner);
ExprP nil();
ExprP expr_call(ExprP target, std::vector<ExprP> args);
ExprP eq(ExprP lhs, ExprP rhs);
ExprP conj(ExprP lhs, ExprP rhs);
ExprP native(std::string prim, std::string text, std::vector<Type> argTypes, Type result,
             std::vector<ExprP> args);
ExprP lit(prim::Scalar value, Type type);

/// Statements form chains through `rest`. A null `rest` ends the enclosing
/// block; control then continues after it.
struct Stmt {
  enum class Kind { Return, VarDecl, If, TypeAssert, Block, Panic };
  Kind kind = Kind::Panic;
  std::vector<ExprP> exprs;         // Return
  std::vector<std::string> names;   // VarDecl; TypeAssert {value, ok}
  ExprP expr;                       // VarDecl rhs, If condition, TypeAssert operand
  Type type;                        // TypeAssert
  StmtP inner;                      // If then-branch, Block body
  StmtP rest;
  std::string message;              // Panic
};

inline const std::string kBlank = "_";

StmtP ret(std::vector<ExprP> exprs);
StmtP var_decl(std::vector<std::string> names, ExprP rhs, StmtP rest);
StmtP if_(ExprP cond, StmtP then, StmtP rest);
StmtP type_assert(std::string value, std::string ok, ExprP target, Type asserted, StmtP rest);
StmtP block(StmtP inner, StmtP rest);
StmtP panic(std::string message);

struct TypeDecl {
  std::string name;
  std::vector<std::string> typeParams;
  bool isInterface = false;
  std::vector<Param> fields;
};

struct FuncDecl {
  std::string name;
  std::vector<std::string> typeParams;
  std::vector<Param> params;
  std::vector<Type> results;
  StmtP body;
  /// Destructors print their result list in parentheses even when single.
  bool destructor = false;
};

using Decl = std::variant<TypeDecl, FuncDecl>;

struct Program {
  std::string package = "main";
  std::vector<std::string> imports;
  std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Well-formedness

enum class Problem {
  UnknownName,
  Redeclared,
  ArityMismatch,
  TypeMismatch,
  NotInterface,
  NotStruct,
  MissingReturn,
  MultiValueMisuse,
  UnusedVariable,
  BlankRead,
  NoNewVariables,
  BadName,
  Extension,
};

std::string_view to_string(Problem p);

struct Diagnostic {
  std::string decl;
  Problem problem;
  std::string message;
};

enum class Strictness { Extended, Core };

/// With Strictness::Core every use of a construct outside the core fragment
/// is also reported, as Problem::Extension.
std::vector<Diagnostic> check_wf(const Program& p, Strictness s = Strictness::Extended);

// ---------------------------------------------------------------------------
// Evaluation

struct GValue;
using Value = std::shared_ptr<const GValue>;
struct Env;
using EnvP = std::shared_ptr<const Env>;
using TypeEnv = std::vector<std::pair<std::string, Type>>;

struct GStruct {
  std::string type;
  std::vector<Type> typeArgs;
  std::vector<Value> fields;
};

struct GIface {
  Type dynamic;
  Value inner;
};

struct GClosure {
  std::vector<std::string> params;
  StmtP body;
  EnvP env;
  TypeEnv types;
};

struct GNil {};

struct GMulti {
  std::vector<Value> values;
};

struct GValue {
  std::variant<GStruct, GIface, GClosure, GNil, prim::Scalar, GMulti> v;
};

Value make(GValue v);

struct GFailure {
  enum class Kind { Panic, OutOfFuel, NilDereference };
  Kind kind;
  std::string message;
};

using GResult = std::variant<Value, GFailure>;

struct EvalOptions {
  std::uint64_t fuel = 1'000'000;
  std::size_t maxDepth = 20'000;
};

/// Calls `entry` with explicit type arguments. Type parameters left
/// unspecified stay symbolic.
GResult geval(const Program& p, const std::string& entry, const std::vector<Type>& typeArgs,
              const std::vector<Value>& args, const EvalOptions& opts = {});
/// Evaluates a closed expression against the declarations of `p`.
GResult geval_expr(const Program& p, const ExprP& e, const EvalOptions& opts = {});

/// Go `==` on values; nullopt when Go would panic (uncomparable operands).
std::optional<bool> equal(const Value& a, const Value& b);

// ---------------------------------------------------------------------------
// Printing

struct RenderOptions {
  /// Print nested blocks with their braces; off yields the flattened layout.
  bool blockBraces = true;
};

std::string render(const Program& p, const RenderOptions& opts = {});
std::string render(const Type& t);
std::string render(const ExprP& e);

}  // namespace fgo::go
