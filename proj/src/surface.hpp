#pragma once

// Untyped surface AST shared by the parser and the elaborator.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fgo/parser.hpp"

namespace fgo::parser::surface {

enum class Tok {
  Ident,
  TyVar,
  Int,
  String,
  Keyword,
  Symbol,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
  bool lineStart = false;
};

std::vector<Token> lex(std::string_view src, std::vector<Diagnostic>& diags);

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Var, Con, Fun } kind;
  std::string name;
  std::vector<TypePtr> args;
  SourcePos pos;
};

struct Pattern;
using PatternPtr = std::shared_ptr<const Pattern>;

/// An identifier applied to sub-patterns; whether it names a constructor or
/// binds a variable is decided during elaboration.
struct Pattern {
  std::string name;
  std::vector<PatternPtr> args;
  SourcePos pos;
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Clause {
  PatternPtr pattern;
  TermPtr body;
};

struct Term {
  enum class Kind { Name, App, Lam, Case, Let, IntLit, StrLit, Annot } kind;
  std::string name;  // Name, Lam/Let binder, literal text
  TermPtr left;      // App fun, Lam body, Case scrutinee, Let bound term, Annot term
  TermPtr right;     // App arg, Let body
  TypePtr type;      // Lam binder annotation (optional), Annot type
  std::vector<Clause> clauses;
  SourcePos pos;
};

struct Equation {
  std::string head;
  std::vector<PatternPtr> params;
  TermPtr rhs;
  SourcePos pos;
};

struct Sort {
  std::string var;
  std::string className;
  SourcePos pos;
};

struct DataDecl {
  std::string name;
  std::vector<std::string> tyParams;
  std::vector<std::pair<std::string, std::vector<TypePtr>>> ctors;
  SourcePos pos;
};

struct FunDecl {
  std::string name;
  TypePtr signature;
  std::vector<Sort> sorts;
  std::vector<Equation> equations;
  SourcePos pos;
};

struct ClassDecl {
  std::string name;
  std::vector<std::string> superclasses;
  std::vector<std::pair<std::string, TypePtr>> methods;
  SourcePos pos;
};

struct InstanceDecl {
  std::string className;
  TypePtr head;
  std::vector<Sort> sorts;
  std::vector<Equation> equations;
  SourcePos pos;
};

struct ConstDecl {
  std::string name;
  TypePtr signature;
  std::vector<Sort> sorts;
  TermPtr rhs;
  SourcePos pos;
};

using Decl = std::variant<DataDecl, FunDecl, ClassDecl, InstanceDecl, ConstDecl>;

struct Module {
  std::vector<Decl> decls;
};

Module parse_module(const std::vector<Token>& toks, std::vector<Diagnostic>& diags);
std::optional<TermPtr> parse_closed_term(const std::vector<Token>& toks,
                                         std::vector<Diagnostic>& diags);

/// Operator sugar: `+` is `plus`, `*` is `times`.
std::optional<std::string> operator_name(std::string_view op);

/// Infers annotations and produces IR; reports into `diags`.
std::optional<ir::Program> elaborate(const Module& m, std::vector<Diagnostic>& diags);
std::optional<std::pair<ir::Term, ir::TypeExpr>> elaborate_term(
    const ir::Program& p, const TermPtr& t, std::vector<Diagnostic>& diags);

}  // namespace fgo::parser::surface
