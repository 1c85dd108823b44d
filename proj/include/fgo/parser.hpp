#pragma once

// Surface syntax front end: text -> fully annotated IR Program.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgo/ir.hpp"

namespace fgo::parser {

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

enum class DiagKind { Lex, Parse, Scope, Type, Arity };

std::string_view to_string(DiagKind k);

struct Diagnostic {
  SourcePos pos;
  DiagKind kind;
  std::string message;
};

std::string format(const Diagnostic& d);

struct ParseResult {
  std::optional<ir::Program> program;
  std::vector<Diagnostic> diagnostics;
};

/// Parses and elaborates a whole source file.
ParseResult parse_program(std::string_view src);

struct TermResult {
  std::optional<ir::Term> term;
  ir::TypeExpr type;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a closed term against the declarations of `p`. Type variables left
/// open by the term are defaulted to `int`.
TermResult parse_term(const ir::Program& p, std::string_view src);

/// Prints a source-level program back in the surface syntax.
std::string pretty(const ir::Program& p);
std::string pretty(const ir::Term& t);

}  // namespace fgo::parser
