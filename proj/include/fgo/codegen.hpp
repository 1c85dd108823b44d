#pragma once

// Translation of class-free programs into the functional Go fragment.

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fgo/go_ast.hpp"
#include "fgo/ir.hpp"

namespace fgo::codegen {

class CodegenError : public std::runtime_error {
 public:
  enum class Kind { UnknownTypeCon, UnmappedConstant, AdaptedPattern, ArityMismatch, BadTable };
  CodegenError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  Kind kind;
};

struct TypeRule {
  std::string go;
  std::vector<std::string> imports;
};

/// `%1`..`%9` are argument holes.
struct ConstRule {
  std::string tmpl;
  std::size_t arity = 0;
  std::vector<std::string> imports;
};

struct AdaptationTable {
  std::map<std::string, TypeRule> types;
  std::map<std::string, ConstRule> consts;

  /// bool, int, nat, string and every built-in primitive.
  static AdaptationTable defaults();
  /// `{"types": {..: {"go", "imports"}}, "consts": {..: {"template", "arity", "imports"}}}`
  static AdaptationTable from_json(std::string_view text);
  /// Entries of `other` replace entries of the same name.
  void merge(const AdaptationTable& other);
};

/// Marks adapted types and constants of `p` and checks the table against it.
/// Throws ArityMismatch when an entry disagrees with the primitive it maps.
AdaptationTable apply_adaptation(const AdaptationTable& table, const ir::Program& p);

struct SaturationReport {
  enum class Kind { Function, Constructor, Constant, Primitive, Method, Local };
  enum class Class { Exact, Under, Over };
  std::string head;
  Kind kind = Kind::Local;
  std::size_t declaredArity = 0;
  std::size_t dictCount = 0;
  std::size_t actualArgs = 0;
  Class classification = Class::Exact;
};

/// Spine analysis of an application (or a bare head).
SaturationReport classify_application(const ir::Index& idx, const ir::Term& t);

/// IR name -> Go name, per namespace.
struct NameMap {
  std::map<std::string, std::string> types;
  /// Struct a constructor builds; single-constructor types reuse the type name.
  std::map<std::string, std::string> ctors;
  std::map<std::string, std::string> destructors;
  /// Functions and constants.
  std::map<std::string, std::string> values;
};

class Generator {
 public:
  /// `p` must be class-free and validated.
  Generator(const ir::Program& p, AdaptationTable table = AdaptationTable::defaults(),
            std::string package = "main");
  ~Generator();
  Generator(Generator&&) noexcept;

  const go::Program& program() const;
  const NameMap& names() const;

  go::Type translate_type(const ir::TypeExpr& t) const;
  /// Translates a closed term in expression position.
  go::ExprP translate_expr(const ir::Term& t) const;
  /// The same term lowered as statements inside an immediately invoked closure.
  go::ExprP translate_stmt_wrapped(const ir::Term& t) const;
  /// Canonical rendering of a fragment value, matching oracle::render.
  std::string decode(const go::Value& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string render(const go::GResult& r, const Generator& g);

}  // namespace fgo::codegen
