#pragma once

// Dictionary construction: removes classes and instances from a program.
//
//   class C <= S where m :: ty    ~>  datatype C 'a = C (S 'a) ty
//   instance T :: C where ...     ~>  method functions m_T, dictionary C_T
//   f :: ('a :: C) ...            ~>  f :: C 'a => ..., one leading parameter
//
// Method references become calls of the instance function when the class
// type is known and dictionary projections when it is a type variable.

#include <stdexcept>
#include <string>
#include <vector>

#include "fgo/ir.hpp"

namespace fgo::dict {

class DictError : public std::runtime_error {
 public:
  enum class Kind { MissingInstance, AmbiguousInstance, Unsupported };
  DictError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  Kind kind;
};

/// A dictionary parameter that is visible at a use site.
struct InScope {
  std::string param;
  ir::Constraint constraint;
};

/// How to build the dictionary for one wanted constraint.
struct InstancePath {
  bool fromParam = false;
  /// Parameter name, or the name of the instance dictionary declaration.
  std::string root;
  /// Class of the dictionary `root` denotes.
  std::string rootClass;
  std::vector<ir::TypeExpr> typeArgs;
  /// Dictionaries the instance itself needs, in constraint order.
  std::vector<InstancePath> args;
  /// Superclasses selected one after the other, starting at rootClass.
  std::vector<std::string> projections;
};

/// `idx` indexes the class-carrying source program.
InstancePath resolve_constraint(const ir::Index& idx, const std::string& className,
                                const ir::TypeExpr& type, const std::vector<InScope>& inScope);

/// Term that evaluates to the dictionary described by `path`.
ir::Term path_term(const ir::Index& idx, const InstancePath& path);

std::string dict_type_name(const std::string& className);
std::string instance_dict_name(const std::string& className, const std::string& tyCon);
std::string instance_method_name(const std::string& method, const std::string& tyCon);
std::string superclass_field(const std::string& super, const std::string& className);

ir::Program elaborate(const ir::Program& p);
/// Elaborates a closed term written against `original` (no dictionaries in scope).
ir::Term elaborate_term(const ir::Program& original, const ir::Term& t);

}  // namespace fgo::dict
