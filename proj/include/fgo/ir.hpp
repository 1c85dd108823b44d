#pragma once

// The intermediate representation: a simply-typed lambda calculus with
// ML-style polymorphism, algebraic datatypes, case expressions and
// Haskell98-style type classes. All nodes are immutable and share structure.

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fgo/prim.hpp"

namespace fgo::ir {

class TypeExpr {
 public:
  enum class Kind { Var, Con, Fun };

  TypeExpr();  // the unit-less placeholder `Con("")`; only for default construction

  static TypeExpr var(std::string name);
  static TypeExpr con(std::string name, std::vector<TypeExpr> args = {});
  static TypeExpr fun(TypeExpr arg, TypeExpr result);
  /// `a1 => a2 => ... => result`
  static TypeExpr arrows(const std::vector<TypeExpr>& args, TypeExpr result);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  bool is_con() const { return kind() == Kind::Con; }
  bool is_fun() const { return kind() == Kind::Fun; }

  const std::string& name() const;
  const std::vector<TypeExpr>& args() const;
  const TypeExpr& arg() const;     // Fun only
  const TypeExpr& result() const;  // Fun only

  friend bool operator==(const TypeExpr& a, const TypeExpr& b);
  friend bool operator<(const TypeExpr& a, const TypeExpr& b);

 private:
  struct Node;
  explicit TypeExpr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

using TypeSubst = std::map<std::string, TypeExpr>;

TypeExpr substitute(const TypeExpr& t, const TypeSubst& s);
/// Splits `a1 => ... => an => r` into at most `limit` argument types.
std::pair<std::vector<TypeExpr>, TypeExpr> split_arrows(
    const TypeExpr& t, std::size_t limit = static_cast<std::size_t>(-1));
std::size_t arrow_count(const TypeExpr& t);
void free_type_vars(const TypeExpr& t, std::vector<std::string>& out);
bool is_ground(const TypeExpr& t);
std::string to_string(const TypeExpr& t);

struct Constraint {
  std::string var;
  std::string className;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

class Pattern {
 public:
  enum class Kind { Var, Con };

  Pattern();
  static Pattern var(std::string name);
  static Pattern con(std::string ctor, std::vector<TypeExpr> typeArgs,
                     std::vector<Pattern> subpatterns);

  Kind kind() const;
  bool is_var() const { return kind() == Kind::Var; }
  /// Variable name or constructor name.
  const std::string& name() const;
  const std::vector<TypeExpr>& type_args() const;
  const std::vector<Pattern>& subpatterns() const;

  friend bool operator==(const Pattern& a, const Pattern& b);

 private:
  struct Node;
  explicit Pattern(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// `_` is the anonymous pattern variable; it binds nothing.
inline constexpr std::string_view kWildcard = "_";

/// Variables bound by a pattern, in left-to-right order (wildcards excluded).
std::vector<std::string> pattern_vars(const Pattern& p);

class Term;

struct Clause;

struct Literal {
  prim::Scalar value;
  TypeExpr type;
  friend bool operator==(const Literal&, const Literal&) = default;
};

class Term {
 public:
  enum class Kind {
    Var,
    Ref,
    App,
    Abs,
    Case,
    Lit,
    /// Projection of a field out of a class dictionary. `method_arity` is
    /// -1 for a superclass dictionary and k >= 0 for a method taking k
    /// arguments (k == 0 fields hold thunks).
    Field,
    /// Packages a function-valued term as an uncurried dictionary entry of
    /// the given arity (0 = thunk, evaluated on each projection).
    MethodValue,
  };

  Term();
  static Term var(std::string name);
  static Term ref(std::string name, std::vector<TypeExpr> typeArgs = {});
  static Term app(Term fun, Term arg);
  static Term apps(Term fun, std::vector<Term> args);
  static Term abs(std::string binder, TypeExpr binderType, Term body);
  static Term case_of(Term scrutinee, TypeExpr scrutineeType,
                      std::vector<Clause> clauses);
  static Term lit(Literal literal);
  static Term field(Term target, std::string dataName, std::size_t index,
                    int methodArity);
  static Term method_value(Term body, std::size_t arity);

  Kind kind() const;

  /// Var/Ref name, Abs binder, Field data name.
  const std::string& name() const;
  const std::vector<TypeExpr>& type_args() const;
  /// Abs binder type or Case scrutinee type.
  const TypeExpr& type() const;
  const Term& fun() const;        // App
  const Term& arg() const;        // App
  const Term& body() const;       // Abs, MethodValue
  const Term& scrutinee() const;  // Case
  const Term& target() const;     // Field
  const std::vector<Clause>& clauses() const;
  const Literal& literal() const;
  std::size_t index() const;   // Field index, MethodValue arity
  int method_arity() const;    // Field

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

struct Clause {
  Pattern pattern;
  Term body;
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Flattens `((f a1) a2) ... an` into head and arguments.
std::pair<Term, std::vector<Term>> unspine(const Term& t);

struct Ctor {
  std::string name;
  std::vector<TypeExpr> fields;
  friend bool operator==(const Ctor&, const Ctor&) = default;
};

/// Extra metadata on datatypes that encode class dictionaries.
struct DictInfo {
  std::string className;
  std::vector<std::string> fieldNames;
  /// -1 for superclass fields, otherwise the method's arity.
  std::vector<int> methodArity;
  friend bool operator==(const DictInfo&, const DictInfo&) = default;
};

struct DataDecl {
  std::string name;
  std::vector<std::string> tyParams;
  std::vector<Ctor> ctors;
  std::optional<DictInfo> dict;
  friend bool operator==(const DataDecl&, const DataDecl&) = default;
};

struct Equation {
  std::vector<Pattern> params;
  Term rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct FunDecl {
  std::string name;
  std::vector<std::string> tyParams;
  std::vector<Constraint> constraints;
  TypeExpr signature;
  std::vector<Equation> equations;
  /// Number of leading parameters that carry class dictionaries.
  std::size_t dictParams = 0;
  friend bool operator==(const FunDecl&, const FunDecl&) = default;
};

struct ClassMethod {
  std::string name;
  TypeExpr signature;
  friend bool operator==(const ClassMethod&, const ClassMethod&) = default;
};

struct ClassDecl {
  std::string name;
  std::string tyParam;
  std::vector<std::string> superclasses;
  std::vector<ClassMethod> methods;
  friend bool operator==(const ClassDecl&, const ClassDecl&) = default;
};

struct MethodDef {
  std::string name;
  std::vector<Equation> equations;
  friend bool operator==(const MethodDef&, const MethodDef&) = default;
};

struct InstanceDecl {
  std::string className;
  std::string tyCon;
  std::vector<std::string> tyParams;
  std::vector<Constraint> constraints;
  std::vector<MethodDef> methods;
  friend bool operator==(const InstanceDecl&, const InstanceDecl&) = default;
};

struct ConstDecl {
  std::string name;
  std::vector<std::string> tyParams;
  TypeExpr signature;
  Term rhs;
  friend bool operator==(const ConstDecl&, const ConstDecl&) = default;
};

using Declaration =
    std::variant<DataDecl, FunDecl, ClassDecl, InstanceDecl, ConstDecl>;

std::string decl_name(const Declaration& d);

struct Program {
  std::vector<Declaration> decls;
  friend bool operator==(const Program&, const Program&) = default;
};

/// Type scheme of anything a Ref may name.
struct Scheme {
  enum class Kind { Ctor, Fun, Const, Method, Prim };
  Kind kind;
  std::vector<std::string> params;
  TypeExpr type;
};

/// Name lookup over a program plus the built-in primitives.
class Index {
 public:
  explicit Index(const Program& p);

  const Program& program() const { return *program_; }

  const DataDecl* data(const std::string& name) const;
  /// Data declaration owning constructor `ctor`, with the ctor's position.
  std::optional<std::pair<const DataDecl*, std::size_t>> ctor(
      const std::string& ctor) const;
  const FunDecl* fun(const std::string& name) const;
  const ConstDecl* constant(const std::string& name) const;
  const ClassDecl* class_decl(const std::string& name) const;
  /// Class declaring method `name`, with the method's position.
  std::optional<std::pair<const ClassDecl*, std::size_t>> method(
      const std::string& name) const;
  std::vector<const InstanceDecl*> instances(const std::string& cls,
                                             const std::string& tyCon) const;
  const prim::PrimOp* prim(const std::string& name) const;

  std::optional<Scheme> scheme(const std::string& name) const;
  /// Arity of a type constructor, if declared or built in.
  std::optional<std::size_t> type_arity(const std::string& name) const;
  /// Whether `sub` is `sup` or inherits from it.
  bool is_subclass(const std::string& sub, const std::string& sup) const;

 private:
  const Program* program_;
  std::map<std::string, const DataDecl*> data_;
  std::map<std::string, std::pair<const DataDecl*, std::size_t>> ctors_;
  std::map<std::string, const FunDecl*> funs_;
  std::map<std::string, const ConstDecl*> consts_;
  std::map<std::string, const ClassDecl*> classes_;
  std::map<std::string, std::pair<const ClassDecl*, std::size_t>> methods_;
  std::multimap<std::pair<std::string, std::string>, const InstanceDecl*> instances_;
};

struct UnknownName {
  std::string name;
};

/// Arity of a function (shared equation parameter count, including
/// dictionary parameters), constant (0) or constructor (field count).
std::size_t arity(const Program& p, const std::string& name);

/// Raised by `type_of` on ill-typed terms.
struct TypeError {
  std::string message;
};

using TypeEnv = std::map<std::string, TypeExpr>;

TypeExpr type_of(const Index& idx, const Term& t, const TypeEnv& env);
/// Types of the variables bound by `p` when matched at type `scrutinee`.
void bind_pattern(const Index& idx, const Pattern& p, const TypeExpr& scrutinee,
                  TypeEnv& env);

using TypeMap = std::function<TypeExpr(const TypeExpr&)>;

/// Rewrites every type annotation inside a term or pattern.
Term map_types(const Term& t, const TypeMap& f);
Pattern map_types(const Pattern& p, const TypeMap& f);

/// Free term variables of `t`.
bool occurs_free(const std::string& var, const Term& t);

enum class Violation {
  DuplicateName,
  UnknownName,
  UnknownType,
  TypeArityMismatch,
  UnboundTypeVar,
  NonLinearPattern,
  CtorArityMismatch,
  EquationArityMismatch,
  EmptyCase,
  UnknownClass,
  CyclicClass,
  UnboundConstraint,
  BadInstance,
  TypeMismatch,
};

std::string_view to_string(Violation v);

struct Diagnostic {
  std::string decl;
  Violation kind;
  std::string message;
};

std::vector<Diagnostic> validate(const Program& p);

}  // namespace fgo::ir
