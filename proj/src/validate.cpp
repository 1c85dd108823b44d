#include <algorithm>
#include <set>

#include "fgo/ir.hpp"

namespace fgo::ir {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::DuplicateName: return "DuplicateName";
    case Violation::UnknownName: return "UnknownName";
    case Violation::UnknownType: return "UnknownType";
    case Violation::TypeArityMismatch: return "TypeArityMismatch";
    case Violation::UnboundTypeVar: return "UnboundTypeVar";
    case Violation::NonLinearPattern: return "NonLinearPattern";
    case Violation::CtorArityMismatch: return "CtorArityMismatch";
    case Violation::EquationArityMismatch: return "EquationArityMismatch";
    case Violation::EmptyCase: return "EmptyCase";
    case Violation::UnknownClass: return "UnknownClass";
    case Violation::CyclicClass: return "CyclicClass";
    case Violation::UnboundConstraint: return "UnboundConstraint";
    case Violation::BadInstance: return "BadInstance";
    case Violation::TypeMismatch: return "TypeMismatch";
  }
  return "?";
}

namespace {

class Validator {
 public:
  explicit Validator(const Program& p) : prog_(p), idx_(p) {}

  std::vector<Diagnostic> run() {
    check_names();
    for (const auto& d : prog_.decls) {
      decl_ = decl_name(d);
      std::visit([this](const auto& x) { check(x); }, d);
    }
    return std::move(out_);
  }

 private:
  void report(Violation kind, std::string message) {
    out_.push_back({decl_, kind, std::move(message)});
  }

  void check_names() {
    std::set<std::string> types, values, classes;
    auto claim = [this](std::set<std::string>& space, const std::string& name,
                        const std::string& owner) {
      if (!space.insert(name).second) {
        decl_ = owner;
        report(Violation::DuplicateName, "'" + name + "' is declared twice");
      }
    };
    for (const auto& base : {prim::kInt, prim::kNat, prim::kBool, prim::kString})
      types.insert(std::string(base));
    for (const auto& op : prim::ops()) values.insert(op.name);
    for (const auto& d : prog_.decls) {
      std::string owner = decl_name(d);
      if (auto* data = std::get_if<DataDecl>(&d)) {
        claim(types, data->name, owner);
        for (const auto& c : data->ctors) claim(values, c.name, owner);
      } else if (auto* f = std::get_if<FunDecl>(&d)) {
        claim(values, f->name, owner);
      } else if (auto* c = std::get_if<ConstDecl>(&d)) {
        claim(values, c->name, owner);
      } else if (auto* cls = std::get_if<ClassDecl>(&d)) {
        claim(classes, cls->name, owner);
        for (const auto& m : cls->methods) claim(values, m.name, owner);
      } else if (std::holds_alternative<InstanceDecl>(d)) {
        claim(classes, "instance " + owner, owner);
      }
    }
  }

  void check_type(const TypeExpr& t, const std::vector<std::string>& scope) {
    switch (t.kind()) {
      case TypeExpr::Kind::Var:
        if (std::find(scope.begin(), scope.end(), t.name()) == scope.end())
          report(Violation::UnboundTypeVar, "type variable '" + t.name() + " is not bound");
        return;
      case TypeExpr::Kind::Con: {
        auto n = idx_.type_arity(t.name());
        if (!n)
          report(Violation::UnknownType, "unknown type '" + t.name() + "'");
        else if (*n != t.args().size())
          report(Violation::TypeArityMismatch,
                 "type '" + t.name() + "' expects " + std::to_string(*n) + " arguments, got " +
                     std::to_string(t.args().size()));
        for (const auto& a : t.args()) check_type(a, scope);
        return;
      }
      case TypeExpr::Kind::Fun:
        check_type(t.arg(), scope);
        check_type(t.result(), scope);
        return;
    }
  }

  void check_pattern(const Pattern& p, const std::vector<std::string>& scope) {
    auto vars = pattern_vars(p);
    std::set<std::string> seen;
    for (const auto& v : vars)
      if (!seen.insert(v).second)
        report(Violation::NonLinearPattern, "variable '" + v + "' bound twice in one pattern");
    check_pattern_shape(p, scope);
  }

  void check_pattern_shape(const Pattern& p, const std::vector<std::string>& scope) {
    if (p.is_var()) return;
    auto c = idx_.ctor(p.name());
    if (!c) {
      report(Violation::UnknownName, "unknown constructor '" + p.name() + "'");
      return;
    }
    std::size_t fields = c->first->ctors[c->second].fields.size();
    if (fields != p.subpatterns().size())
      report(Violation::CtorArityMismatch,
             "constructor '" + p.name() + "' takes " + std::to_string(fields) +
                 " arguments, pattern has " + std::to_string(p.subpatterns().size()));
    for (const auto& ta : p.type_args()) check_type(ta, scope);
    for (const auto& s : p.subpatterns()) check_pattern_shape(s, scope);
  }

  void check_term(const Term& t, const std::vector<std::string>& scope) {
    switch (t.kind()) {
      case Term::Kind::Var:
      case Term::Kind::Lit:
        return;
      case Term::Kind::Ref:
        if (!idx_.scheme(t.name())) report(Violation::UnknownName, "unknown name '" + t.name() + "'");
        for (const auto& ta : t.type_args()) check_type(ta, scope);
        return;
      case Term::Kind::App:
        check_term(t.fun(), scope);
        check_term(t.arg(), scope);
        return;
      case Term::Kind::Abs:
        check_type(t.type(), scope);
        check_term(t.body(), scope);
        return;
      case Term::Kind::Case:
        check_type(t.type(), scope);
        check_term(t.scrutinee(), scope);
        if (t.clauses().empty()) report(Violation::EmptyCase, "case expression without clauses");
        for (const auto& c : t.clauses()) {
          check_pattern(c.pattern, scope);
          check_term(c.body, scope);
        }
        return;
      case Term::Kind::Field:
      case Term::Kind::MethodValue:
        check_term(t.kind() == Term::Kind::Field ? t.target() : t.body(), scope);
        return;
    }
  }

  void check_constraints(const std::vector<Constraint>& cs,
                         const std::vector<std::string>& scope) {
    for (const auto& c : cs) {
      if (!idx_.class_decl(c.className))
        report(Violation::UnknownClass, "unknown class '" + c.className + "'");
      if (std::find(scope.begin(), scope.end(), c.var) == scope.end())
        report(Violation::UnboundConstraint,
               "constraint on unbound type variable '" + c.var);
    }
  }

  // Types an equation list against `sig`. Only attempted once the
  // structural checks passed, so type_of sees well-formed input.
  void check_equations(const std::vector<Equation>& eqs, const TypeExpr& sig,
                       const std::vector<std::string>& scope) {
    if (eqs.empty()) return;
    std::size_t m = eqs.front().params.size();
    std::size_t before = out_.size();
    for (const auto& eq : eqs) {
      if (eq.params.size() != m)
        report(Violation::EquationArityMismatch,
               "equations disagree on parameter count (" + std::to_string(m) + " vs " +
                   std::to_string(eq.params.size()) + ")");
      for (const auto& p : eq.params) check_pattern(p, scope);
      check_term(eq.rhs, scope);
    }
    if (arrow_count(sig) < m) {
      report(Violation::EquationArityMismatch,
             "equations take more parameters than the signature allows");
      return;
    }
    if (out_.size() != before) return;
    for (const auto& eq : eqs) {
      auto [args, result] = split_arrows(sig, m);
      try {
        TypeEnv env;
        for (std::size_t i = 0; i < m; ++i) bind_pattern(idx_, eq.params[i], args[i], env);
        TypeExpr r = type_of(idx_, eq.rhs, env);
        if (!(r == result))
          report(Violation::TypeMismatch,
                 "right-hand side has type " + to_string(r) + ", expected " + to_string(result));
      } catch (const TypeError& e) {
        report(Violation::TypeMismatch, e.message);
      }
    }
  }

  void check(const DataDecl& d) {
    for (const auto& c : d.ctors)
      for (const auto& f : c.fields) check_type(f, d.tyParams);
    if (d.dict && d.ctors.size() != 1)
      report(Violation::BadInstance, "dictionary types have exactly one constructor");
  }

  void check(const FunDecl& f) {
    check_type(f.signature, f.tyParams);
    check_constraints(f.constraints, f.tyParams);
    check_equations(f.equations, f.signature, f.tyParams);
  }

  void check(const ConstDecl& c) {
    check_type(c.signature, c.tyParams);
    check_equations({Equation{{}, c.rhs}}, c.signature, c.tyParams);
  }

  void check(const ClassDecl& c) {
    for (const auto& s : c.superclasses) {
      if (!idx_.class_decl(s))
        report(Violation::UnknownClass, "unknown superclass '" + s + "'");
      else if (idx_.is_subclass(s, c.name))
        report(Violation::CyclicClass, "class hierarchy is cyclic");
    }
    for (const auto& m : c.methods) check_type(m.signature, {c.tyParam});
  }

  void check(const InstanceDecl& inst) {
    const auto* cls = idx_.class_decl(inst.className);
    if (!cls) {
      report(Violation::UnknownClass, "unknown class '" + inst.className + "'");
      return;
    }
    auto n = idx_.type_arity(inst.tyCon);
    if (!n) {
      report(Violation::UnknownType, "unknown type '" + inst.tyCon + "'");
      return;
    }
    if (*n != inst.tyParams.size()) {
      report(Violation::TypeArityMismatch, "instance head has the wrong number of parameters");
      return;
    }
    check_constraints(inst.constraints, inst.tyParams);
    if (idx_.instances(inst.className, inst.tyCon).size() > 1)
      report(Violation::BadInstance, "overlapping instances");
    std::vector<TypeExpr> params;
    for (const auto& p : inst.tyParams) params.push_back(TypeExpr::var(p));
    TypeExpr head = TypeExpr::con(inst.tyCon, params);
    std::set<std::string> defined;
    for (const auto& md : inst.methods) {
      auto it = std::find_if(cls->methods.begin(), cls->methods.end(),
                             [&](const ClassMethod& m) { return m.name == md.name; });
      if (it == cls->methods.end()) {
        report(Violation::BadInstance, "'" + md.name + "' is not a method of " + cls->name);
        continue;
      }
      if (!defined.insert(md.name).second)
        report(Violation::DuplicateName, "method '" + md.name + "' defined twice");
      check_equations(md.equations, substitute(it->signature, {{cls->tyParam, head}}),
                      inst.tyParams);
    }
    for (const auto& m : cls->methods)
      if (!defined.count(m.name))
        report(Violation::BadInstance, "method '" + m.name + "' is not defined");
  }

  const Program& prog_;
  Index idx_;
  std::string decl_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> validate(const Program& p) { return Validator(p).run(); }

}  // namespace fgo::ir
