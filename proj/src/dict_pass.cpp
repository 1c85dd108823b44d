#include "fgo/dict_pass.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace fgo::dict {

using ir::Term;
using ir::TypeExpr;

namespace {

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

[[noreturn]] void missing(const std::string& cls, const TypeExpr& t) {
  throw DictError(DictError::Kind::MissingInstance,
                  "no instance " + cls + " for type " + ir::to_string(t));
}

const ir::InstanceDecl& unique_instance(const ir::Index& idx, const std::string& cls,
                                        const TypeExpr& t) {
  auto found = idx.instances(cls, t.name());
  if (found.empty()) missing(cls, t);
  if (found.size() > 1)
    throw DictError(DictError::Kind::AmbiguousInstance,
                    "overlapping instances " + cls + " for type " + ir::to_string(t));
  return *found.front();
}

// Shortest superclass chain from `from` up to `to`, excluding `from`.
std::optional<std::vector<std::string>> superclass_chain(const ir::Index& idx,
                                                         const std::string& from,
                                                         const std::string& to) {
  std::deque<std::vector<std::string>> queue{{from}};
  std::set<std::string> seen{from};
  while (!queue.empty()) {
    auto chain = queue.front();
    queue.pop_front();
    if (chain.back() == to) return std::vector<std::string>(chain.begin() + 1, chain.end());
    const auto* c = idx.class_decl(chain.back());
    if (!c) continue;
    for (const auto& s : c->superclasses) {
      if (!seen.insert(s).second) continue;
      auto next = chain;
      next.push_back(s);
      queue.push_back(std::move(next));
    }
  }
  return std::nullopt;
}

std::vector<InScope> constraint_params(const std::vector<ir::Constraint>& cs,
                                       const std::set<std::string>& taken) {
  std::vector<InScope> out;
  std::set<std::string> used = taken;
  for (const auto& c : cs) {
    std::string name = c.var + "_";
    while (used.count(name)) name += "_";
    used.insert(name);
    out.push_back({name, c});
  }
  return out;
}

void collect_binders(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case Term::Kind::Abs:
      out.insert(t.name());
      collect_binders(t.body(), out);
      return;
    case Term::Kind::App:
      collect_binders(t.fun(), out);
      collect_binders(t.arg(), out);
      return;
    case Term::Kind::Case:
      collect_binders(t.scrutinee(), out);
      for (const auto& c : t.clauses()) {
        for (const auto& v : ir::pattern_vars(c.pattern)) out.insert(v);
        collect_binders(c.body, out);
      }
      return;
    case Term::Kind::Field:
      collect_binders(t.target(), out);
      return;
    case Term::Kind::MethodValue:
      collect_binders(t.body(), out);
      return;
    default:
      return;
  }
}

std::set<std::string> binders_of(const std::vector<ir::Equation>& eqs) {
  std::set<std::string> out;
  for (const auto& eq : eqs) {
    for (const auto& p : eq.params)
      for (const auto& v : ir::pattern_vars(p)) out.insert(v);
    collect_binders(eq.rhs, out);
  }
  return out;
}

TypeExpr dict_type(const ir::Constraint& c) {
  return TypeExpr::con(dict_type_name(c.className), {TypeExpr::var(c.var)});
}

class Elaborator {
 public:
  explicit Elaborator(const ir::Program& p) : src_(p), idx_(p) {}

  Term rewrite(const Term& t, const std::vector<InScope>& scope) const {
    switch (t.kind()) {
      case Term::Kind::Ref:
        return rewrite_ref(t, scope);
      case Term::Kind::App:
        return Term::app(rewrite(t.fun(), scope), rewrite(t.arg(), scope));
      case Term::Kind::Abs:
        return Term::abs(t.name(), t.type(), rewrite(t.body(), scope));
      case Term::Kind::Case: {
        std::vector<ir::Clause> cs;
        for (const auto& c : t.clauses()) cs.push_back({c.pattern, rewrite(c.body, scope)});
        return Term::case_of(rewrite(t.scrutinee(), scope), t.type(), std::move(cs));
      }
      case Term::Kind::Field:
        return Term::field(rewrite(t.target(), scope), t.name(), t.index(), t.method_arity());
      case Term::Kind::MethodValue:
        return Term::method_value(rewrite(t.body(), scope), t.index());
      default:
        return t;
    }
  }

  ir::Program run() const {
    ir::Program out;
    for (const auto& d : src_.decls) {
      if (auto* c = std::get_if<ir::ClassDecl>(&d)) {
        out.decls.push_back(class_data(*c));
      } else if (auto* inst = std::get_if<ir::InstanceDecl>(&d)) {
        for (auto& x : instance_decls(*inst)) out.decls.push_back(std::move(x));
      } else if (auto* f = std::get_if<ir::FunDecl>(&d)) {
        out.decls.push_back(fun(*f));
      } else if (auto* k = std::get_if<ir::ConstDecl>(&d)) {
        ir::ConstDecl c = *k;
        c.rhs = rewrite(k->rhs, {});
        out.decls.push_back(std::move(c));
      } else {
        out.decls.push_back(d);
      }
    }
    auto diags = ir::validate(out);
    if (!diags.empty())
      throw DictError(DictError::Kind::Unsupported,
                      "elaborated program is ill-formed: " + diags.front().decl + ": " +
                          diags.front().message);
    return out;
  }

  const ir::Index& index() const { return idx_; }

 private:
  std::vector<Term> dict_args(const std::vector<ir::Constraint>& cs,
                              const std::vector<std::string>& params,
                              const std::vector<TypeExpr>& args,
                              const std::vector<InScope>& scope) const {
    ir::TypeSubst sub;
    for (std::size_t i = 0; i < params.size() && i < args.size(); ++i) sub.emplace(params[i], args[i]);
    std::vector<Term> out;
    for (const auto& c : cs)
      out.push_back(path_term(
          idx_, resolve_constraint(idx_, c.className, ir::substitute(TypeExpr::var(c.var), sub), scope)));
    return out;
  }

  Term rewrite_ref(const Term& t, const std::vector<InScope>& scope) const {
    if (auto m = idx_.method(t.name())) {
      const auto& [cls, i] = *m;
      const TypeExpr& at = t.type_args().at(0);
      if (at.is_var()) {
        auto path = resolve_constraint(idx_, cls->name, at, scope);
        int arity = static_cast<int>(ir::arrow_count(cls->methods[i].signature));
        return Term::field(path_term(idx_, path), dict_type_name(cls->name),
                           cls->superclasses.size() + i, arity);
      }
      if (!at.is_con()) missing(cls->name, at);
      const auto& inst = unique_instance(idx_, cls->name, at);
      return Term::apps(Term::ref(instance_method_name(t.name(), inst.tyCon), at.args()),
                        dict_args(inst.constraints, inst.tyParams, at.args(), scope));
    }
    if (const auto* f = idx_.fun(t.name()); f && !f->constraints.empty())
      return Term::apps(t, dict_args(f->constraints, f->tyParams, t.type_args(), scope));
    return t;
  }

  ir::DataDecl class_data(const ir::ClassDecl& c) const {
    ir::DataDecl d;
    d.name = dict_type_name(c.name);
    d.tyParams = {c.tyParam};
    ir::Ctor ctor{d.name, {}};
    ir::DictInfo info{c.name, {}, {}};
    for (const auto& s : c.superclasses) {
      ctor.fields.push_back(TypeExpr::con(dict_type_name(s), {TypeExpr::var(c.tyParam)}));
      info.fieldNames.push_back(superclass_field(s, c.name));
      info.methodArity.push_back(-1);
    }
    for (const auto& m : c.methods) {
      ctor.fields.push_back(m.signature);
      info.fieldNames.push_back(capitalize(m.name));
      info.methodArity.push_back(static_cast<int>(ir::arrow_count(m.signature)));
    }
    d.ctors.push_back(std::move(ctor));
    d.dict = std::move(info);
    return d;
  }

  ir::Declaration fun(const ir::FunDecl& f) const {
    if (f.constraints.empty()) {
      ir::FunDecl out = f;
      for (auto& eq : out.equations) eq.rhs = rewrite(eq.rhs, {});
      return out;
    }
    auto scope = constraint_params(f.constraints, binders_of(f.equations));
    ir::FunDecl out;
    out.name = f.name;
    out.tyParams = f.tyParams;
    std::vector<TypeExpr> dicts;
    for (const auto& s : scope) dicts.push_back(dict_type(s.constraint));
    out.signature = TypeExpr::arrows(dicts, f.signature);
    out.dictParams = scope.size();
    for (const auto& eq : f.equations) {
      ir::Equation e;
      for (const auto& s : scope) e.params.push_back(ir::Pattern::var(s.param));
      e.params.insert(e.params.end(), eq.params.begin(), eq.params.end());
      e.rhs = rewrite(eq.rhs, scope);
      out.equations.push_back(std::move(e));
    }
    return out;
  }

  std::vector<ir::Declaration> instance_decls(const ir::InstanceDecl& inst) const {
    const auto* cls = idx_.class_decl(inst.className);
    std::vector<TypeExpr> params;
    for (const auto& p : inst.tyParams) params.push_back(TypeExpr::var(p));
    TypeExpr head = TypeExpr::con(inst.tyCon, params);

    std::set<std::string> taken;
    for (const auto& m : inst.methods) {
      auto b = binders_of(m.equations);
      taken.insert(b.begin(), b.end());
    }
    auto scope = constraint_params(inst.constraints, taken);
    std::vector<TypeExpr> dictTypes;
    std::vector<ir::Pattern> dictPats;
    std::vector<Term> dictVars;
    for (const auto& s : scope) {
      dictTypes.push_back(dict_type(s.constraint));
      dictPats.push_back(ir::Pattern::var(s.param));
      dictVars.push_back(Term::var(s.param));
    }

    std::vector<ir::Declaration> out;
    std::vector<Term> fields;
    for (const auto& s : cls->superclasses)
      fields.push_back(path_term(idx_, resolve_constraint(idx_, s, head, scope)));

    for (const auto& cm : cls->methods) {
      auto def = std::find_if(inst.methods.begin(), inst.methods.end(),
                              [&](const ir::MethodDef& d) { return d.name == cm.name; });
      TypeExpr sig = ir::substitute(cm.signature, {{cls->tyParam, head}});
      std::string name = instance_method_name(cm.name, inst.tyCon);
      bool nullary = def->equations.front().params.empty();
      if (nullary && scope.empty()) {
        out.push_back(ir::ConstDecl{name, inst.tyParams, sig,
                                    rewrite(def->equations.front().rhs, scope)});
      } else {
        ir::FunDecl f{name, inst.tyParams, {}, ir::TypeExpr::arrows(dictTypes, sig), {}, scope.size()};
        for (const auto& eq : def->equations) {
          ir::Equation e{dictPats, rewrite(eq.rhs, scope)};
          e.params.insert(e.params.end(), eq.params.begin(), eq.params.end());
          f.equations.push_back(std::move(e));
          if (nullary) break;
        }
        out.push_back(std::move(f));
      }
      Term impl = Term::apps(Term::ref(name, params), dictVars);
      fields.push_back(Term::method_value(impl, ir::arrow_count(cm.signature)));
    }

    std::string dname = instance_dict_name(inst.className, inst.tyCon);
    TypeExpr dtype = TypeExpr::con(dict_type_name(cls->name), {head});
    Term value = Term::apps(Term::ref(dict_type_name(cls->name), {head}), fields);
    if (scope.empty()) {
      out.push_back(ir::ConstDecl{dname, inst.tyParams, dtype, value});
    } else {
      out.push_back(ir::FunDecl{dname, inst.tyParams, {}, ir::TypeExpr::arrows(dictTypes, dtype),
                                {ir::Equation{dictPats, value}}, scope.size()});
    }
    return out;
  }

  const ir::Program& src_;
  ir::Index idx_;
};

}  // namespace

std::string dict_type_name(const std::string& className) { return className; }

std::string instance_dict_name(const std::string& className, const std::string& tyCon) {
  return className + "_" + tyCon;
}

std::string instance_method_name(const std::string& method, const std::string& tyCon) {
  return method + "_" + tyCon;
}

std::string superclass_field(const std::string& super, const std::string& className) {
  return capitalize(super) + "_" + className;
}

InstancePath resolve_constraint(const ir::Index& idx, const std::string& className,
                                const TypeExpr& type, const std::vector<InScope>& inScope) {
  if (type.is_var()) {
    for (const auto& s : inScope) {
      if (s.constraint.var != type.name()) continue;
      if (auto chain = superclass_chain(idx, s.constraint.className, className)) {
        InstancePath p;
        p.fromParam = true;
        p.root = s.param;
        p.rootClass = s.constraint.className;
        p.projections = std::move(*chain);
        return p;
      }
    }
    missing(className, type);
  }
  if (!type.is_con()) missing(className, type);
  const auto& inst = unique_instance(idx, className, type);
  InstancePath p;
  p.root = instance_dict_name(className, inst.tyCon);
  p.rootClass = className;
  p.typeArgs = type.args();
  ir::TypeSubst sub;
  for (std::size_t i = 0; i < inst.tyParams.size(); ++i) sub.emplace(inst.tyParams[i], type.args()[i]);
  for (const auto& c : inst.constraints)
    p.args.push_back(resolve_constraint(idx, c.className, sub.at(c.var), inScope));
  return p;
}

ir::Term path_term(const ir::Index& idx, const InstancePath& path) {
  Term t;
  if (path.fromParam) {
    t = Term::var(path.root);
  } else {
    std::vector<Term> args;
    for (const auto& a : path.args) args.push_back(path_term(idx, a));
    t = Term::apps(Term::ref(path.root, path.typeArgs), args);
  }
  std::string cls = path.rootClass;
  for (const auto& super : path.projections) {
    const auto* c = idx.class_decl(cls);
    auto it = std::find(c->superclasses.begin(), c->superclasses.end(), super);
    t = Term::field(t, dict_type_name(cls), static_cast<std::size_t>(it - c->superclasses.begin()), -1);
    cls = super;
  }
  return t;
}

ir::Program elaborate(const ir::Program& p) { return Elaborator(p).run(); }

ir::Term elaborate_term(const ir::Program& original, const ir::Term& t) {
  return Elaborator(original).rewrite(t, {});
}

}  // namespace fgo::dict
