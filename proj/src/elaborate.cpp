#include <algorithm>
#include <map>
#include <set>

#include "surface.hpp"

namespace fgo::parser::surface {

namespace {

using ir::TypeExpr;

struct ElabError {
  Diagnostic diag;
};

[[noreturn]] void fail(SourcePos pos, DiagKind kind, std::string message) {
  throw ElabError{{pos, kind, std::move(message)}};
}

bool is_meta(const TypeExpr& t) { return t.is_var() && !t.name().empty() && t.name()[0] == '?'; }

// A reference whose type arguments still have to be checked against the
// class constraints of its target once inference is complete.
struct PendingRef {
  std::string name;
  std::vector<TypeExpr> typeArgs;
  SourcePos pos;
};

/// Unification-based annotation of one declaration body.
class Inference {
 public:
  Inference(const ir::Index& idx, std::vector<std::string> rigid,
            std::vector<ir::Constraint> given, std::size_t& counter)
      : idx_(idx), rigid_(std::move(rigid)), given_(std::move(given)), counter_(counter) {}

  TypeExpr fresh() { return TypeExpr::var("?" + std::to_string(counter_++)); }

  TypeExpr resolve(const TypeExpr& t) const {
    switch (t.kind()) {
      case TypeExpr::Kind::Var: {
        if (!is_meta(t)) return t;
        auto it = subst_.find(t.name());
        return it == subst_.end() ? t : resolve(it->second);
      }
      case TypeExpr::Kind::Con: {
        if (t.args().empty()) return t;
        std::vector<TypeExpr> args;
        for (const auto& a : t.args()) args.push_back(resolve(a));
        return TypeExpr::con(t.name(), std::move(args));
      }
      case TypeExpr::Kind::Fun:
        return TypeExpr::fun(resolve(t.arg()), resolve(t.result()));
    }
    return t;
  }

  void unify(const TypeExpr& a, const TypeExpr& b, SourcePos pos) {
    TypeExpr x = resolve(a), y = resolve(b);
    if (x == y) return;
    if (is_meta(x)) return bind(x.name(), y, pos, a, b);
    if (is_meta(y)) return bind(y.name(), x, pos, a, b);
    if (x.kind() == y.kind() && x.is_fun()) {
      unify(x.arg(), y.arg(), pos);
      unify(x.result(), y.result(), pos);
      return;
    }
    if (x.is_con() && y.is_con() && x.name() == y.name() && x.args().size() == y.args().size()) {
      for (std::size_t i = 0; i < x.args().size(); ++i) unify(x.args()[i], y.args()[i], pos);
      return;
    }
    mismatch(pos, x, y);
  }

  ir::Term infer(const TermPtr& t, const ir::TypeEnv& env, TypeExpr& out) {
    switch (t->kind) {
      case Term::Kind::Name: {
        if (auto it = env.find(t->name); it != env.end()) {
          out = it->second;
          return ir::Term::var(t->name);
        }
        auto scheme = idx_.scheme(t->name);
        if (!scheme) fail(t->pos, DiagKind::Scope, "unknown name '" + t->name + "'");
        std::vector<TypeExpr> args;
        ir::TypeSubst s;
        for (const auto& p : scheme->params) {
          args.push_back(fresh());
          s.emplace(p, args.back());
        }
        out = ir::substitute(scheme->type, s);
        pending_.push_back({t->name, args, t->pos});
        return ir::Term::ref(t->name, std::move(args));
      }
      case Term::Kind::App: {
        TypeExpr tf, ta;
        ir::Term f = infer(t->left, env, tf);
        ir::Term a = infer(t->right, env, ta);
        out = fresh();
        TypeExpr rf = resolve(tf);
        if (!rf.is_fun() && !is_meta(rf))
          fail(t->pos, DiagKind::Type, "applying a value of type " + show(rf) + " as a function");
        unify(tf, TypeExpr::fun(ta, out), t->right->pos);
        return ir::Term::app(std::move(f), std::move(a));
      }
      case Term::Kind::Lam: {
        TypeExpr binder = t->type ? convert(t->type) : fresh();
        ir::TypeEnv inner = env;
        inner[t->name] = binder;
        TypeExpr tb;
        ir::Term body = infer(t->left, inner, tb);
        out = TypeExpr::fun(binder, tb);
        return ir::Term::abs(t->name, binder, std::move(body));
      }
      case Term::Kind::Let: {
        TypeExpr tv;
        ir::Term bound = infer(t->left, env, tv);
        ir::TypeEnv inner = env;
        inner[t->name] = tv;
        TypeExpr tb;
        ir::Term body = infer(t->right, inner, tb);
        out = tb;
        return ir::Term::app(ir::Term::abs(t->name, tv, std::move(body)), std::move(bound));
      }
      case Term::Kind::Case: {
        TypeExpr ts;
        ir::Term scrutinee = infer(t->left, env, ts);
        out = fresh();
        std::vector<ir::Clause> clauses;
        for (const auto& c : t->clauses) {
          ir::TypeEnv inner = env;
          std::set<std::string> bound;
          ir::Pattern p = check_pattern(c.pattern, ts, inner, bound);
          TypeExpr tb;
          ir::Term body = infer(c.body, inner, tb);
          unify(out, tb, c.body->pos);
          clauses.push_back({std::move(p), std::move(body)});
        }
        return ir::Term::case_of(std::move(scrutinee), ts, std::move(clauses));
      }
      case Term::Kind::IntLit: {
        auto value = BigInt::parse(t->name);
        out = fresh();
        numeric_.insert(out.name());
        return ir::Term::lit({*value, out});
      }
      case Term::Kind::StrLit:
        out = TypeExpr::con(std::string(prim::kString));
        return ir::Term::lit({t->name, out});
      case Term::Kind::Annot: {
        TypeExpr inner;
        ir::Term e = infer(t->left, env, inner);
        out = convert(t->type);
        unify(inner, out, t->pos);
        return e;
      }
    }
    fail(t->pos, DiagKind::Parse, "unsupported term");
  }

  ir::Pattern check_pattern(const PatternPtr& p, const TypeExpr& expected, ir::TypeEnv& env,
                            std::set<std::string>& bound) {
    if (auto c = idx_.ctor(p->name)) {
      const auto& [data, i] = *c;
      const auto& ctor = data->ctors[i];
      if (ctor.fields.size() != p->args.size())
        fail(p->pos, DiagKind::Arity,
             "constructor '" + p->name + "' takes " + std::to_string(ctor.fields.size()) +
                 " arguments but the pattern gives " + std::to_string(p->args.size()));
      std::vector<TypeExpr> args;
      ir::TypeSubst s;
      for (const auto& tp : data->tyParams) {
        args.push_back(fresh());
        s.emplace(tp, args.back());
      }
      unify(TypeExpr::con(data->name, args), expected, p->pos);
      std::vector<ir::Pattern> subs;
      for (std::size_t k = 0; k < p->args.size(); ++k)
        subs.push_back(check_pattern(p->args[k], ir::substitute(ctor.fields[k], s), env, bound));
      return ir::Pattern::con(p->name, std::move(args), std::move(subs));
    }
    if (!p->args.empty()) fail(p->pos, DiagKind::Scope, "unknown constructor '" + p->name + "'");
    if (const auto* op = idx_.prim(p->name); op && op->argTypes.empty())
      fail(p->pos, DiagKind::Type, "cannot match on the built-in constant '" + p->name + "'");
    if (p->name != ir::kWildcard) {
      if (!bound.insert(p->name).second)
        fail(p->pos, DiagKind::Type, "variable '" + p->name + "' is bound twice in one pattern");
      env[p->name] = expected;
    }
    return ir::Pattern::var(p->name);
  }

  TypeExpr convert(const TypePtr& t) const {
    switch (t->kind) {
      case Type::Kind::Var:
        if (std::find(rigid_.begin(), rigid_.end(), t->name) == rigid_.end())
          fail(t->pos, DiagKind::Scope, "type variable '" + t->name + " is not in scope");
        return TypeExpr::var(t->name);
      case Type::Kind::Fun:
        return TypeExpr::fun(convert(t->args[0]), convert(t->args[1]));
      case Type::Kind::Con: {
        auto n = idx_.type_arity(t->name);
        if (!n) fail(t->pos, DiagKind::Scope, "unknown type '" + t->name + "'");
        if (*n != t->args.size())
          fail(t->pos, DiagKind::Arity,
               "type '" + t->name + "' expects " + std::to_string(*n) + " arguments");
        std::vector<TypeExpr> args;
        for (const auto& a : t->args) args.push_back(convert(a));
        return TypeExpr::con(t->name, std::move(args));
      }
    }
    return TypeExpr();
  }

  /// Replaces solved metas; numeric ones default to int, others either
  /// default to int too (`defaultAll`) or are reported.
  TypeExpr finish(const TypeExpr& t, SourcePos pos, bool defaultAll) const {
    TypeExpr r = resolve(t);
    return ir::substitute(r, defaults(r, pos, defaultAll));
  }

  ir::Term finish(const ir::Term& t, SourcePos pos, bool defaultAll) const {
    return ir::map_types(t, [&](const TypeExpr& x) { return finish(x, pos, defaultAll); });
  }

  ir::Pattern finish(const ir::Pattern& p, SourcePos pos, bool defaultAll) const {
    return ir::map_types(p, [&](const TypeExpr& x) { return finish(x, pos, defaultAll); });
  }

  /// Checks that every constrained reference is backed by a constraint in
  /// scope or a declared instance.
  void check_constraints(bool defaultAll) const {
    for (const auto& ref : pending_) {
      auto scheme = idx_.scheme(ref.name);
      if (scheme->kind == ir::Scheme::Kind::Method) {
        const auto* cls = idx_.method(ref.name)->first;
        entail(cls->name, finish(ref.typeArgs[0], ref.pos, defaultAll), ref.pos);
      } else if (scheme->kind == ir::Scheme::Kind::Fun) {
        const auto* f = idx_.fun(ref.name);
        for (const auto& c : f->constraints) {
          auto at = std::find(f->tyParams.begin(), f->tyParams.end(), c.var) - f->tyParams.begin();
          entail(c.className, finish(ref.typeArgs[at], ref.pos, defaultAll), ref.pos);
        }
      }
    }
  }

  void entail(const std::string& cls, const TypeExpr& t, SourcePos pos) const {
    if (t.is_var()) {
      for (const auto& g : given_)
        if (g.var == t.name() && idx_.is_subclass(g.className, cls)) return;
      fail(pos, DiagKind::Type,
           "missing constraint '" + t.name() + " :: " + cls + " (add it to the signature)");
    }
    if (t.is_con()) {
      auto insts = idx_.instances(cls, t.name());
      if (insts.size() == 1) {
        const auto* inst = insts[0];
        for (const auto& c : inst->constraints) {
          auto at = std::find(inst->tyParams.begin(), inst->tyParams.end(), c.var) -
                    inst->tyParams.begin();
          entail(c.className, t.args()[at], pos);
        }
        return;
      }
    }
    fail(pos, DiagKind::Type, "no instance of " + cls + " for type " + show(t));
  }

  std::string show(const TypeExpr& t) const { return ir::to_string(resolve(t)); }

 private:
  void bind(const std::string& meta, const TypeExpr& t, SourcePos pos, const TypeExpr& a,
            const TypeExpr& b) {
    if (occurs(meta, t)) mismatch(pos, resolve(a), resolve(b));
    if (numeric_.count(meta)) {
      if (is_meta(t)) {
        numeric_.insert(t.name());
      } else if (!(t.is_con() && (t.name() == prim::kInt || t.name() == prim::kNat))) {
        fail(pos, DiagKind::Type, "numeric literal used at type " + show(t));
      }
    }
    subst_[meta] = t;
  }

  bool occurs(const std::string& meta, const TypeExpr& t) const {
    TypeExpr r = resolve(t);
    if (r.is_var()) return r.name() == meta;
    return std::any_of(r.args().begin(), r.args().end(),
                       [&](const TypeExpr& a) { return occurs(meta, a); });
  }

  [[noreturn]] void mismatch(SourcePos pos, const TypeExpr& x, const TypeExpr& y) const {
    fail(pos, DiagKind::Type, "cannot match type " + ir::to_string(x) + " with " + ir::to_string(y));
  }

  ir::TypeSubst defaults(const TypeExpr& t, SourcePos pos, bool defaultAll) const {
    std::vector<std::string> vars;
    ir::free_type_vars(t, vars);
    ir::TypeSubst s;
    for (const auto& v : vars) {
      if (v.empty() || v[0] != '?') continue;
      if (!defaultAll && !numeric_.count(v))
        fail(pos, DiagKind::Type, "ambiguous type: add an annotation");
      s.emplace(v, TypeExpr::con(std::string(prim::kInt)));
    }
    return s;
  }

  const ir::Index& idx_;
  std::vector<std::string> rigid_;
  std::vector<ir::Constraint> given_;
  std::size_t& counter_;
  std::map<std::string, TypeExpr> subst_;
  std::set<std::string> numeric_;
  std::vector<PendingRef> pending_;
};

void collect_vars(const TypePtr& t, std::vector<std::string>& out) {
  if (t->kind == Type::Kind::Var) {
    if (std::find(out.begin(), out.end(), t->name) == out.end()) out.push_back(t->name);
    return;
  }
  for (const auto& a : t->args) collect_vars(a, out);
}

class Elaborator {
 public:
  Elaborator(const Module& m, std::vector<Diagnostic>& diags) : mod_(m), diags_(diags) {}

  std::optional<ir::Program> run() {
    std::size_t before = diags_.size();
    // Headers first: bodies may reference any declaration.
    std::vector<bool> ok(mod_.decls.size(), false);
    for (std::size_t i = 0; i < mod_.decls.size(); ++i) {
      try {
        header_.decls.push_back(std::visit([this](const auto& d) { return header(d); },
                                           mod_.decls[i]));
        ok[i] = true;
      } catch (const ElabError& e) {
        diags_.push_back(e.diag);
        header_.decls.push_back(ir::DataDecl{"?" + std::to_string(i), {}, {}, {}});
      }
    }
    if (diags_.size() != before) return std::nullopt;
    ir::Index idx(header_);
    check_names(idx);
    ir::Program out;
    for (std::size_t i = 0; i < mod_.decls.size(); ++i) {
      try {
        out.decls.push_back(std::visit(
            [&](const auto& d) { return body(idx, d, header_.decls[i]); }, mod_.decls[i]));
      } catch (const ElabError& e) {
        diags_.push_back(e.diag);
      }
    }
    if (diags_.size() != before) return std::nullopt;
    check_superclass_instances(idx);
    if (diags_.size() != before) return std::nullopt;
    for (const auto& d : ir::validate(out))
      diags_.push_back({position_of(d.decl), DiagKind::Type,
                        std::string(ir::to_string(d.kind)) + ": " + d.message});
    if (diags_.size() != before) return std::nullopt;
    return out;
  }

 private:
  // ---- headers

  TypeExpr convert(const TypePtr& t, const std::vector<std::string>& scope) {
    switch (t->kind) {
      case Type::Kind::Var:
        if (std::find(scope.begin(), scope.end(), t->name) == scope.end())
          fail(t->pos, DiagKind::Scope, "type variable '" + t->name + " is not in scope");
        return TypeExpr::var(t->name);
      case Type::Kind::Fun:
        return TypeExpr::fun(convert(t->args[0], scope), convert(t->args[1], scope));
      case Type::Kind::Con: {
        std::optional<std::size_t> n;
        if (prim::is_base_type(t->name)) n = 0;
        for (const auto& d : mod_.decls)
          if (auto* data = std::get_if<DataDecl>(&d); data && data->name == t->name)
            n = data->tyParams.size();
        if (!n) fail(t->pos, DiagKind::Scope, "unknown type '" + t->name + "'");
        if (*n != t->args.size())
          fail(t->pos, DiagKind::Arity,
               "type '" + t->name + "' expects " + std::to_string(*n) + " arguments, got " +
                   std::to_string(t->args.size()));
        std::vector<TypeExpr> args;
        for (const auto& a : t->args) args.push_back(convert(a, scope));
        return TypeExpr::con(t->name, std::move(args));
      }
    }
    return TypeExpr();
  }

  std::vector<ir::Constraint> constraints(const std::vector<Sort>& sorts,
                                          const std::vector<std::string>& scope) {
    std::vector<ir::Constraint> out;
    for (const auto& s : sorts) {
      if (std::find(scope.begin(), scope.end(), s.var) == scope.end())
        fail(s.pos, DiagKind::Scope, "constraint on unknown type variable '" + s.var);
      if (!find_class(s.className))
        fail(s.pos, DiagKind::Scope, "unknown class '" + s.className + "'");
      ir::Constraint c{s.var, s.className};
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    return out;
  }

  const ClassDecl* find_class(const std::string& name) const {
    for (const auto& d : mod_.decls)
      if (auto* c = std::get_if<ClassDecl>(&d); c && c->name == name) return c;
    return nullptr;
  }

  ir::Declaration header(const DataDecl& d) {
    positions_[d.name] = d.pos;
    ir::DataDecl out{d.name, d.tyParams, {}, {}};
    for (const auto& [name, fields] : d.ctors) {
      ir::Ctor c{name, {}};
      for (const auto& f : fields) c.fields.push_back(convert(f, d.tyParams));
      out.ctors.push_back(std::move(c));
    }
    return out;
  }

  ir::Declaration header(const FunDecl& f) {
    positions_[f.name] = f.pos;
    ir::FunDecl out;
    out.name = f.name;
    collect_vars(f.signature, out.tyParams);
    out.signature = convert(f.signature, out.tyParams);
    out.constraints = constraints(f.sorts, out.tyParams);
    return out;
  }

  ir::Declaration header(const ClassDecl& c) {
    positions_[c.name] = c.pos;
    ir::ClassDecl out{c.name, "a", c.superclasses, {}};
    std::vector<std::string> vars;
    for (const auto& [name, sig] : c.methods) collect_vars(sig, vars);
    if (vars.size() > 1)
      fail(c.pos, DiagKind::Type, "class methods may only mention the class type variable");
    if (!vars.empty()) out.tyParam = vars[0];
    for (const auto& s : c.superclasses)
      if (!find_class(s)) fail(c.pos, DiagKind::Scope, "unknown superclass '" + s + "'");
    for (const auto& [name, sig] : c.methods)
      out.methods.push_back({name, convert(sig, {out.tyParam})});
    return out;
  }

  ir::Declaration header(const InstanceDecl& inst) {
    ir::InstanceDecl out;
    out.className = inst.className;
    if (inst.head->kind != Type::Kind::Con)
      fail(inst.head->pos, DiagKind::Type, "instance head must be a type constructor");
    out.tyCon = inst.head->name;
    for (const auto& a : inst.head->args) {
      if (a->kind != Type::Kind::Var ||
          std::find(out.tyParams.begin(), out.tyParams.end(), a->name) != out.tyParams.end())
        fail(a->pos, DiagKind::Type, "instance head arguments must be distinct type variables");
      out.tyParams.push_back(a->name);
    }
    convert(inst.head, out.tyParams);
    if (!find_class(inst.className))
      fail(inst.pos, DiagKind::Scope, "unknown class '" + inst.className + "'");
    out.constraints = constraints(inst.sorts, out.tyParams);
    positions_[ir::decl_name(ir::Declaration(out))] = inst.pos;
    return out;
  }

  ir::Declaration header(const ConstDecl& c) {
    positions_[c.name] = c.pos;
    ir::ConstDecl out;
    out.name = c.name;
    collect_vars(c.signature, out.tyParams);
    out.signature = convert(c.signature, out.tyParams);
    if (!c.sorts.empty())
      fail(c.pos, DiagKind::Type, "constants cannot carry class constraints");
    return out;
  }

  void check_names(const ir::Index& idx) {
    std::map<std::string, std::string> values;
    for (const auto& op : prim::ops()) values[op.name] = "built-in";
    auto claim = [&](const std::string& name, const std::string& owner) {
      if (!values.emplace(name, owner).second)
        diags_.push_back({position_of(owner), DiagKind::Scope, "'" + name + "' is already defined"});
    };
    std::set<std::string> types;
    for (const auto& b : {prim::kInt, prim::kNat, prim::kBool, prim::kString})
      types.insert(std::string(b));
    for (const auto& d : header_.decls) {
      if (auto* data = std::get_if<ir::DataDecl>(&d)) {
        if (!types.insert(data->name).second)
          diags_.push_back(
              {position_of(data->name), DiagKind::Scope, "type '" + data->name + "' is already defined"});
        for (const auto& c : data->ctors) claim(c.name, data->name);
      } else if (auto* f = std::get_if<ir::FunDecl>(&d)) {
        claim(f->name, f->name);
      } else if (auto* c = std::get_if<ir::ConstDecl>(&d)) {
        claim(c->name, c->name);
      } else if (auto* cls = std::get_if<ir::ClassDecl>(&d)) {
        for (const auto& m : cls->methods) claim(m.name, cls->name);
        for (const auto& s : cls->superclasses)
          if (idx.is_subclass(s, cls->name))
            diags_.push_back({position_of(cls->name), DiagKind::Type, "cyclic class hierarchy"});
      } else if (auto* inst = std::get_if<ir::InstanceDecl>(&d)) {
        if (idx.instances(inst->className, inst->tyCon).size() > 1)
          diags_.push_back({position_of(ir::decl_name(d)), DiagKind::Type,
                            "overlapping instances of " + inst->className + " for " + inst->tyCon});
      }
    }
  }

  void check_superclass_instances(const ir::Index& idx) {
    std::size_t counter = 0;
    for (const auto& d : header_.decls) {
      const auto* inst = std::get_if<ir::InstanceDecl>(&d);
      if (!inst) continue;
      const auto* cls = idx.class_decl(inst->className);
      std::vector<TypeExpr> params;
      for (const auto& p : inst->tyParams) params.push_back(TypeExpr::var(p));
      Inference inf(idx, inst->tyParams, inst->constraints, counter);
      for (const auto& s : cls->superclasses) {
        try {
          inf.entail(s, TypeExpr::con(inst->tyCon, params), position_of(ir::decl_name(d)));
        } catch (const ElabError& e) {
          diags_.push_back(e.diag);
        }
      }
    }
  }

  SourcePos position_of(const std::string& decl) const {
    auto it = positions_.find(decl);
    return it == positions_.end() ? SourcePos{} : it->second;
  }

  // ---- bodies

  std::vector<ir::Equation> equations(const ir::Index& idx, const std::vector<Equation>& eqs,
                                      const TypeExpr& sig, const std::vector<std::string>& rigid,
                                      const std::vector<ir::Constraint>& given) {
    std::vector<ir::Equation> out;
    std::size_t m = eqs.front().params.size();
    for (const auto& eq : eqs) {
      if (eq.params.size() != m)
        fail(eq.pos, DiagKind::Arity,
             "equations of '" + eq.head + "' disagree on the number of parameters");
      if (ir::arrow_count(sig) < m)
        fail(eq.pos, DiagKind::Arity, "'" + eq.head + "' is given more parameters than its type allows");
      Inference inf(idx, rigid, given, counter_);
      auto [args, result] = ir::split_arrows(sig, m);
      ir::TypeEnv env;
      std::set<std::string> bound;
      std::vector<ir::Pattern> params;
      for (std::size_t k = 0; k < m; ++k) {
        std::set<std::string> local;
        params.push_back(inf.check_pattern(eq.params[k], args[k], env, local));
        for (const auto& v : local)
          if (!bound.insert(v).second)
            fail(eq.params[k]->pos, DiagKind::Type, "variable '" + v + "' is bound twice");
      }
      TypeExpr tr;
      ir::Term rhs = inf.infer(eq.rhs, env, tr);
      inf.unify(tr, result, eq.rhs->pos);
      for (auto& p : params) p = inf.finish(p, eq.pos, false);
      rhs = inf.finish(rhs, eq.pos, false);
      inf.check_constraints(false);
      out.push_back({std::move(params), std::move(rhs)});
    }
    return out;
  }

  ir::Declaration body(const ir::Index&, const DataDecl&, const ir::Declaration& h) { return h; }
  ir::Declaration body(const ir::Index&, const ClassDecl&, const ir::Declaration& h) { return h; }

  ir::Declaration body(const ir::Index& idx, const FunDecl& f, const ir::Declaration& h) {
    ir::FunDecl out = std::get<ir::FunDecl>(h);
    for (const auto& eq : f.equations)
      if (eq.head != f.name)
        fail(eq.pos, DiagKind::Parse, "equation for '" + eq.head + "' inside 'fun " + f.name + "'");
    out.equations = equations(idx, f.equations, out.signature, out.tyParams, out.constraints);
    return out;
  }

  ir::Declaration body(const ir::Index& idx, const InstanceDecl& inst, const ir::Declaration& h) {
    ir::InstanceDecl out = std::get<ir::InstanceDecl>(h);
    const auto* cls = idx.class_decl(out.className);
    std::vector<TypeExpr> params;
    for (const auto& p : out.tyParams) params.push_back(TypeExpr::var(p));
    TypeExpr head = TypeExpr::con(out.tyCon, params);
    std::map<std::string, std::vector<Equation>> grouped;
    for (const auto& eq : inst.equations) {
      auto it = std::find_if(cls->methods.begin(), cls->methods.end(),
                             [&](const ir::ClassMethod& m) { return m.name == eq.head; });
      if (it == cls->methods.end())
        fail(eq.pos, DiagKind::Scope, "'" + eq.head + "' is not a method of class " + cls->name);
      grouped[eq.head].push_back(eq);
    }
    for (const auto& m : cls->methods) {
      auto it = grouped.find(m.name);
      if (it == grouped.end())
        fail(inst.pos, DiagKind::Type,
             "instance " + out.tyCon + " :: " + cls->name + " does not define '" + m.name + "'");
      TypeExpr sig = ir::substitute(m.signature, {{cls->tyParam, head}});
      out.methods.push_back(
          {m.name, equations(idx, it->second, sig, out.tyParams, out.constraints)});
    }
    return out;
  }

  ir::Declaration body(const ir::Index& idx, const ConstDecl& c, const ir::Declaration& h) {
    ir::ConstDecl out = std::get<ir::ConstDecl>(h);
    Inference inf(idx, out.tyParams, {}, counter_);
    TypeExpr t;
    ir::Term rhs = inf.infer(c.rhs, {}, t);
    inf.unify(t, out.signature, c.rhs->pos);
    out.rhs = inf.finish(rhs, c.pos, false);
    inf.check_constraints(false);
    return out;
  }

  const Module& mod_;
  std::vector<Diagnostic>& diags_;
  ir::Program header_;
  std::map<std::string, SourcePos> positions_;
  std::size_t counter_ = 0;
};

}  // namespace

std::optional<ir::Program> elaborate(const Module& m, std::vector<Diagnostic>& diags) {
  return Elaborator(m, diags).run();
}

std::optional<std::pair<ir::Term, ir::TypeExpr>> elaborate_term(
    const ir::Program& p, const TermPtr& t, std::vector<Diagnostic>& diags) {
  ir::Index idx(p);
  std::size_t counter = 0;
  Inference inf(idx, {}, {}, counter);
  try {
    TypeExpr ty;
    ir::Term term = inf.infer(t, {}, ty);
    term = inf.finish(term, t->pos, true);
    ty = inf.finish(ty, t->pos, true);
    inf.check_constraints(true);
    return std::make_pair(term, ty);
  } catch (const ElabError& e) {
    diags.push_back(e.diag);
    return std::nullopt;
  }
}

}  // namespace fgo::parser::surface

namespace fgo::parser {

ParseResult parse_program(std::string_view src) {
  ParseResult r;
  auto toks = surface::lex(src, r.diagnostics);
  auto mod = surface::parse_module(toks, r.diagnostics);
  if (!r.diagnostics.empty()) return r;
  r.program = surface::elaborate(mod, r.diagnostics);
  return r;
}

TermResult parse_term(const ir::Program& p, std::string_view src) {
  TermResult r;
  auto toks = surface::lex(src, r.diagnostics);
  if (!r.diagnostics.empty()) return r;
  auto t = surface::parse_closed_term(toks, r.diagnostics);
  if (!t) return r;
  if (auto e = surface::elaborate_term(p, *t, r.diagnostics)) {
    r.term = e->first;
    r.type = e->second;
  }
  return r;
}

}  // namespace fgo::parser
