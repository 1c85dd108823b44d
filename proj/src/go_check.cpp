#include <map>
#include <set>

#include "fgo/go_ast.hpp"

namespace fgo::go {

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::UnknownName: return "UnknownName";
    case Problem::Redeclared: return "Redeclared";
    case Problem::ArityMismatch: return "ArityMismatch";
    case Problem::TypeMismatch: return "TypeMismatch";
    case Problem::NotInterface: return "NotInterface";
    case Problem::NotStruct: return "NotStruct";
    case Problem::MissingReturn: return "MissingReturn";
    case Problem::MultiValueMisuse: return "MultiValueMisuse";
    case Problem::UnusedVariable: return "UnusedVariable";
    case Problem::BlankRead: return "BlankRead";
    case Problem::NoNewVariables: return "NoNewVariables";
    case Problem::BadName: return "BadName";
    case Problem::Extension: return "Extension";
  }
  return "?";
}

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> k{
      "break", "case",  "chan",   "const",  "continue", "default", "defer",
      "else",  "fallthrough", "for", "func", "go",     "goto",    "if",
      "import", "interface", "map", "package", "range", "return", "select",
      "struct", "switch", "type", "var"};
  return k;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || keywords().count(s)) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    if (!alpha && !(i > 0 && c >= '0' && c <= '9')) return false;
  }
  return true;
}

const Type& untyped_nil() {
  static const Type t = Type::native("untyped nil");
  return t;
}

const Type& boolean() {
  static const Type t = Type::native("bool");
  return t;
}

bool is_nil(const Type& t) { return t == untyped_nil(); }

bool nil_assignable(const Type& to) {
  return to.kind == Type::Kind::Interface || to.kind == Type::Kind::Func;
}

bool assignable(const Type& from, const Type& to) {
  return from == to || (is_nil(from) && nil_assignable(to));
}

Type subst(const Type& t, const std::map<std::string, Type>& s) {
  if (t.kind == Type::Kind::Param) {
    auto it = s.find(t.name);
    return it == s.end() ? t : it->second;
  }
  Type out = t;
  for (auto& a : out.args) a = subst(a, s);
  for (auto& r : out.results) r = subst(r, s);
  return out;
}

bool unify(const Type& pattern, const Type& actual, const std::set<std::string>& vars,
           std::map<std::string, Type>& s) {
  if (pattern.kind == Type::Kind::Param && vars.count(pattern.name)) {
    auto it = s.find(pattern.name);
    if (it == s.end()) {
      s.emplace(pattern.name, actual);
      return true;
    }
    return it->second == actual;
  }
  if (pattern.kind != actual.kind || pattern.name != actual.name ||
      pattern.args.size() != actual.args.size() || pattern.results.size() != actual.results.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!unify(pattern.args[i], actual.args[i], vars, s)) return false;
  for (std::size_t i = 0; i < pattern.results.size(); ++i)
    if (!unify(pattern.results[i], actual.results[i], vars, s)) return false;
  return true;
}

struct Binding {
  Type type;
  bool used = false;
  bool param = false;
};

class Checker {
 public:
  Checker(const Program& p, Strictness s) : prog_(p), strict_(s == Strictness::Core) {}

  std::vector<Diagnostic> run() {
    for (const auto& d : prog_.decls) {
      if (const auto* t = std::get_if<TypeDecl>(&d)) {
        if (!types_.emplace(t->name, t).second || funcs_.count(t->name))
          report(t->name, Problem::Redeclared, "'" + t->name + "' declared twice");
      } else {
        const auto& f = std::get<FuncDecl>(d);
        if (!funcs_.emplace(f.name, &f).second || types_.count(f.name))
          report(f.name, Problem::Redeclared, "'" + f.name + "' declared twice");
      }
    }
    for (const auto& d : prog_.decls) {
      if (const auto* t = std::get_if<TypeDecl>(&d))
        check(*t);
      else
        check(std::get<FuncDecl>(d));
    }
    return std::move(out_);
  }

 private:
  void report(const std::string& decl, Problem p, std::string msg) {
    out_.push_back({decl, p, std::move(msg)});
  }
  void report(Problem p, std::string msg) { report(decl_, p, std::move(msg)); }
  void extension(const std::string& what) {
    if (strict_) report(Problem::Extension, what + " is an extension of the core fragment");
  }

  void check_type_params(const std::vector<std::string>& ps) {
    std::set<std::string> seen;
    for (const auto& p : ps) {
      if (!valid_ident(p)) report(Problem::BadName, "invalid type parameter '" + p + "'");
      if (!seen.insert(p).second) report(Problem::Redeclared, "type parameter '" + p + "' repeated");
    }
  }

  void wf(const Type& t) {
    switch (t.kind) {
      case Type::Kind::Param:
        if (!tparams_.count(t.name)) report(Problem::UnknownName, "unknown type parameter " + t.name);
        return;
      case Type::Kind::Struct:
      case Type::Kind::Interface: {
        auto it = types_.find(t.name);
        if (it == types_.end()) {
          report(Problem::UnknownName, "unknown type " + t.name);
          return;
        }
        bool iface = t.kind == Type::Kind::Interface;
        if (it->second->isInterface != iface)
          report(iface ? Problem::NotInterface : Problem::NotStruct,
                 t.name + " used as the wrong kind of type");
        if (it->second->typeParams.size() != t.args.size())
          report(Problem::ArityMismatch, "type " + t.name + " expects " +
                                             std::to_string(it->second->typeParams.size()) +
                                             " type arguments");
        for (const auto& a : t.args) wf(a);
        return;
      }
      case Type::Kind::Func:
        extension("function type");
        for (const auto& a : t.args) wf(a);
        for (const auto& r : t.results) wf(r);
        return;
      case Type::Kind::Native:
        extension("native type " + t.name);
        return;
    }
  }

  void check(const TypeDecl& t) {
    decl_ = t.name;
    if (!valid_ident(t.name)) report(Problem::BadName, "invalid type name '" + t.name + "'");
    check_type_params(t.typeParams);
    tparams_ = std::set<std::string>(t.typeParams.begin(), t.typeParams.end());
    std::set<std::string> seen;
    for (const auto& f : t.fields) {
      if (!valid_ident(f.name)) report(Problem::BadName, "invalid field name '" + f.name + "'");
      if (!seen.insert(f.name).second) report(Problem::Redeclared, "field " + f.name + " repeated");
      wf(f.type);
    }
  }

  void check(const FuncDecl& f) {
    decl_ = f.name;
    if (!valid_ident(f.name)) report(Problem::BadName, "invalid function name '" + f.name + "'");
    check_type_params(f.typeParams);
    tparams_ = std::set<std::string>(f.typeParams.begin(), f.typeParams.end());
    function(f.params, f.results, f.body);
  }

  void function(const std::vector<Param>& params, const std::vector<Type>& results, const StmtP& body) {
    frames_.emplace_back();
    for (const auto& p : params) {
      wf(p.type);
      if (p.name == kBlank) continue;
      if (!valid_ident(p.name)) report(Problem::BadName, "invalid parameter name '" + p.name + "'");
      if (!frames_.back().emplace(p.name, Binding{p.type, false, true}).second)
        report(Problem::Redeclared, "parameter " + p.name + " repeated");
    }
    for (const auto& r : results) wf(r);
    auto saved = results_;
    results_ = results;
    bool terminates = chain(body);
    close_frame();
    results_ = saved;
    if (!terminates && !results.empty()) report(Problem::MissingReturn, "missing return");
  }

  void close_frame() {
    for (const auto& [name, b] : frames_.back())
      if (!b.used && !b.param) report(Problem::UnusedVariable, "'" + name + "' declared and not used");
    frames_.pop_back();
  }

  void declare(const std::string& name, const Type& t) {
    if (name == kBlank) {
      extension("blank binding");
      return;
    }
    if (!valid_ident(name)) report(Problem::BadName, "invalid variable name '" + name + "'");
    if (is_nil(t)) report(Problem::TypeMismatch, "use of untyped nil in declaration of " + name);
    if (!frames_.back().emplace(name, Binding{t}).second)
      report(Problem::Redeclared, "'" + name + "' redeclared in this block");
  }

  bool any_new(const std::vector<std::string>& names) {
    for (const auto& n : names)
      if (n != kBlank && !frames_.back().count(n)) return true;
    return false;
  }

  // Returns whether the chain ends in a terminating statement.
  bool chain(const StmtP& s) {
    bool terminates = false;
    for (const Stmt* cur = s.get(); cur; cur = cur->rest.get()) {
      terminates = false;
      switch (cur->kind) {
        case Stmt::Kind::Return: {
          std::vector<Type> got;
          if (cur->exprs.size() == 1) {
            got = multi(cur->exprs[0]);
          } else {
            for (const auto& e : cur->exprs) got.push_back(single(e));
          }
          if (got.size() != results_.size()) {
            report(Problem::ArityMismatch, "wrong number of return values");
          } else {
            for (std::size_t i = 0; i < got.size(); ++i)
              if (!assignable(got[i], results_[i]))
                report(Problem::TypeMismatch, "returning " + render(got[i]) + " where " +
                                                  render(results_[i]) + " is expected");
          }
          terminates = true;
          break;
        }
        case Stmt::Kind::VarDecl: {
          if (cur->names.size() > 1) extension("multiple assignment");
          auto got = multi(cur->expr);
          if (got.size() != cur->names.size()) {
            report(Problem::MultiValueMisuse, "assignment of " + std::to_string(got.size()) +
                                                  " values to " + std::to_string(cur->names.size()) +
                                                  " names");
            got.resize(cur->names.size(), untyped_nil());
          }
          if (!any_new(cur->names)) report(Problem::NoNewVariables, "no new variables on left side of :=");
          for (std::size_t i = 0; i < cur->names.size(); ++i) declare(cur->names[i], got[i]);
          break;
        }
        case Stmt::Kind::If: {
          if (!assignable(single(cur->expr), boolean()))
            report(Problem::TypeMismatch, "non-boolean condition");
          frames_.emplace_back();
          chain(cur->inner);
          close_frame();
          break;
        }
        case Stmt::Kind::TypeAssert: {
          Type t = single(cur->expr);
          if (t.kind != Type::Kind::Interface)
            report(Problem::NotInterface, "type assertion on non-interface type " + render(t));
          wf(cur->type);
          if (!any_new(cur->names)) report(Problem::NoNewVariables, "no new variables on left side of :=");
          declare(cur->names[0], cur->type);
          declare(cur->names[1], boolean());
          break;
        }
        case Stmt::Kind::Block: {
          extension("nested block");
          frames_.emplace_back();
          terminates = chain(cur->inner);
          close_frame();
          break;
        }
        case Stmt::Kind::Panic:
          extension("panic");
          terminates = true;
          break;
      }
      if (terminates && cur->rest) terminates = false;
    }
    return terminates;
  }

  Type single(const ExprP& e) {
    auto ts = multi(e);
    if (ts.size() != 1) {
      report(Problem::MultiValueMisuse, std::to_string(ts.size()) + "-valued expression used as a value");
      return ts.empty() ? untyped_nil() : ts[0];
    }
    return ts[0];
  }

  std::vector<Type> call_results(const std::vector<Param>& params, const std::vector<Type>& results,
                                 const std::vector<ExprP>& args, const std::map<std::string, Type>& s,
                                 const std::string& what) {
    if (args.size() != params.size()) {
      report(Problem::ArityMismatch, what + " expects " + std::to_string(params.size()) + " arguments, got " +
                                         std::to_string(args.size()));
      for (const auto& a : args) single(a);
    } else {
      for (std::size_t i = 0; i < args.size(); ++i) {
        Type want = subst(params[i].type, s);
        Type got = single(args[i]);
        if (!assignable(got, want))
          report(Problem::TypeMismatch, what + " argument " + std::to_string(i + 1) + " has type " +
                                            render(got) + ", expected " + render(want));
      }
    }
    std::vector<Type> out;
    for (const auto& r : results) out.push_back(subst(r, s));
    return out;
  }

  std::vector<Type> multi(const ExprP& e) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        if (e->name == kBlank) {
          report(Problem::BlankRead, "cannot use _ as value");
          return {untyped_nil()};
        }
        for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
          auto b = it->find(e->name);
          if (b != it->end()) {
            b->second.used = true;
            return {b->second.type};
          }
        }
        report(Problem::UnknownName, "undefined variable " + e->name);
        return {untyped_nil()};
      }
      case Expr::Kind::Call: {
        for (const auto& t : e->typeArgs) wf(t);
        auto it = funcs_.find(e->name);
        if (it == funcs_.end()) {
          report(Problem::UnknownName, "undefined function " + e->name);
          for (const auto& a : e->args) single(a);
          return {untyped_nil()};
        }
        const FuncDecl& f = *it->second;
        std::map<std::string, Type> s;
        if (!e->typeArgs.empty()) {
          if (e->typeArgs.size() != f.typeParams.size()) {
            report(Problem::ArityMismatch, "wrong number of type arguments for " + f.name);
            return f.results;
          }
          for (std::size_t i = 0; i < f.typeParams.size(); ++i) s.emplace(f.typeParams[i], e->typeArgs[i]);
        } else if (!f.typeParams.empty()) {
          std::set<std::string> vars(f.typeParams.begin(), f.typeParams.end());
          bool ok = e->args.size() == f.params.size();
          std::vector<Type> argTypes;
          for (const auto& a : e->args) argTypes.push_back(single(a));
          for (std::size_t i = 0; ok && i < argTypes.size(); ++i) ok = unify(f.params[i].type, argTypes[i], vars, s);
          if (!ok || s.size() != vars.size()) {
            report(Problem::TypeMismatch, "cannot infer type arguments for " + f.name);
            return f.results;
          }
          std::vector<Type> out;
          for (const auto& r : f.results) out.push_back(subst(r, s));
          return out;
        }
        return call_results(f.params, f.results, e->args, s, f.name);
      }
      case Expr::Kind::StructLit: {
        for (const auto& t : e->typeArgs) wf(t);
        auto it = types_.find(e->name);
        if (it == types_.end() || it->second->isInterface) {
          report(Problem::NotStruct, "composite literal of non-struct type " + e->name);
          for (const auto& a : e->args) single(a);
          return {Type::strct(e->name, e->typeArgs)};
        }
        const TypeDecl& t = *it->second;
        if (t.typeParams.size() != e->typeArgs.size()) {
          report(Problem::ArityMismatch, "wrong number of type arguments for " + t.name);
          return {Type::strct(e->name, e->typeArgs)};
        }
        std::map<std::string, Type> s;
        for (std::size_t i = 0; i < t.typeParams.size(); ++i) s.emplace(t.typeParams[i], e->typeArgs[i]);
        call_results(t.fields, {}, e->args, s, "literal of " + t.name);
        return {Type::strct(e->name, e->typeArgs)};
      }
      case Expr::Kind::FuncLit: {
        function(e->params, e->results, e->body);
        std::vector<Type> ps;
        for (const auto& p : e->params) ps.push_back(p.type);
        return {Type::func(ps, e->results)};
      }
      case Expr::Kind::FieldSel: {
        Type t = single(e->target);
        if (t.kind != Type::Kind::Struct || !types_.count(t.name)) {
          report(Problem::NotStruct, "field selection on " + render(t));
          return {untyped_nil()};
        }
        const TypeDecl& d = *types_.at(t.name);
        for (const auto& f : d.fields) {
          if (f.name != e->name) continue;
          std::map<std::string, Type> s;
          for (std::size_t i = 0; i < d.typeParams.size() && i < t.args.size(); ++i)
            s.emplace(d.typeParams[i], t.args[i]);
          return {subst(f.type, s)};
        }
        report(Problem::UnknownName, render(t) + " has no field " + e->name);
        return {untyped_nil()};
      }
      case Expr::Kind::TypeConv: {
        wf(e->type);
        if (e->type.kind != Type::Kind::Interface)
          report(Problem::NotInterface, "conversion to non-interface type " + render(e->type));
        single(e->target);
        return {e->type};
      }
      case Expr::Kind::Nil:
        return {untyped_nil()};
      case Expr::Kind::ExprCall: {
        extension("call of a function value");
        Type t = single(e->target);
        if (t.kind != Type::Kind::Func) {
          report(Problem::TypeMismatch, "call of non-function " + render(t));
          for (const auto& a : e->args) single(a);
          return {untyped_nil()};
        }
        std::vector<Param> ps;
        for (const auto& a : t.args) ps.push_back({"", a});
        return call_results(ps, t.results, e->args, {}, "function value");
      }
      case Expr::Kind::Eq: {
        extension("==");
        Type l = single(e->args[0]);
        Type r = single(e->args[1]);
        if (!(assignable(l, r) || assignable(r, l)))
          report(Problem::TypeMismatch, "comparison of " + render(l) + " and " + render(r));
        else if (l.kind == Type::Kind::Func && !is_nil(r) && !is_nil(l))
          report(Problem::TypeMismatch, "functions can only be compared to nil");
        return {boolean()};
      }
      case Expr::Kind::And: {
        extension("&&");
        for (const auto& a : e->args)
          if (!assignable(single(a), boolean())) report(Problem::TypeMismatch, "non-boolean operand of &&");
        return {boolean()};
      }
      case Expr::Kind::Native: {
        extension("native snippet");
        std::vector<Param> ps;
        for (const auto& t : e->typeArgs) ps.push_back({"", t});
        call_results(ps, {}, e->args, {}, "native " + e->name);
        return {e->type};
      }
      case Expr::Kind::Lit:
        extension("literal");
        return {e->type};
    }
    return {untyped_nil()};
  }

  const Program& prog_;
  bool strict_;
  std::map<std::string, const TypeDecl*> types_;
  std::map<std::string, const FuncDecl*> funcs_;
  std::string decl_;
  std::set<std::string> tparams_;
  std::vector<std::map<std::string, Binding>> frames_;
  std::vector<Type> results_;
  std::vector<Diagnostic> out_;
};

}  // namespace

std::vector<Diagnostic> check_wf(const Program& p, Strictness s) { return Checker(p, s).run(); }

}  // namespace fgo::go
