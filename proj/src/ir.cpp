#include "fgo/ir.hpp"

#include <algorithm>
#include <sstream>

namespace fgo::ir {

// ---------------------------------------------------------------------------
// TypeExpr

struct TypeExpr::Node {
  Kind kind;
  std::string name;
  std::vector<TypeExpr> args;
};

TypeExpr::TypeExpr() : TypeExpr(con("")) {}

TypeExpr::TypeExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

TypeExpr TypeExpr::var(std::string name) {
  return TypeExpr(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}}));
}

TypeExpr TypeExpr::con(std::string name, std::vector<TypeExpr> args) {
  return TypeExpr(
      std::make_shared<const Node>(Node{Kind::Con, std::move(name), std::move(args)}));
}

TypeExpr TypeExpr::fun(TypeExpr arg, TypeExpr result) {
  return TypeExpr(std::make_shared<const Node>(
      Node{Kind::Fun, "", {std::move(arg), std::move(result)}}));
}

TypeExpr TypeExpr::arrows(const std::vector<TypeExpr>& args, TypeExpr result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = fun(*it, result);
  return result;
}

TypeExpr::Kind TypeExpr::kind() const { return node_->kind; }
const std::string& TypeExpr::name() const { return node_->name; }
const std::vector<TypeExpr>& TypeExpr::args() const { return node_->args; }
const TypeExpr& TypeExpr::arg() const { return node_->args.at(0); }
const TypeExpr& TypeExpr::result() const { return node_->args.at(1); }

bool operator==(const TypeExpr& a, const TypeExpr& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args();
}

bool operator<(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind() != b.kind()) return a.kind() < b.kind();
  if (a.name() != b.name()) return a.name() < b.name();
  return std::lexicographical_compare(a.args().begin(), a.args().end(),
                                      b.args().begin(), b.args().end());
}

TypeExpr substitute(const TypeExpr& t, const TypeSubst& s) {
  switch (t.kind()) {
    case TypeExpr::Kind::Var: {
      auto it = s.find(t.name());
      return it == s.end() ? t : it->second;
    }
    case TypeExpr::Kind::Con: {
      if (t.args().empty()) return t;
      std::vector<TypeExpr> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, s));
      return TypeExpr::con(t.name(), std::move(args));
    }
    case TypeExpr::Kind::Fun:
      return TypeExpr::fun(substitute(t.arg(), s), substitute(t.result(), s));
  }
  return t;
}

std::pair<std::vector<TypeExpr>, TypeExpr> split_arrows(const TypeExpr& t,
                                                        std::size_t limit) {
  std::vector<TypeExpr> args;
  TypeExpr cur = t;
  while (cur.is_fun() && args.size() < limit) {
    args.push_back(cur.arg());
    cur = cur.result();
  }
  return {std::move(args), cur};
}

std::size_t arrow_count(const TypeExpr& t) { return split_arrows(t).first.size(); }

void free_type_vars(const TypeExpr& t, std::vector<std::string>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) free_type_vars(a, out);
}

bool is_ground(const TypeExpr& t) {
  if (t.is_var()) return false;
  return std::all_of(t.args().begin(), t.args().end(), is_ground);
}

namespace {

void print_type(std::ostream& os, const TypeExpr& t, int prec) {
  switch (t.kind()) {
    case TypeExpr::Kind::Var:
      os << '\'' << t.name();
      return;
    case TypeExpr::Kind::Con:
      if (t.args().size() == 1) {
        print_type(os, t.args()[0], 2);
        os << ' ';
      } else if (t.args().size() > 1) {
        os << '(';
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) os << ", ";
          print_type(os, t.args()[i], 0);
        }
        os << ") ";
      }
      os << t.name();
      return;
    case TypeExpr::Kind::Fun:
      if (prec > 0) os << '(';
      print_type(os, t.arg(), 1);
      os << " => ";
      print_type(os, t.result(), 0);
      if (prec > 0) os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const TypeExpr& t) {
  std::ostringstream os;
  print_type(os, t, 0);
  return os.str();
}

// ---------------------------------------------------------------------------
// Pattern

struct Pattern::Node {
  Kind kind;
  std::string name;
  std::vector<TypeExpr> typeArgs;
  std::vector<Pattern> subs;
};

Pattern::Pattern() : Pattern(var(std::string(kWildcard))) {}
Pattern::Pattern(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Pattern Pattern::var(std::string name) {
  return Pattern(std::make_shared<const Node>(Node{Kind::Var, std::move(name), {}, {}}));
}

Pattern Pattern::con(std::string ctor, std::vector<TypeExpr> typeArgs,
                     std::vector<Pattern> subpatterns) {
  return Pattern(std::make_shared<const Node>(
      Node{Kind::Con, std::move(ctor), std::move(typeArgs), std::move(subpatterns)}));
}

Pattern::Kind Pattern::kind() const { return node_->kind; }
const std::string& Pattern::name() const { return node_->name; }
const std::vector<TypeExpr>& Pattern::type_args() const { return node_->typeArgs; }
const std::vector<Pattern>& Pattern::subpatterns() const { return node_->subs; }

bool operator==(const Pattern& a, const Pattern& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() &&
         a.type_args() == b.type_args() && a.subpatterns() == b.subpatterns();
}

namespace {
void collect_vars(const Pattern& p, std::vector<std::string>& out) {
  if (p.is_var()) {
    if (p.name() != kWildcard) out.push_back(p.name());
    return;
  }
  for (const auto& s : p.subpatterns()) collect_vars(s, out);
}
}  // namespace

std::vector<std::string> pattern_vars(const Pattern& p) {
  std::vector<std::string> out;
  collect_vars(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<TypeExpr> typeArgs;
  TypeExpr type;
  std::vector<Term> sub;
  std::vector<Clause> clauses;
  Literal literal;
  std::size_t index = 0;
  int methodArity = -1;
};

Term::Term() : Term(var("")) {}
Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::ref(std::string name, std::vector<TypeExpr> typeArgs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ref;
  n->name = std::move(name);
  n->typeArgs = std::move(typeArgs);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->sub = {std::move(fun), std::move(arg)};
  return Term(std::move(n));
}

Term Term::apps(Term fun, std::vector<Term> args) {
  for (auto& a : args) fun = app(std::move(fun), std::move(a));
  return fun;
}

Term Term::abs(std::string binder, TypeExpr binderType, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->name = std::move(binder);
  n->type = std::move(binderType);
  n->sub = {std::move(body)};
  return Term(std::move(n));
}

Term Term::case_of(Term scrutinee, TypeExpr scrutineeType, std::vector<Clause> clauses) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Case;
  n->type = std::move(scrutineeType);
  n->sub = {std::move(scrutinee)};
  n->clauses = std::move(clauses);
  return Term(std::move(n));
}

Term Term::lit(Literal literal) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Lit;
  n->literal = std::move(literal);
  return Term(std::move(n));
}

Term Term::field(Term target, std::string dataName, std::size_t index, int methodArity) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Field;
  n->name = std::move(dataName);
  n->sub = {std::move(target)};
  n->index = index;
  n->methodArity = methodArity;
  return Term(std::move(n));
}

Term Term::method_value(Term body, std::size_t arity) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::MethodValue;
  n->sub = {std::move(body)};
  n->index = arity;
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<TypeExpr>& Term::type_args() const { return node_->typeArgs; }
const TypeExpr& Term::type() const { return node_->type; }
const Term& Term::fun() const { return node_->sub.at(0); }
const Term& Term::arg() const { return node_->sub.at(1); }
const Term& Term::body() const { return node_->sub.at(0); }
const Term& Term::scrutinee() const { return node_->sub.at(0); }
const Term& Term::target() const { return node_->sub.at(0); }
const std::vector<Clause>& Term::clauses() const { return node_->clauses; }
const Literal& Term::literal() const { return node_->literal; }
std::size_t Term::index() const { return node_->index; }
int Term::method_arity() const { return node_->methodArity; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.typeArgs == y.typeArgs &&
         x.type == y.type && x.sub == y.sub && x.clauses == y.clauses &&
         x.literal == y.literal && x.index == y.index && x.methodArity == y.methodArity;
}

std::pair<Term, std::vector<Term>> unspine(const Term& t) {
  std::vector<Term> args;
  Term cur = t;
  while (cur.kind() == Term::Kind::App) {
    args.push_back(cur.arg());
    cur = cur.fun();
  }
  std::reverse(args.begin(), args.end());
  return {cur, std::move(args)};
}

bool occurs_free(const std::string& var, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == var;
    case Term::Kind::Ref:
    case Term::Kind::Lit:
      return false;
    case Term::Kind::App:
      return occurs_free(var, t.fun()) || occurs_free(var, t.arg());
    case Term::Kind::Abs:
      return t.name() != var && occurs_free(var, t.body());
    case Term::Kind::Case: {
      if (occurs_free(var, t.scrutinee())) return true;
      for (const auto& c : t.clauses()) {
        auto bound = pattern_vars(c.pattern);
        if (std::find(bound.begin(), bound.end(), var) != bound.end()) continue;
        if (occurs_free(var, c.body)) return true;
      }
      return false;
    }
    case Term::Kind::Field:
      return occurs_free(var, t.target());
    case Term::Kind::MethodValue:
      return occurs_free(var, t.body());
  }
  return false;
}

Pattern map_types(const Pattern& p, const TypeMap& f) {
  if (p.is_var()) return p;
  std::vector<TypeExpr> args;
  for (const auto& a : p.type_args()) args.push_back(f(a));
  std::vector<Pattern> subs;
  for (const auto& s : p.subpatterns()) subs.push_back(map_types(s, f));
  return Pattern::con(p.name(), std::move(args), std::move(subs));
}

Term map_types(const Term& t, const TypeMap& f) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Ref: {
      std::vector<TypeExpr> args;
      for (const auto& a : t.type_args()) args.push_back(f(a));
      return Term::ref(t.name(), std::move(args));
    }
    case Term::Kind::App:
      return Term::app(map_types(t.fun(), f), map_types(t.arg(), f));
    case Term::Kind::Abs:
      return Term::abs(t.name(), f(t.type()), map_types(t.body(), f));
    case Term::Kind::Case: {
      std::vector<Clause> clauses;
      for (const auto& c : t.clauses())
        clauses.push_back({map_types(c.pattern, f), map_types(c.body, f)});
      return Term::case_of(map_types(t.scrutinee(), f), f(t.type()), std::move(clauses));
    }
    case Term::Kind::Lit:
      return Term::lit({t.literal().value, f(t.literal().type)});
    case Term::Kind::Field:
      return Term::field(map_types(t.target(), f), t.name(), t.index(), t.method_arity());
    case Term::Kind::MethodValue:
      return Term::method_value(map_types(t.body(), f), t.index());
  }
  return t;
}

std::string decl_name(const Declaration& d) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, InstanceDecl>)
          return x.className + "_" + x.tyCon;
        else
          return x.name;
      },
      d);
}

// ---------------------------------------------------------------------------
// Index

Index::Index(const Program& p) : program_(&p) {
  for (const auto& d : p.decls) {
    if (auto* data = std::get_if<DataDecl>(&d)) {
      data_.emplace(data->name, data);
      for (std::size_t i = 0; i < data->ctors.size(); ++i)
        ctors_.emplace(data->ctors[i].name, std::make_pair(data, i));
    } else if (auto* f = std::get_if<FunDecl>(&d)) {
      funs_.emplace(f->name, f);
    } else if (auto* c = std::get_if<ConstDecl>(&d)) {
      consts_.emplace(c->name, c);
    } else if (auto* cls = std::get_if<ClassDecl>(&d)) {
      classes_.emplace(cls->name, cls);
      for (std::size_t i = 0; i < cls->methods.size(); ++i)
        methods_.emplace(cls->methods[i].name, std::make_pair(cls, i));
    } else if (auto* inst = std::get_if<InstanceDecl>(&d)) {
      instances_.emplace(std::make_pair(inst->className, inst->tyCon), inst);
    }
  }
}

const DataDecl* Index::data(const std::string& name) const {
  auto it = data_.find(name);
  return it == data_.end() ? nullptr : it->second;
}

std::optional<std::pair<const DataDecl*, std::size_t>> Index::ctor(
    const std::string& name) const {
  auto it = ctors_.find(name);
  if (it == ctors_.end()) return std::nullopt;
  return it->second;
}

const FunDecl* Index::fun(const std::string& name) const {
  auto it = funs_.find(name);
  return it == funs_.end() ? nullptr : it->second;
}

const ConstDecl* Index::constant(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : it->second;
}

const ClassDecl* Index::class_decl(const std::string& name) const {
  auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : it->second;
}

std::optional<std::pair<const ClassDecl*, std::size_t>> Index::method(
    const std::string& name) const {
  auto it = methods_.find(name);
  if (it == methods_.end()) return std::nullopt;
  return it->second;
}

std::vector<const InstanceDecl*> Index::instances(const std::string& cls,
                                                  const std::string& tyCon) const {
  std::vector<const InstanceDecl*> out;
  auto [lo, hi] = instances_.equal_range({cls, tyCon});
  for (auto it = lo; it != hi; ++it) out.push_back(it->second);
  return out;
}

const prim::PrimOp* Index::prim(const std::string& name) const {
  return prim::find(name);
}

std::optional<Scheme> Index::scheme(const std::string& name) const {
  if (auto c = ctor(name)) {
    const auto& [d, i] = *c;
    std::vector<TypeExpr> params;
    for (const auto& p : d->tyParams) params.push_back(TypeExpr::var(p));
    return Scheme{Scheme::Kind::Ctor, d->tyParams,
                  TypeExpr::arrows(d->ctors[i].fields, TypeExpr::con(d->name, params))};
  }
  if (const auto* f = fun(name)) return Scheme{Scheme::Kind::Fun, f->tyParams, f->signature};
  if (const auto* c = constant(name))
    return Scheme{Scheme::Kind::Const, c->tyParams, c->signature};
  if (auto m = method(name)) {
    const auto& [cls, i] = *m;
    return Scheme{Scheme::Kind::Method, {cls->tyParam}, cls->methods[i].signature};
  }
  if (const auto* op = prim(name)) {
    std::vector<TypeExpr> args;
    for (const auto& a : op->argTypes) args.push_back(TypeExpr::con(a));
    return Scheme{Scheme::Kind::Prim, {}, TypeExpr::arrows(args, TypeExpr::con(op->resultType))};
  }
  return std::nullopt;
}

std::optional<std::size_t> Index::type_arity(const std::string& name) const {
  if (prim::is_base_type(name)) return 0;
  if (const auto* d = data(name)) return d->tyParams.size();
  return std::nullopt;
}

bool Index::is_subclass(const std::string& sub, const std::string& sup) const {
  if (sub == sup) return true;
  const auto* c = class_decl(sub);
  if (!c) return false;
  for (const auto& s : c->superclasses)
    if (is_subclass(s, sup)) return true;
  return false;
}

std::size_t arity(const Program& p, const std::string& name) {
  Index idx(p);
  if (const auto* f = idx.fun(name))
    return f->equations.empty() ? arrow_count(f->signature)
                                : f->equations.front().params.size();
  if (idx.constant(name)) return 0;
  if (auto c = idx.ctor(name)) return c->first->ctors[c->second].fields.size();
  throw UnknownName{name};
}

// ---------------------------------------------------------------------------
// Typing

namespace {

TypeExpr instantiate(const Scheme& s, const std::vector<TypeExpr>& args,
                     const std::string& name) {
  if (s.params.size() != args.size())
    throw TypeError{"reference to " + name + " has " + std::to_string(args.size()) +
                    " type arguments, expected " + std::to_string(s.params.size())};
  TypeSubst sub;
  for (std::size_t i = 0; i < args.size(); ++i) sub.emplace(s.params[i], args[i]);
  return substitute(s.type, sub);
}

}  // namespace

void bind_pattern(const Index& idx, const Pattern& p, const TypeExpr& scrutinee,
                  TypeEnv& env) {
  if (p.is_var()) {
    if (p.name() != kWildcard) env[p.name()] = scrutinee;
    return;
  }
  auto c = idx.ctor(p.name());
  if (!c) throw TypeError{"unknown constructor " + p.name()};
  const auto& [data, i] = *c;
  if (data->tyParams.size() != p.type_args().size())
    throw TypeError{"constructor pattern " + p.name() + " has wrong type argument count"};
  std::vector<TypeExpr> params;
  for (const auto& ta : p.type_args()) params.push_back(ta);
  TypeExpr owner = TypeExpr::con(data->name, params);
  if (!(owner == scrutinee))
    throw TypeError{"pattern " + p.name() + " of type " + to_string(owner) +
                    " used at type " + to_string(scrutinee)};
  const auto& fields = data->ctors[i].fields;
  if (fields.size() != p.subpatterns().size())
    throw TypeError{"constructor pattern " + p.name() + " has wrong arity"};
  TypeSubst sub;
  for (std::size_t k = 0; k < params.size(); ++k) sub.emplace(data->tyParams[k], params[k]);
  for (std::size_t k = 0; k < fields.size(); ++k)
    bind_pattern(idx, p.subpatterns()[k], substitute(fields[k], sub), env);
}

TypeExpr type_of(const Index& idx, const Term& t, const TypeEnv& env) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end()) throw TypeError{"unbound variable " + t.name()};
      return it->second;
    }
    case Term::Kind::Ref: {
      auto s = idx.scheme(t.name());
      if (!s) throw TypeError{"unknown name " + t.name()};
      return instantiate(*s, t.type_args(), t.name());
    }
    case Term::Kind::App: {
      TypeExpr f = type_of(idx, t.fun(), env);
      TypeExpr a = type_of(idx, t.arg(), env);
      if (!f.is_fun()) throw TypeError{"application of non-function of type " + to_string(f)};
      if (!(f.arg() == a))
        throw TypeError{"argument of type " + to_string(a) + " where " + to_string(f.arg()) +
                        " expected"};
      return f.result();
    }
    case Term::Kind::Abs: {
      TypeEnv inner = env;
      inner[t.name()] = t.type();
      return TypeExpr::fun(t.type(), type_of(idx, t.body(), inner));
    }
    case Term::Kind::Case: {
      TypeExpr s = type_of(idx, t.scrutinee(), env);
      if (!(s == t.type()))
        throw TypeError{"case scrutinee annotated " + to_string(t.type()) + " but has type " +
                        to_string(s)};
      if (t.clauses().empty()) throw TypeError{"case without clauses"};
      std::optional<TypeExpr> result;
      for (const auto& c : t.clauses()) {
        TypeEnv inner = env;
        bind_pattern(idx, c.pattern, s, inner);
        TypeExpr r = type_of(idx, c.body, inner);
        if (result && !(*result == r))
          throw TypeError{"case clauses disagree: " + to_string(*result) + " vs " +
                          to_string(r)};
        result = r;
      }
      return *result;
    }
    case Term::Kind::Lit:
      return t.literal().type;
    case Term::Kind::Field: {
      TypeExpr target = type_of(idx, t.target(), env);
      const auto* d = idx.data(t.name());
      if (!d || !target.is_con() || target.name() != d->name || d->ctors.size() != 1)
        throw TypeError{"field projection from non-record type " + to_string(target)};
      if (t.index() >= d->ctors[0].fields.size()) throw TypeError{"field index out of range"};
      TypeSubst sub;
      for (std::size_t k = 0; k < d->tyParams.size(); ++k)
        sub.emplace(d->tyParams[k], target.args()[k]);
      return substitute(d->ctors[0].fields[t.index()], sub);
    }
    case Term::Kind::MethodValue: {
      TypeExpr b = type_of(idx, t.body(), env);
      if (arrow_count(b) < t.index())
        throw TypeError{"method value arity exceeds its type"};
      return b;
    }
  }
  throw TypeError{"unhandled term"};
}

}  // namespace fgo::ir
