#include "fgo/oracle.hpp"

#include <stdexcept>

#include "big_stack.hpp"

namespace fgo::oracle {

using ir::Term;

Value con(std::string ctor, std::vector<Value> args) {
  return std::make_shared<const OValue>(OValue{OCon{std::move(ctor), std::move(args)}});
}

Value scalar(prim::Scalar s) { return std::make_shared<const OValue>(OValue{std::move(s)}); }

namespace {

struct Abort {
  Failure failure;
};

Scope bind(Scope env, const std::string& name, Value v) {
  if (name == ir::kWildcard) return env;
  return std::make_shared<const Frame>(Frame{name, std::move(v), std::move(env)});
}

bool match_into(const ir::Pattern& pat, const Value& v, Scope& env) {
  if (pat.is_var()) {
    env = bind(std::move(env), pat.name(), v);
    return true;
  }
  const auto* c = std::get_if<OCon>(&v->v);
  if (!c || c->ctor != pat.name() || c->args.size() != pat.subpatterns().size()) return false;
  for (std::size_t i = 0; i < c->args.size(); ++i)
    if (!match_into(pat.subpatterns()[i], c->args[i], env)) return false;
  return true;
}

class Machine {
 public:
  Machine(const ir::Program& p, const Options& opts)
      : idx_(p), fuel_(opts.fuel), maxDepth_(opts.maxDepth) {}

  Value eval(const Term& t, const Scope& env) {
    if (fuel_ == 0) throw Abort{{Failure::Kind::OutOfFuel, "out of fuel"}};
    --fuel_;
    if (++depth_ > maxDepth_) throw Abort{{Failure::Kind::OutOfFuel, "evaluation too deep"}};
    Value v = step(t, env);
    --depth_;
    return v;
  }

 private:
  Value step(const Term& t, const Scope& env) {
    switch (t.kind()) {
      case Term::Kind::Var:
        for (const Frame* f = env.get(); f; f = f->next.get())
          if (f->name == t.name()) return f->value;
        throw std::logic_error("unbound variable " + t.name());
      case Term::Kind::Ref:
        return reference(t.name());
      case Term::Kind::App: {
        Value f = eval(t.fun(), env);
        Value a = eval(t.arg(), env);
        return apply(f, a);
      }
      case Term::Kind::Abs:
        return std::make_shared<const OValue>(OValue{OClosure{t.name(), t.body(), env}});
      case Term::Kind::Case: {
        Value s = eval(t.scrutinee(), env);
        for (const auto& c : t.clauses()) {
          Scope inner = env;
          if (match_into(c.pattern, s, inner)) return eval(c.body, inner);
        }
        throw Abort{{Failure::Kind::MatchFailed, "match failed"}};
      }
      case Term::Kind::Lit:
        return scalar(t.literal().value);
      case Term::Kind::Field: {
        Value d = eval(t.target(), env);
        const auto& c = std::get<OCon>(d->v);
        Value f = c.args.at(t.index());
        if (t.method_arity() == 0) {
          const auto& th = std::get<OThunk>(f->v);
          return eval(th.body, th.env);
        }
        return f;
      }
      case Term::Kind::MethodValue:
        if (t.index() == 0)
          return std::make_shared<const OValue>(OValue{OThunk{t.body(), env}});
        return eval(t.body(), env);
    }
    throw std::logic_error("unhandled term");
  }

  Value reference(const std::string& name) {
    if (const auto* f = idx_.fun(name)) {
      std::size_t m = f->equations.front().params.size();
      if (m == 0) return call(*f, {});
      return partial(name, m);
    }
    if (const auto* c = idx_.constant(name)) return eval(c->rhs, nullptr);
    if (auto c = idx_.ctor(name)) {
      std::size_t m = c->first->ctors[c->second].fields.size();
      if (m == 0) return con(name);
      return partial(name, m);
    }
    if (const auto* op = idx_.prim(name)) {
      if (op->argTypes.empty()) return scalar(op->apply({}));
      return partial(name, op->argTypes.size());
    }
    throw std::logic_error("unknown reference " + name);
  }

  static Value partial(const std::string& name, std::size_t arity) {
    return std::make_shared<const OValue>(OValue{OPartial{name, {}, arity}});
  }

  Value apply(const Value& f, const Value& a) {
    if (const auto* c = std::get_if<OClosure>(&f->v)) return eval(c->body, bind(c->env, c->binder, a));
    const auto* p = std::get_if<OPartial>(&f->v);
    if (!p) throw std::logic_error("application of a non-function");
    std::vector<Value> args = p->args;
    args.push_back(a);
    if (args.size() < p->arity)
      return std::make_shared<const OValue>(OValue{OPartial{p->name, std::move(args), p->arity}});
    return saturate(p->name, args);
  }

  Value saturate(const std::string& name, const std::vector<Value>& args) {
    if (const auto* f = idx_.fun(name)) return call(*f, args);
    if (idx_.ctor(name)) return con(name, args);
    const auto* op = idx_.prim(name);
    std::vector<prim::Scalar> xs;
    for (const auto& a : args) xs.push_back(std::get<prim::Scalar>(a->v));
    return scalar(op->apply(xs));
  }

  Value call(const ir::FunDecl& f, const std::vector<Value>& args) {
    for (const auto& eq : f.equations) {
      Scope env;
      bool ok = true;
      for (std::size_t i = 0; ok && i < args.size(); ++i) ok = match_into(eq.params[i], args[i], env);
      if (ok) return eval(eq.rhs, env);
    }
    throw Abort{{Failure::Kind::MatchFailed, "match failed"}};
  }

  ir::Index idx_;
  std::uint64_t fuel_;
  std::size_t maxDepth_;
  std::size_t depth_ = 0;
};

}  // namespace

Result eval(const ir::Program& p, const ir::Term& t, const Environment& env, const Options& opts) {
  Scope scope;
  for (const auto& [k, v] : env) scope = bind(scope, k, v);
  Machine m(p, opts);
  Result out;
  detail::run_with_big_stack([&] {
    try {
      out = m.eval(t, scope);
    } catch (const Abort& a) {
      out = a.failure;
    }
  });
  return out;
}

std::optional<Environment> match(const ir::Pattern& pat, const Value& v) {
  Scope env;
  if (!match_into(pat, v, env)) return std::nullopt;
  Environment out;
  for (const Frame* f = env.get(); f; f = f->next.get()) out.emplace(f->name, f->value);
  return out;
}

std::string render(const Value& v) {
  if (const auto* c = std::get_if<OCon>(&v->v)) {
    if (c->args.empty()) return c->ctor;
    std::string s = c->ctor + "(";
    for (std::size_t i = 0; i < c->args.size(); ++i) s += (i ? ", " : "") + render(c->args[i]);
    return s + ")";
  }
  if (const auto* s = std::get_if<prim::Scalar>(&v->v)) return prim::render(*s);
  return "<fun>";
}

std::string render(const Result& r) {
  if (const auto* v = std::get_if<Value>(&r)) return render(*v);
  return std::get<Failure>(r).message;
}

bool is_failure(const Result& r, Failure::Kind k) {
  const auto* f = std::get_if<Failure>(&r);
  return f && f->kind == k;
}

}  // namespace fgo::oracle
