#include <map>
#include <stdexcept>

#include "big_stack.hpp"
#include "fgo/go_ast.hpp"

namespace fgo::go {

struct Env {
  std::string name;
  Value value;
  EnvP next;
};

namespace {

struct Abort {
  GFailure failure;
};

EnvP bind(EnvP env, const std::string& name, Value v) {
  if (name == kBlank) return env;
  return std::make_shared<const Env>(Env{name, std::move(v), std::move(env)});
}

Type resolve(const Type& t, const TypeEnv& types) {
  if (t.kind == Type::Kind::Param) {
    for (auto it = types.rbegin(); it != types.rend(); ++it)
      if (it->first == t.name) return it->second;
    return t;
  }
  Type out = t;
  for (auto& a : out.args) a = resolve(a, types);
  for (auto& r : out.results) r = resolve(r, types);
  return out;
}

Type dynamic_type(const Value& v) {
  if (const auto* s = std::get_if<GStruct>(&v->v)) return Type::strct(s->type, s->typeArgs);
  return Type::native("opaque");
}

const Value& nil_value() {
  static const Value v = make(GValue{GNil{}});
  return v;
}

void infer(const Type& pattern, const Value& v, TypeEnv& out) {
  const auto* s = std::get_if<GStruct>(&v->v);
  if (pattern.kind != Type::Kind::Struct || !s || s->type != pattern.name) return;
  for (std::size_t i = 0; i < pattern.args.size() && i < s->typeArgs.size(); ++i)
    if (pattern.args[i].kind == Type::Kind::Param) out.emplace_back(pattern.args[i].name, s->typeArgs[i]);
}

class Machine {
 public:
  Machine(const Program& p, const EvalOptions& opts) : fuel_(opts.fuel), maxDepth_(opts.maxDepth) {
    for (const auto& d : p.decls) {
      if (const auto* t = std::get_if<TypeDecl>(&d))
        types_.emplace(t->name, t);
      else
        funcs_.emplace(std::get<FuncDecl>(d).name, &std::get<FuncDecl>(d));
    }
  }

  Value invoke(const FuncDecl& f, TypeEnv types, const std::vector<Value>& args) {
    if (args.size() != f.params.size()) throw std::logic_error("arity mismatch calling " + f.name);
    EnvP env;
    for (std::size_t i = 0; i < args.size(); ++i) env = bind(env, f.params[i].name, args[i]);
    auto r = exec(f.body, env, types);
    if (!r) throw std::logic_error(f.name + " fell off its end");
    return *r;
  }

  const FuncDecl& func(const std::string& name) const {
    auto it = funcs_.find(name);
    if (it == funcs_.end()) throw std::logic_error("unknown function " + name);
    return *it->second;
  }

  Value eval(const ExprP& e, const EnvP& env, const TypeEnv& types) {
    tick();
    ++depth_;
    Value v = step(e, env, types);
    --depth_;
    return v;
  }

 private:
  void tick() {
    if (fuel_ == 0) throw Abort{{GFailure::Kind::OutOfFuel, "out of fuel"}};
    --fuel_;
    if (depth_ > maxDepth_) throw Abort{{GFailure::Kind::OutOfFuel, "evaluation too deep"}};
  }

  Value step(const ExprP& e, const EnvP& env, const TypeEnv& types) {
    switch (e->kind) {
      case Expr::Kind::Var:
        for (const Env* f = env.get(); f; f = f->next.get())
          if (f->name == e->name) return f->value;
        throw std::logic_error("unbound variable " + e->name);
      case Expr::Kind::Call: {
        const FuncDecl& f = func(e->name);
        std::vector<Value> args;
        for (const auto& a : e->args) args.push_back(eval(a, env, types));
        TypeEnv callee;
        if (!e->typeArgs.empty()) {
          for (std::size_t i = 0; i < f.typeParams.size(); ++i)
            callee.emplace_back(f.typeParams[i], resolve(e->typeArgs.at(i), types));
        } else {
          for (std::size_t i = 0; i < args.size(); ++i) infer(f.params[i].type, args[i], callee);
        }
        return invoke(f, std::move(callee), args);
      }
      case Expr::Kind::StructLit: {
        GStruct s{e->name, {}, {}};
        for (const auto& t : e->typeArgs) s.typeArgs.push_back(resolve(t, types));
        for (const auto& a : e->args) s.fields.push_back(eval(a, env, types));
        return make(GValue{std::move(s)});
      }
      case Expr::Kind::FuncLit: {
        GClosure c{{}, e->body, env, types};
        for (const auto& p : e->params) c.params.push_back(p.name);
        return make(GValue{std::move(c)});
      }
      case Expr::Kind::FieldSel: {
        Value t = eval(e->target, env, types);
        const auto* s = std::get_if<GStruct>(&t->v);
        if (!s) throw Abort{{GFailure::Kind::NilDereference, "field selection on nil"}};
        const TypeDecl& d = *types_.at(s->type);
        for (std::size_t i = 0; i < d.fields.size(); ++i)
          if (d.fields[i].name == e->name) return s->fields.at(i);
        throw std::logic_error("no field " + e->name);
      }
      case Expr::Kind::TypeConv: {
        Value v = eval(e->target, env, types);
        if (std::holds_alternative<GIface>(v->v) || std::holds_alternative<GNil>(v->v)) return v;
        return make(GValue{GIface{dynamic_type(v), v}});
      }
      case Expr::Kind::Nil:
        return nil_value();
      case Expr::Kind::ExprCall: {
        Value f = eval(e->target, env, types);
        std::vector<Value> args;
        for (const auto& a : e->args) args.push_back(eval(a, env, types));
        const auto* c = std::get_if<GClosure>(&f->v);
        if (!c) throw Abort{{GFailure::Kind::NilDereference, "call of nil function"}};
        EnvP inner = c->env;
        for (std::size_t i = 0; i < args.size(); ++i) inner = bind(inner, c->params.at(i), args[i]);
        auto r = exec(c->body, inner, c->types);
        if (!r) throw std::logic_error("function literal fell off its end");
        return *r;
      }
      case Expr::Kind::Eq: {
        Value l = eval(e->args[0], env, types);
        Value r = eval(e->args[1], env, types);
        auto b = equal(l, r);
        if (!b) throw Abort{{GFailure::Kind::Panic, "runtime error: comparing uncomparable type"}};
        return make(GValue{prim::Scalar{*b}});
      }
      case Expr::Kind::And: {
        Value l = eval(e->args[0], env, types);
        if (!std::get<bool>(std::get<prim::Scalar>(l->v))) return l;
        return eval(e->args[1], env, types);
      }
      case Expr::Kind::Native: {
        std::vector<prim::Scalar> xs;
        for (const auto& a : e->args) {
          Value v = eval(a, env, types);
          const auto* s = std::get_if<prim::Scalar>(&v->v);
          if (!s) throw Abort{{GFailure::Kind::NilDereference, "native operand is not a base value"}};
          xs.push_back(*s);
        }
        const auto* op = prim::find(e->name);
        if (!op) throw std::logic_error("unknown primitive " + e->name);
        return make(GValue{op->apply(xs)});
      }
      case Expr::Kind::Lit:
        return make(GValue{e->literal});
    }
    throw std::logic_error("unhandled expression");
  }

  std::optional<Value> exec(const StmtP& s, EnvP env, const TypeEnv& types) {
    for (const Stmt* cur = s.get(); cur; cur = cur->rest.get()) {
      tick();
      switch (cur->kind) {
        case Stmt::Kind::Return: {
          std::vector<Value> vs;
          for (const auto& e : cur->exprs) vs.push_back(eval(e, env, types));
          if (vs.size() == 1) return vs[0];
          return make(GValue{GMulti{std::move(vs)}});
        }
        case Stmt::Kind::VarDecl: {
          Value v = eval(cur->expr, env, types);
          if (cur->names.size() == 1) {
            env = bind(env, cur->names[0], v);
          } else {
            const auto& m = std::get<GMulti>(v->v);
            for (std::size_t i = 0; i < cur->names.size(); ++i) env = bind(env, cur->names[i], m.values.at(i));
          }
          break;
        }
        case Stmt::Kind::If: {
          Value c = eval(cur->expr, env, types);
          if (std::get<bool>(std::get<prim::Scalar>(c->v))) {
            ++depth_;
            auto r = exec(cur->inner, env, types);
            --depth_;
            if (r) return r;
          }
          break;
        }
        case Stmt::Kind::TypeAssert: {
          Value v = eval(cur->expr, env, types);
          Type want = resolve(cur->type, types);
          const auto* i = std::get_if<GIface>(&v->v);
          bool ok = i && i->dynamic == want;
          env = bind(env, cur->names[0], ok ? i->inner : nil_value());
          env = bind(env, cur->names[1], make(GValue{prim::Scalar{ok}}));
          break;
        }
        case Stmt::Kind::Block: {
          ++depth_;
          auto r = exec(cur->inner, env, types);
          --depth_;
          if (r) return r;
          break;
        }
        case Stmt::Kind::Panic:
          throw Abort{{GFailure::Kind::Panic, cur->message}};
      }
    }
    return std::nullopt;
  }

  std::map<std::string, const TypeDecl*> types_;
  std::map<std::string, const FuncDecl*> funcs_;
  std::uint64_t fuel_;
  std::size_t maxDepth_;
  std::size_t depth_ = 0;
};

GResult guarded(const std::function<Value()>& f) {
  GResult out;
  detail::run_with_big_stack([&] {
    try {
      out = f();
    } catch (const Abort& a) {
      out = a.failure;
    }
  });
  return out;
}

}  // namespace

std::optional<bool> equal(const Value& a, const Value& b) {
  bool an = std::holds_alternative<GNil>(a->v), bn = std::holds_alternative<GNil>(b->v);
  if (an || bn) return an && bn;
  if (const auto* x = std::get_if<GIface>(&a->v)) {
    const auto* y = std::get_if<GIface>(&b->v);
    if (!y) return false;
    if (!(x->dynamic == y->dynamic)) return false;
    return equal(x->inner, y->inner);
  }
  if (const auto* x = std::get_if<GStruct>(&a->v)) {
    const auto* y = std::get_if<GStruct>(&b->v);
    if (!y || x->type != y->type || !(x->typeArgs == y->typeArgs) || x->fields.size() != y->fields.size())
      return false;
    bool all = true;
    for (std::size_t i = 0; i < x->fields.size(); ++i) {
      auto e = equal(x->fields[i], y->fields[i]);
      if (!e) return std::nullopt;
      all = all && *e;
    }
    return all;
  }
  if (const auto* x = std::get_if<prim::Scalar>(&a->v)) {
    const auto* y = std::get_if<prim::Scalar>(&b->v);
    if (!y) return false;
    return *x == *y;
  }
  return std::nullopt;
}

GResult geval(const Program& p, const std::string& entry, const std::vector<Type>& typeArgs,
              const std::vector<Value>& args, const EvalOptions& opts) {
  Machine m(p, opts);
  const FuncDecl& f = m.func(entry);
  TypeEnv types;
  for (std::size_t i = 0; i < typeArgs.size() && i < f.typeParams.size(); ++i)
    types.emplace_back(f.typeParams[i], typeArgs[i]);
  return guarded([&] { return m.invoke(f, types, args); });
}

GResult geval_expr(const Program& p, const ExprP& e, const EvalOptions& opts) {
  Machine m(p, opts);
  return guarded([&] { return m.eval(e, nullptr, {}); });
}

}  // namespace fgo::go
