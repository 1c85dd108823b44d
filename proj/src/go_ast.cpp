#include <sstream>

#include "fgo/go_ast.hpp"

namespace fgo::go {

Type Type::param(std::string name) { return Type{Kind::Param, std::move(name), {}, {}}; }
Type Type::strct(std::string name, std::vector<Type> args) {
  return Type{Kind::Struct, std::move(name), std::move(args), {}};
}
Type Type::iface(std::string name, std::vector<Type> args) {
  return Type{Kind::Interface, std::move(name), std::move(args), {}};
}
Type Type::func(std::vector<Type> params, std::vector<Type> results) {
  return Type{Kind::Func, "", std::move(params), std::move(results)};
}
Type Type::native(std::string spelling) { return Type{Kind::Native, std::move(spelling), {}, {}}; }

namespace {

ExprP mk(Expr e) { return std::make_shared<const Expr>(std::move(e)); }
StmtP mk(Stmt s) { return std::make_shared<const Stmt>(std::move(s)); }

}  // namespace

ExprP var(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Var;
  e.name = std::move(name);
  return mk(std::move(e));
}

ExprP call(std::string fn, std::vector<Type> typeArgs, std::vector<ExprP> args) {
  Expr e;
  e.kind = Expr::Kind::Call;
  e.name = std::move(fn);
  e.typeArgs = std::move(typeArgs);
  e.args = std::move(args);
  return mk(std::move(e));
}

ExprP struct_lit(std::string type, std::vector<Type> typeArgs, std::vector<ExprP> fields) {
  Expr e;
  e.kind = Expr::Kind::StructLit;
  e.name = std::move(type);
  e.typeArgs = std::move(typeArgs);
  e.args = std::move(fields);
  return mk(std::move(e));
}

ExprP func_lit(std::vector<Param> params, std::vector<Type> results, StmtP body) {
  Expr e;
  e.kind = Expr::Kind::FuncLit;
  e.params = std::move(params);
  e.results = std::move(results);
  e.body = std::move(body);
  return mk(std::move(e));
}

ExprP field_sel(ExprP target, std::string field) {
  Expr e;
  e.kind = Expr::Kind::FieldSel;
  e.target = std::move(target);
  e.name = std::move(field);
  return mk(std::move(e));
}

ExprP type_conv(Type to, ExprP inner) {
  Expr e;
  e.kind = Expr::Kind::TypeConv;
  e.type = std::move(to);
  e.target = std::move(inner);
  return mk(std::move(e));
}

ExprP nil() { return mk(Expr{}); }

ExprP expr_call(ExprP target, std::vector<ExprP> args) {
  Expr e;
  e.kind = Expr::Kind::ExprCall;
  e.target = std::move(target);
  e.args = std::move(args);
  return mk(std::move(e));
}

ExprP eq(ExprP lhs, ExprP rhs) {
  Expr e;
  e.kind = Expr::Kind::Eq;
  e.args = {std::move(lhs), std::move(rhs)};
  return mk(std::move(e));
}

ExprP conj(ExprP lhs, ExprP rhs) {
  Expr e;
  e.kind = Expr::Kind::And;
  e.args = {std::move(lhs), std::move(rhs)};
  return mk(std::move(e));
}

ExprP native(std::string prim, std::string text, std::vector<Type> argTypes, Type result,
             std::vector<ExprP> args) {
  Expr e;
  e.kind = Expr::Kind::Native;
  e.name = std::move(prim);
  e.text = std::move(text);
  e.typeArgs = std::move(argTypes);
  e.type = std::move(result);
  e.args = std::move(args);
  return mk(std::move(e));
}

ExprP lit(prim::Scalar value, Type type) {
  Expr e;
  e.kind = Expr::Kind::Lit;
  e.literal = std::move(value);
  e.type = std::move(type);
  return mk(std::move(e));
}

StmtP ret(std::vector<ExprP> exprs) {
  Stmt s;
  s.kind = Stmt::Kind::Return;
  s.exprs = std::move(exprs);
  return mk(std::move(s));
}

StmtP var_decl(std::vector<std::string> names, ExprP rhs, StmtP rest) {
  Stmt s;
  s.kind = Stmt::Kind::VarDecl;
  s.names = std::move(names);
  s.expr = std::move(rhs);
  s.rest = std::move(rest);
  return mk(std::move(s));
}

StmtP if_(ExprP cond, StmtP then, StmtP rest) {
  Stmt s;
  s.kind = Stmt::Kind::If;
  s.expr = std::move(cond);
  s.inner = std::move(then);
  s.rest = std::move(rest);
  return mk(std::move(s));
}

StmtP type_assert(std::string value, std::string ok, ExprP target, Type asserted, StmtP rest) {
  Stmt s;
  s.kind = Stmt::Kind::TypeAssert;
  s.names = {std::move(value), std::move(ok)};
  s.expr = std::move(target);
  s.type = std::move(asserted);
  s.rest = std::move(rest);
  return mk(std::move(s));
}

StmtP block(StmtP inner, StmtP rest) {
  Stmt s;
  s.kind = Stmt::Kind::Block;
  s.inner = std::move(inner);
  s.rest = std::move(rest);
  return mk(std::move(s));
}

StmtP panic(std::string message) {
  Stmt s;
  s.kind = Stmt::Kind::Panic;
  s.message = std::move(message);
  return mk(std::move(s));
}

Value make(GValue v) { return std::make_shared<const GValue>(std::move(v)); }

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

std::string type_list(const std::vector<Type>& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back(render(t));
  return join(out);
}

std::string type_args(const std::vector<Type>& ts) {
  return ts.empty() ? "" : "[" + type_list(ts) + "]";
}

std::string type_params(const std::vector<std::string>& ps) {
  return ps.empty() ? "" : "[" + join(ps) + " any]";
}

std::string results(const std::vector<Type>& rs, bool forceParens) {
  if (rs.empty()) return "";
  if (rs.size() == 1 && !forceParens) return " " + render(rs[0]);
  return " (" + type_list(rs) + ")";
}

class Printer {
 public:
  explicit Printer(const RenderOptions& opts) : opts_(opts) {}

  std::string expr(const ExprP& e, int indent) const {
    switch (e->kind) {
      case Expr::Kind::Var:
        return e->name;
      case Expr::Kind::Call:
        return e->name + type_args(e->typeArgs) + "(" + exprs(e->args, indent) + ")";
      case Expr::Kind::StructLit:
        return e->name + type_args(e->typeArgs) + "{" + exprs(e->args, indent) + "}";
      case Expr::Kind::FuncLit: {
        std::vector<std::string> ps;
        for (const auto& p : e->params) ps.push_back(p.name + " " + render(p.type));
        std::ostringstream os;
        os << "func (" << join(ps) << ")" << results(e->results, false) << " {\n";
        stmts(os, e->body, indent + 1);
        os << tabs(indent) << "}";
        return os.str();
      }
      case Expr::Kind::FieldSel:
        return expr(e->target, indent) + "." + e->name;
      case Expr::Kind::TypeConv:
        return "(" + render(e->type) + "(" + expr(e->target, indent) + "))";
      case Expr::Kind::Nil:
        return "nil";
      case Expr::Kind::ExprCall:
        return expr(e->target, indent) + "(" + exprs(e->args, indent) + ")";
      case Expr::Kind::Eq:
        return operand(e->args[0], indent) + " == " + operand(e->args[1], indent);
      case Expr::Kind::And:
        return operand(e->args[0], indent) + " && " + operand(e->args[1], indent);
      case Expr::Kind::Native: {
        std::string out;
        const std::string& t = e->text;
        for (std::size_t i = 0; i < t.size(); ++i) {
          if (t[i] == '%' && i + 1 < t.size() && t[i + 1] >= '1' && t[i + 1] <= '9') {
            std::size_t k = static_cast<std::size_t>(t[i + 1] - '1');
            out += operand(e->args.at(k), indent);
            ++i;
          } else {
            out += t[i];
          }
        }
        return out;
      }
      case Expr::Kind::Lit:
        return literal(*e);
    }
    return "?";
  }

  void stmts(std::ostream& os, const StmtP& s, int indent) const {
    for (const Stmt* cur = s.get(); cur; cur = cur->rest.get()) {
      switch (cur->kind) {
        case Stmt::Kind::Return: {
          std::string vals = exprs(cur->exprs, indent);
          os << tabs(indent) << "return" << (vals.empty() ? "" : " " + vals) << "\n";
          break;
        }
        case Stmt::Kind::VarDecl:
          os << tabs(indent) << join(cur->names) << " := " << expr(cur->expr, indent) << "\n";
          break;
        case Stmt::Kind::If:
          os << tabs(indent) << "if (" << expr(cur->expr, indent) << ") {\n";
          stmts(os, cur->inner, indent + 1);
          os << tabs(indent) << "}\n";
          break;
        case Stmt::Kind::TypeAssert:
          os << tabs(indent) << cur->names[0] << ", " << cur->names[1] << " := "
             << expr(cur->expr, indent) << ".(" << render(cur->type) << ")\n";
          break;
        case Stmt::Kind::Block:
          if (opts_.blockBraces) {
            os << tabs(indent) << "{\n";
            stmts(os, cur->inner, indent + 1);
            os << tabs(indent) << "}\n";
          } else {
            stmts(os, cur->inner, indent);
          }
          break;
        case Stmt::Kind::Panic:
          os << tabs(indent) << "panic(" << prim::quote(cur->message) << ")\n";
          break;
      }
    }
  }

 private:
  static std::string tabs(int n) { return std::string(static_cast<std::size_t>(n), '\t'); }

  std::string exprs(const std::vector<ExprP>& es, int indent) const {
    std::vector<std::string> out;
    for (const auto& e : es) out.push_back(expr(e, indent));
    return join(out);
  }

  std::string operand(const ExprP& e, int indent) const {
    bool wrap = e->kind == Expr::Kind::Eq || e->kind == Expr::Kind::And;
    return wrap ? "(" + expr(e, indent) + ")" : expr(e, indent);
  }

  static std::string literal(const Expr& e) {
    if (const auto* i = std::get_if<BigInt>(&e.literal)) {
      if (e.type.kind == Type::Kind::Native && e.type.name == "*big.Int") {
        if (i->fits_int64()) return "big.NewInt(" + i->to_string() + ")";
        return "func() *big.Int { n, _ := new(big.Int).SetString(\"" + i->to_string() +
               "\", 10); return n }()";
      }
      return i->to_string();
    }
    return prim::render(e.literal);
  }

  const RenderOptions& opts_;
};

}  // namespace

std::string render(const Type& t) {
  switch (t.kind) {
    case Type::Kind::Param:
    case Type::Kind::Native:
      return t.name;
    case Type::Kind::Struct:
    case Type::Kind::Interface:
      return t.name + type_args(t.args);
    case Type::Kind::Func:
      return "func(" + type_list(t.args) + ")" + results(t.results, false);
  }
  return "?";
}

std::string render(const ExprP& e) {
  RenderOptions opts;
  return Printer(opts).expr(e, 0);
}

std::string render(const Program& p, const RenderOptions& opts) {
  Printer pr(opts);
  std::ostringstream os;
  os << "package " << p.package << "\n\nimport (\n";
  for (const auto& i : p.imports) os << "\t\"" << i << "\"\n";
  os << ")\n";
  for (const auto& d : p.decls) {
    os << "\n";
    if (const auto* t = std::get_if<TypeDecl>(&d)) {
      os << "type " << t->name << type_params(t->typeParams);
      if (t->isInterface) {
        os << (t->typeParams.empty() ? " any\n" : " interface {}\n");
        continue;
      }
      os << " struct {\n";
      for (const auto& f : t->fields) os << "\t" << f.name << " " << render(f.type) << "\n";
      os << "}\n";
      continue;
    }
    const auto& f = std::get<FuncDecl>(d);
    std::vector<std::string> ps;
    for (const auto& p : f.params) ps.push_back(p.name + " " + render(p.type));
    os << "func " << f.name << type_params(f.typeParams) << "(" << join(ps) << ")"
       << results(f.results, f.destructor) << " {\n";
    pr.stmts(os, f.body, 1);
    os << "}\n";
  }
  return os.str();
}

}  // namespace fgo::go
