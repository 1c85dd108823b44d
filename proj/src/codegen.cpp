#include "fgo/codegen.hpp"

#include <functional>
#include <set>

#include <json.hpp>

namespace fgo::codegen {

using ir::Pattern;
using ir::Term;
using ir::TypeExpr;

namespace {

const std::set<std::string>& go_reserved() {
  static const std::set<std::string> s = {
      "break", "case", "chan", "const", "continue", "default", "defer", "else", "fallthrough",
      "for", "func", "go", "goto", "if", "import", "interface", "map", "package", "range",
      "return", "select", "struct", "switch", "type", "var", "any", "bool", "byte",
      "comparable", "complex64", "complex128", "error", "float32", "float64", "int", "int8",
      "int16", "int32", "int64", "rune", "string", "uint", "uint8", "uint16", "uint32",
      "uint64", "uintptr", "true", "false", "iota", "nil", "append", "cap", "clear", "close",
      "complex", "copy", "delete", "imag", "len", "make", "max", "min", "new", "panic",
      "print", "println", "real", "recover", "big"};
  return s;
}

std::string sanitize(const std::string& name) {
  std::string s = name;
  for (auto& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
  return s;
}

std::string capitalize(const std::string& name) {
  std::string s = sanitize(name);
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return "X" + s;
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::string local(const std::string& name) {
  std::string s = sanitize(name);
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || go_reserved().count(s))
    return s + "_";
  return s;
}

// a, b, ..., z, aa, ab, ...
std::string suffix(std::size_t k) {
  std::string s;
  ++k;
  while (k > 0) {
    --k;
    s.insert(s.begin(), static_cast<char>('a' + k % 26));
    k /= 26;
  }
  return s;
}

std::string field_name(std::size_t i) { return i == 0 ? "A" : "A" + suffix(i - 1); }

struct Scope {
  std::map<std::string, std::string> names;
  ir::TypeEnv types;
  std::set<std::string> visible;

  std::string fresh(const std::string& base) {
    if (visible.insert(base).second) return base;
    for (std::size_t k = 0;; ++k) {
      std::string c = base + suffix(k);
      if (visible.insert(c).second) return c;
    }
  }

  std::string pick(std::initializer_list<const char*> seq) {
    for (const char* c : seq)
      if (visible.insert(c).second) return c;
    return fresh(*seq.begin());
  }

  void bind(const std::string& ir, const std::string& go, const TypeExpr& t) {
    names[ir] = go;
    types[ir] = t;
  }
};

struct Row {
  std::vector<Pattern> pats;
  Term rhs;
  /// Variables that stand for a scrutinee wholesale.
  std::vector<std::pair<std::string, std::size_t>> aliases;
};

struct Item {
  std::string go;
  Pattern pat;
  TypeExpr type;
};

bool mentions(const go::StmtP& s, const std::string& name);

bool mentions(const go::ExprP& e, const std::string& name) {
  if (!e) return false;
  if (e->kind == go::Expr::Kind::Var) return e->name == name;
  for (const auto& a : e->args)
    if (mentions(a, name)) return true;
  return mentions(e->target, name) || mentions(e->body, name);
}

bool mentions(const go::StmtP& s, const std::string& name) {
  for (const go::Stmt* cur = s.get(); cur; cur = cur->rest.get()) {
    for (const auto& e : cur->exprs)
      if (mentions(e, name)) return true;
    if (mentions(cur->expr, name) || mentions(cur->inner, name)) return true;
  }
  return false;
}

bool atomic(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Lit:
      return true;
    case Term::Kind::Field:
      return t.method_arity() < 0 && atomic(t.target());
    default:
      return false;
  }
}

using Build = std::function<go::ExprP(std::vector<go::ExprP>)>;

}  // namespace

// ---------------------------------------------------------------------------
// Adaptation

AdaptationTable AdaptationTable::defaults() {
  AdaptationTable t;
  const std::vector<std::string> big = {"math/big"};
  t.types["int"] = {"*big.Int", big};
  t.types["nat"] = {"*big.Int", big};
  t.types["bool"] = {"bool", {}};
  t.types["string"] = {"string", {}};
  for (const char* ty : {"int", "nat"}) {
    std::string p = ty;
    t.consts[p + "_plus"] = {"new(big.Int).Add(%1, %2)", 2, big};
    t.consts[p + "_times"] = {"new(big.Int).Mul(%1, %2)", 2, big};
    t.consts[p + "_less"] = {"(%1.Cmp(%2) < 0)", 2, big};
    t.consts[p + "_less_eq"] = {"(%1.Cmp(%2) <= 0)", 2, big};
    t.consts[p + "_eq"] = {"(%1.Cmp(%2) == 0)", 2, big};
  }
  t.consts["int_minus"] = {"new(big.Int).Sub(%1, %2)", 2, big};
  t.consts["nat_minus"] = {
      "func(x, y *big.Int) *big.Int { if x.Cmp(y) < 0 { return big.NewInt(0) }; return "
      "new(big.Int).Sub(x, y) }(%1, %2)",
      2, big};
  t.consts["int_of_nat"] = {"new(big.Int).Set(%1)", 1, big};
  t.consts["True"] = {"true", 0, {}};
  t.consts["False"] = {"false", 0, {}};
  t.consts["conj"] = {"func(p, q bool) bool { return p && q }(%1, %2)", 2, {}};
  t.consts["disj"] = {"func(p, q bool) bool { return p || q }(%1, %2)", 2, {}};
  t.consts["not"] = {"!%1", 1, {}};
  t.consts["str_concat"] = {"(%1 + %2)", 2, {}};
  t.consts["str_eq"] = {"(%1 == %2)", 2, {}};
  return t;
}

AdaptationTable AdaptationTable::from_json(std::string_view text) {
  AdaptationTable t;
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("types"))
      for (const auto& [k, v] : j.at("types").items())
        t.types[k] = {v.at("go").get<std::string>(),
                      v.value("imports", std::vector<std::string>{})};
    if (j.contains("consts"))
      for (const auto& [k, v] : j.at("consts").items())
        t.consts[k] = {v.at("template").get<std::string>(), v.at("arity").get<std::size_t>(),
                       v.value("imports", std::vector<std::string>{})};
  } catch (const nlohmann::json::exception& e) {
    throw CodegenError(CodegenError::Kind::BadTable, e.what());
  }
  return t;
}

void AdaptationTable::merge(const AdaptationTable& other) {
  for (const auto& [k, v] : other.types) types[k] = v;
  for (const auto& [k, v] : other.consts) consts[k] = v;
}

AdaptationTable apply_adaptation(const AdaptationTable& table, const ir::Program& p) {
  ir::Index idx(p);
  for (const auto& [name, rule] : table.consts) {
    for (std::size_t i = 0; i + 1 < rule.tmpl.size(); ++i)
      if (rule.tmpl[i] == '%' && rule.tmpl[i + 1] >= '1' && rule.tmpl[i + 1] <= '9' &&
          static_cast<std::size_t>(rule.tmpl[i + 1] - '0') > rule.arity)
        throw CodegenError(CodegenError::Kind::BadTable,
                           "template for " + name + " has a hole beyond its arity");
    if (const auto* op = idx.prim(name); op && op->argTypes.size() != rule.arity)
      throw CodegenError(CodegenError::Kind::ArityMismatch,
                         name + " takes " + std::to_string(op->argTypes.size()) +
                             " arguments but its rule declares " + std::to_string(rule.arity));
  }
  for (const auto& [name, rule] : table.types)
    if (idx.data(name))
      throw CodegenError(CodegenError::Kind::BadTable,
                         "type " + name + " is declared by the program and cannot be adapted");
  return table;
}

// ---------------------------------------------------------------------------

SaturationReport classify_application(const ir::Index& idx, const Term& t) {
  auto [head, args] = ir::unspine(t);
  SaturationReport r;
  r.actualArgs = args.size();
  if (head.kind() == Term::Kind::Ref) {
    r.head = head.name();
    if (const auto* f = idx.fun(head.name())) {
      r.kind = SaturationReport::Kind::Function;
      r.declaredArity = f->equations.front().params.size();
      r.dictCount = f->dictParams;
    } else if (idx.constant(head.name())) {
      r.kind = SaturationReport::Kind::Constant;
    } else if (auto c = idx.ctor(head.name())) {
      r.kind = SaturationReport::Kind::Constructor;
      r.declaredArity = c->first->ctors[c->second].fields.size();
    } else if (const auto* op = idx.prim(head.name())) {
      r.kind = SaturationReport::Kind::Primitive;
      r.declaredArity = op->argTypes.size();
    }
  } else if (head.kind() == Term::Kind::Field) {
    r.head = head.name();
    r.kind = SaturationReport::Kind::Method;
    r.declaredArity = head.method_arity() > 0 ? static_cast<std::size_t>(head.method_arity()) : 0;
  }
  if (r.actualArgs == r.declaredArity)
    r.classification = SaturationReport::Class::Exact;
  else if (r.actualArgs < r.declaredArity)
    r.classification = SaturationReport::Class::Under;
  else
    r.classification = SaturationReport::Class::Over;
  return r;
}

// ---------------------------------------------------------------------------

struct Generator::Impl {
  ir::Program prog;
  ir::Index idx;
  AdaptationTable table;
  NameMap names;
  std::map<std::string, std::string> structToCtor;
  go::Program out;
  mutable std::set<std::string> imports;
  std::set<std::string> globalVisible;

  Impl(const ir::Program& p, AdaptationTable t, std::string package)
      : prog(p), idx(prog), table(apply_adaptation(t, prog)) {
    out.package = std::move(package);
    assign_names();
    for (const auto& d : prog.decls) {
      if (const auto* data = std::get_if<ir::DataDecl>(&d))
        datatype(*data);
      else if (const auto* f = std::get_if<ir::FunDecl>(&d))
        function(*f);
      else if (const auto* c = std::get_if<ir::ConstDecl>(&d))
        constant(*c);
      else
        throw CodegenError(CodegenError::Kind::UnknownTypeCon,
                           "classes must be eliminated before code generation");
    }
    out.imports.assign(imports.begin(), imports.end());
  }

  void assign_names() {
    std::set<std::string> claimed;
    auto claim = [&](std::string n) {
      while (claimed.count(n)) n += "_";
      claimed.insert(n);
      return n;
    };
    std::vector<const ir::DataDecl*> datas;
    for (const auto& d : prog.decls)
      if (const auto* data = std::get_if<ir::DataDecl>(&d)) datas.push_back(data);
    for (const auto* d : datas) names.types[d->name] = claim(capitalize(d->name));
    for (const auto* d : datas)
      for (const auto& c : d->ctors)
        names.ctors[c.name] =
            d->ctors.size() == 1 ? names.types[d->name] : claim(capitalize(c.name));
    for (const auto* d : datas)
      if (!d->dict)
        for (const auto& c : d->ctors)
          if (!c.fields.empty()) names.destructors[c.name] = claim(capitalize(c.name) + "_dest");
    for (const auto& d : prog.decls) {
      if (const auto* f = std::get_if<ir::FunDecl>(&d)) names.values[f->name] = claim(capitalize(f->name));
      if (const auto* c = std::get_if<ir::ConstDecl>(&d)) names.values[c->name] = claim(capitalize(c->name));
    }
    for (const auto& [k, v] : names.ctors) structToCtor[v] = k;
    globalVisible = claimed;
    globalVisible.insert(go_reserved().begin(), go_reserved().end());
    globalVisible.insert("q");
    globalVisible.insert("m");
  }

  Scope global_scope(const std::vector<std::string>& tyParams) const {
    Scope s;
    s.visible = globalVisible;
    for (const auto& t : tyParams) s.visible.insert(local(t));
    return s;
  }

  // -------------------------------------------------------------------------
  // Types

  go::Type type(const TypeExpr& t) const {
    switch (t.kind()) {
      case TypeExpr::Kind::Var:
        return go::Type::param(local(t.name()));
      case TypeExpr::Kind::Fun:
        return go::Type::func({type(t.arg())}, {type(t.result())});
      case TypeExpr::Kind::Con:
        break;
    }
    if (auto it = table.types.find(t.name()); it != table.types.end()) {
      imports.insert(it->second.imports.begin(), it->second.imports.end());
      return go::Type::native(it->second.go);
    }
    const auto* d = idx.data(t.name());
    if (!d) throw CodegenError(CodegenError::Kind::UnknownTypeCon, "no datatype " + t.name());
    std::vector<go::Type> args;
    for (const auto& a : t.args()) args.push_back(type(a));
    if (d->ctors.size() == 1) return go::Type::strct(names.types.at(d->name), std::move(args));
    return go::Type::iface(names.types.at(d->name), std::move(args));
  }

  std::vector<go::Type> types(const std::vector<TypeExpr>& ts) const {
    std::vector<go::Type> out;
    for (const auto& t : ts) out.push_back(type(t));
    return out;
  }

  bool adapted(const TypeExpr& t) const { return t.is_con() && table.types.count(t.name()); }

  go::Type dict_field_type(int arity, const TypeExpr& t) const {
    if (arity < 0) return type(t);
    auto [args, res] = ir::split_arrows(t, static_cast<std::size_t>(arity));
    return go::Type::func(types(args), {type(res)});
  }

  void datatype(const ir::DataDecl& d) {
    std::vector<std::string> tps;
    std::vector<go::Type> targs;
    for (const auto& p : d.tyParams) {
      tps.push_back(local(p));
      targs.push_back(go::Type::param(local(p)));
    }
    if (d.ctors.size() != 1) out.decls.push_back(go::TypeDecl{names.types.at(d.name), tps, true, {}});
    for (const auto& c : d.ctors) {
      std::vector<go::Param> fields;
      std::vector<go::Type> results;
      for (std::size_t i = 0; i < c.fields.size(); ++i) {
        go::Type ft = d.dict ? dict_field_type(d.dict->methodArity[i], c.fields[i]) : type(c.fields[i]);
        fields.push_back({d.dict ? d.dict->fieldNames[i] : field_name(i), ft});
        results.push_back(ft);
      }
      const std::string& sname = names.ctors.at(c.name);
      out.decls.push_back(go::TypeDecl{sname, tps, false, fields});
      if (d.dict || c.fields.empty()) continue;
      std::string pn = "p";
      while (std::find(tps.begin(), tps.end(), pn) != tps.end()) pn += "_";
      std::vector<go::ExprP> sel;
      for (const auto& f : fields) sel.push_back(go::field_sel(go::var(pn), f.name));
      out.decls.push_back(go::FuncDecl{names.destructors.at(c.name), tps,
                                       {{pn, go::Type::strct(sname, targs)}}, results,
                                       go::ret(std::move(sel)), true});
    }
  }

  // -------------------------------------------------------------------------
  // Declarations

  std::vector<Row> rows_of(const ir::FunDecl& f) const {
    std::vector<Row> rows;
    if (f.equations.size() == 1) {
      const auto& eq = f.equations[0];
      bool vars = std::all_of(eq.params.begin(), eq.params.end(), [](const Pattern& p) { return p.is_var(); });
      if (vars && eq.rhs.kind() == Term::Kind::Case && eq.rhs.scrutinee().kind() == Term::Kind::Var) {
        const std::string& x = eq.rhs.scrutinee().name();
        for (std::size_t j = 0; x != ir::kWildcard && j < eq.params.size(); ++j) {
          if (eq.params[j].name() != x) continue;
          for (const auto& c : eq.rhs.clauses()) {
            Row r{eq.params, c.body, {{x, j}}};
            r.pats[j] = c.pattern;
            rows.push_back(std::move(r));
          }
          return rows;
        }
      }
    }
    for (const auto& eq : f.equations) rows.push_back(Row{eq.params, eq.rhs, {}});
    return rows;
  }

  void function(const ir::FunDecl& f) {
    Scope s = global_scope(f.tyParams);
    std::vector<std::string> tps;
    for (const auto& t : f.tyParams) tps.push_back(local(t));
    std::size_t m = f.equations.front().params.size();
    auto [ptypes, res] = ir::split_arrows(f.signature, m);
    std::vector<Row> rows = rows_of(f);
    std::vector<go::Param> params;
    std::vector<std::pair<std::string, TypeExpr>> scrutinees;
    for (std::size_t i = 0; i < m; ++i) {
      const Pattern& p0 = rows.front().pats[i];
      std::string n = p0.is_var() && p0.name() != ir::kWildcard ? s.fresh(local(p0.name()))
                                                                 : s.fresh("x" + std::to_string(i));
      params.push_back({n, type(ptypes[i])});
      scrutinees.emplace_back(n, ptypes[i]);
    }
    const Row& first = rows.front();
    go::StmtP body;
    if (std::all_of(first.pats.begin(), first.pats.end(), [](const Pattern& p) { return p.is_var(); })) {
      // the remaining equations are unreachable
      for (const auto& [x, j] : first.aliases) s.bind(x, params[j].name, ptypes[j]);
      for (std::size_t i = 0; i < m; ++i)
        if (first.pats[i].name() != ir::kWildcard) s.bind(first.pats[i].name(), params[i].name, ptypes[i]);
      body = stmt(s, first.rhs);
    } else {
      body = match(s, scrutinees, rows);
    }
    out.decls.push_back(go::FuncDecl{names.values.at(f.name), tps, params, {type(res)}, body});
  }

  void constant(const ir::ConstDecl& c) {
    Scope s = global_scope(c.tyParams);
    std::vector<std::string> tps;
    for (const auto& t : c.tyParams) tps.push_back(local(t));
    go::StmtP body = stmt(s, c.rhs);
    out.decls.push_back(go::FuncDecl{names.values.at(c.name), tps, {}, {type(c.signature)}, body});
  }

  // -------------------------------------------------------------------------
  // Pattern matching

  go::StmtP match(const Scope& s, const std::vector<std::pair<std::string, TypeExpr>>& scrutinees,
                  const std::vector<Row>& rows) const {
    go::StmtP rest = go::panic("match failed");
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      Scope rs = s;
      for (const auto& [x, j] : it->aliases) rs.bind(x, scrutinees[j].first, scrutinees[j].second);
      std::vector<Item> pending;
      for (std::size_t i = 0; i < scrutinees.size(); ++i) {
        const Pattern& p = it->pats[i];
        if (p.is_var()) {
          if (p.name() != ir::kWildcard) rs.bind(p.name(), scrutinees[i].first, scrutinees[i].second);
        } else {
          pending.push_back({scrutinees[i].first, p, scrutinees[i].second});
        }
      }
      rest = go::block(lower(rs, pending, it->rhs), rest);
    }
    return rest;
  }

  go::ExprP ctor_value(const std::string& ctor, const TypeExpr& dataType,
                       std::vector<go::ExprP> fields) const {
    auto c = idx.ctor(ctor);
    std::vector<go::Type> targs = types(dataType.args());
    go::ExprP lit = go::struct_lit(names.ctors.at(ctor), targs, std::move(fields));
    if (c->first->ctors.size() == 1) return lit;
    return go::type_conv(go::Type::iface(names.types.at(c->first->name), targs), lit);
  }

  go::StmtP lower(Scope& s, std::vector<Item> items, const Term& rhs) const {
    std::vector<go::ExprP> checks;
    std::vector<Item> rest;
    for (auto& it : items) {
      if (adapted(it.type))
        throw CodegenError(CodegenError::Kind::AdaptedPattern,
                           "constructor pattern " + it.pat.name() + " on adapted type " +
                               ir::to_string(it.type));
      auto c = idx.ctor(it.pat.name());
      if (!it.pat.subpatterns().empty()) {
        rest.push_back(std::move(it));
      } else if (c->first->ctors.size() != 1) {
        checks.push_back(go::eq(go::var(it.go), ctor_value(it.pat.name(), it.type, {})));
      }
    }
    if (!checks.empty()) {
      go::ExprP cond = checks[0];
      for (std::size_t i = 1; i < checks.size(); ++i) cond = go::conj(cond, checks[i]);
      return go::if_(cond, lower(s, std::move(rest), rhs), nullptr);
    }
    if (rest.empty()) return stmt(s, rhs);

    Item head = rest.front();
    rest.erase(rest.begin());
    auto c = idx.ctor(head.pat.name());
    const ir::DataDecl& d = *c->first;
    ir::TypeSubst sub;
    for (std::size_t k = 0; k < d.tyParams.size(); ++k) sub.emplace(d.tyParams[k], head.type.args()[k]);

    std::vector<std::string> bound;
    std::vector<Item> inner;
    const auto& fields = d.ctors[c->second].fields;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const Pattern& sp = head.pat.subpatterns()[k];
      TypeExpr ft = ir::substitute(fields[k], sub);
      if (sp.is_var()) {
        if (sp.name() != ir::kWildcard) {
          std::string n = s.fresh(local(sp.name()));
          s.bind(sp.name(), n, ft);
          bound.push_back(n);
        } else {
          bound.push_back(go::kBlank);
        }
        continue;
      }
      auto sc = idx.ctor(sp.name());
      if (sp.subpatterns().empty() && sc && sc->first->ctors.size() == 1 && !adapted(ft)) {
        bound.push_back(go::kBlank);
        continue;
      }
      std::string n = sp.subpatterns().empty()
                          ? s.pick({"c", "d", "e", "f", "g", "h", "i", "j", "k", "l", "n", "o"})
                          : s.pick({"p", "r", "s", "t", "u", "v", "w"});
      bound.push_back(n);
      inner.push_back({n, sp, ft});
    }
    inner.insert(inner.end(), rest.begin(), rest.end());
    go::StmtP body = lower(s, std::move(inner), rhs);
    for (auto& n : bound)
      if (n != go::kBlank && !mentions(body, n)) n = go::kBlank;
    bool any = std::any_of(bound.begin(), bound.end(), [](const std::string& n) { return n != go::kBlank; });
    const std::string& dest = names.destructors.count(head.pat.name()) ? names.destructors.at(head.pat.name()) : "";
    if (d.ctors.size() == 1)
      return any ? go::var_decl(bound, go::call(dest, {}, {go::var(head.go)}), body) : body;
    go::Type asserted = go::Type::strct(names.ctors.at(head.pat.name()), types(head.type.args()));
    go::StmtP then = any ? go::var_decl(bound, go::call(dest, {}, {go::var("q")}), body) : body;
    return go::type_assert(any ? "q" : go::kBlank, "m", go::var(head.go), asserted,
                           go::if_(go::var("m"), then, nullptr));
  }

  // -------------------------------------------------------------------------
  // Terms

  TypeExpr type_of(const Scope& s, const Term& t) const { return ir::type_of(idx, t, s.types); }

  go::StmtP stmt(Scope& s, const Term& t) const {
    if (t.kind() != Term::Kind::Case) return go::ret({expr(s, t)});
    const Term& sc = t.scrutinee();
    std::vector<Row> rows;
    for (const auto& c : t.clauses()) rows.push_back(Row{{c.pattern}, c.body, {}});
    if (sc.kind() == Term::Kind::Var) return match(s, {{s.names.at(sc.name()), t.type()}}, rows);
    Scope inner = s;
    go::ExprP val = expr(inner, sc);
    std::string tmp = inner.fresh("s");
    go::StmtP m = match(inner, {{tmp, t.type()}}, rows);
    if (mentions(m, tmp)) return go::var_decl({tmp}, val, m);
    return go::ret({go::expr_call(
        go::func_lit({{go::kBlank, type(t.type())}}, {type(type_of(s, t))}, m), {val})});
  }

  go::ExprP expr(Scope& s, const Term& t) const {
    switch (t.kind()) {
      case Term::Kind::Var:
        return go::var(s.names.at(t.name()));
      case Term::Kind::Lit:
        return go::lit(t.literal().value, type(t.literal().type));
      case Term::Kind::Abs: {
        Scope inner = s;
        std::string n = go::kBlank;
        if (t.name() != ir::kWildcard) {
          n = inner.fresh(local(t.name()));
          inner.bind(t.name(), n, t.type());
        }
        TypeExpr bt = type_of(inner, t.body());
        return go::func_lit({{n, type(t.type())}}, {type(bt)}, stmt(inner, t.body()));
      }
      case Term::Kind::Case: {
        Scope inner = s;
        return go::expr_call(go::func_lit({}, {type(type_of(s, t))}, stmt(inner, t)), {});
      }
      case Term::Kind::MethodValue: {
        auto [args, res] = ir::split_arrows(type_of(s, t.body()), t.index());
        Scope inner = s;
        std::vector<go::Param> ps;
        Term call = t.body();
        for (std::size_t i = 0; i < args.size(); ++i) {
          std::string n = inner.fresh(suffix(i));
          std::string irn = "%arg" + std::to_string(i);
          inner.bind(irn, n, args[i]);
          ps.push_back({n, type(args[i])});
          call = Term::app(call, Term::var(irn));
        }
        return go::func_lit(ps, {type(res)}, stmt(inner, call));
      }
      default:
        return application(s, t);
    }
  }

  go::ExprP curried(Scope& s, go::ExprP base, const std::vector<Term>& args, std::size_t from) const {
    for (std::size_t i = from; i < args.size(); ++i) base = go::expr_call(base, {expr(s, args[i])});
    return base;
  }

  /// `captured` holds `lead` leading terms (a projection target) followed by
  /// the arguments; `build` receives the translated leading terms and exactly
  /// `m` arguments.
  go::ExprP saturate(Scope& s, const Term& whole, std::size_t lead, const std::vector<Term>& captured,
                     std::size_t m, const Build& build) const {
    std::size_t n = captured.size() - lead;
    if (n >= m) {
      std::vector<go::ExprP> xs;
      for (std::size_t i = 0; i < lead + m; ++i) xs.push_back(expr(s, captured[i]));
      go::ExprP e = build(std::move(xs));
      return curried(s, e, captured, lead + m);
    }
    auto [missing, res] = ir::split_arrows(type_of(s, whole), m - n);
    Scope inner = s;
    std::vector<go::ExprP> xs;
    std::vector<go::Param> pre;
    std::vector<go::ExprP> preVals;
    for (const auto& c : captured) {
      if (atomic(c)) {
        xs.push_back(expr(s, c));
        continue;
      }
      std::string v = inner.fresh("v");
      pre.push_back({v, type(type_of(s, c))});
      preVals.push_back(expr(s, c));
      xs.push_back(go::var(v));
    }
    std::vector<std::string> pnames;
    for (std::size_t i = 0; i < missing.size(); ++i) {
      pnames.push_back(inner.fresh(suffix(i % 26)));
      xs.push_back(go::var(pnames.back()));
    }
    go::ExprP body = build(std::move(xs));
    for (std::size_t i = missing.size(); i-- > 0;) {
      std::vector<TypeExpr> later(missing.begin() + static_cast<std::ptrdiff_t>(i) + 1, missing.end());
      go::Type rt = type(TypeExpr::arrows(later, res));
      body = go::func_lit({{pnames[i], type(missing[i])}}, {rt}, go::ret({body}));
    }
    if (pre.empty()) return body;
    return go::expr_call(go::func_lit(pre, {type(type_of(s, whole))}, go::ret({body})), preVals);
  }

  go::ExprP application(Scope& s, const Term& t) const {
    auto [head, args] = ir::unspine(t);
    SaturationReport r = classify_application(idx, t);
    if (head.kind() == Term::Kind::Ref) {
      const std::string& n = head.name();
      std::vector<go::Type> targs = types(head.type_args());
      switch (r.kind) {
        case SaturationReport::Kind::Function: {
          std::string gn = names.values.at(n);
          return saturate(s, t, 0, args, r.declaredArity,
                          [gn, targs](std::vector<go::ExprP> xs) { return go::call(gn, targs, std::move(xs)); });
        }
        case SaturationReport::Kind::Constant:
          return curried(s, go::call(names.values.at(n), targs, {}), args, 0);
        case SaturationReport::Kind::Constructor: {
          TypeExpr dt = TypeExpr::con(idx.ctor(n)->first->name, head.type_args());
          return saturate(s, t, 0, args, r.declaredArity,
                          [this, n, dt](std::vector<go::ExprP> xs) { return ctor_value(n, dt, std::move(xs)); });
        }
        case SaturationReport::Kind::Primitive: {
          auto rule = table.consts.find(n);
          if (rule == table.consts.end())
            throw CodegenError(CodegenError::Kind::UnmappedConstant, "no adaptation for " + n);
          imports.insert(rule->second.imports.begin(), rule->second.imports.end());
          const auto* op = idx.prim(n);
          std::vector<go::Type> ats;
          for (const auto& a : op->argTypes) ats.push_back(type(TypeExpr::con(a)));
          go::Type rt = type(TypeExpr::con(op->resultType));
          std::string tmpl = rule->second.tmpl;
          return saturate(s, t, 0, args, r.declaredArity, [n, tmpl, ats, rt](std::vector<go::ExprP> xs) {
            return go::native(n, tmpl, ats, rt, std::move(xs));
          });
        }
        default:
          throw CodegenError(CodegenError::Kind::UnmappedConstant, "unknown reference " + n);
      }
    }
    if (head.kind() == Term::Kind::Field) {
      const auto* d = idx.data(head.name());
      std::string fname = d->dict ? d->dict->fieldNames[head.index()] : field_name(head.index());
      int k = head.method_arity();
      if (k <= 0) {
        go::ExprP sel = go::field_sel(expr(s, head.target()), fname);
        if (k == 0) sel = go::expr_call(sel, {});
        return curried(s, sel, args, 0);
      }
      std::vector<Term> captured{head.target()};
      captured.insert(captured.end(), args.begin(), args.end());
      return saturate(s, t, 1, captured, static_cast<std::size_t>(k), [fname](std::vector<go::ExprP> xs) {
        go::ExprP target = xs.front();
        xs.erase(xs.begin());
        return go::expr_call(go::field_sel(target, fname), std::move(xs));
      });
    }
    return curried(s, expr(s, head), args, 0);
  }

  // -------------------------------------------------------------------------

  std::string decode(const go::Value& v) const {
    if (const auto* i = std::get_if<go::GIface>(&v->v)) return decode(i->inner);
    if (const auto* st = std::get_if<go::GStruct>(&v->v)) {
      auto it = structToCtor.find(st->type);
      std::string name = it == structToCtor.end() ? st->type : it->second;
      if (st->fields.empty()) return name;
      std::string out = name + "(";
      for (std::size_t i = 0; i < st->fields.size(); ++i) out += (i ? ", " : "") + decode(st->fields[i]);
      return out + ")";
    }
    if (const auto* sc = std::get_if<prim::Scalar>(&v->v)) return prim::render(*sc);
    if (std::holds_alternative<go::GNil>(v->v)) return "nil";
    return "<fun>";
  }
};

Generator::Generator(const ir::Program& p, AdaptationTable table, std::string package)
    : impl_(std::make_unique<Impl>(p, std::move(table), std::move(package))) {}
Generator::~Generator() = default;
Generator::Generator(Generator&&) noexcept = default;

const go::Program& Generator::program() const { return impl_->out; }
const NameMap& Generator::names() const { return impl_->names; }

go::Type Generator::translate_type(const ir::TypeExpr& t) const { return impl_->type(t); }

go::ExprP Generator::translate_expr(const ir::Term& t) const {
  Scope s = impl_->global_scope({});
  return impl_->expr(s, t);
}

go::ExprP Generator::translate_stmt_wrapped(const ir::Term& t) const {
  Scope s = impl_->global_scope({});
  go::Type rt = impl_->type(impl_->type_of(s, t));
  return go::expr_call(go::func_lit({}, {rt}, impl_->stmt(s, t)), {});
}

std::string Generator::decode(const go::Value& v) const { return impl_->decode(v); }

std::string render(const go::GResult& r, const Generator& g) {
  if (const auto* v = std::get_if<go::Value>(&r)) return g.decode(*v);
  return std::get<go::GFailure>(r).message;
}

}  // namespace fgo::codegen
