#include <algorithm>

#include "surface.hpp"

namespace fgo::parser::surface {

namespace {

struct ParseError {
  Diagnostic diag;
};

bool is_decl_keyword(const Token& t) {
  return t.kind == Tok::Keyword &&
         (t.text == "datatype" || t.text == "fun" || t.text == "class" ||
          t.text == "instance" || t.text == "definition");
}

class Parser {
 public:
  Parser(const std::vector<Token>& toks, std::vector<Diagnostic>& diags)
      : toks_(toks), diags_(diags) {}

  Module module() {
    Module m;
    while (peek().kind != Tok::End) {
      if (!is_decl_keyword(peek())) {
        diags_.push_back({peek().pos, DiagKind::Parse,
                          "expected a declaration, found '" + peek().text + "'"});
        recover();
        continue;
      }
      try {
        m.decls.push_back(declaration());
      } catch (const ParseError& e) {
        diags_.push_back(e.diag);
        recover();
      }
    }
    return m;
  }

  std::optional<TermPtr> closed_term() {
    try {
      offside_ = 0;
      TermPtr t = term();
      if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after term");
      return t;
    } catch (const ParseError& e) {
      diags_.push_back(e.diag);
      return std::nullopt;
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool is_sym(std::string_view s, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Symbol && peek(ahead).text == s;
  }
  bool is_kw(std::string_view s) const {
    return peek().kind == Tok::Keyword && peek().text == s;
  }
  [[noreturn]] void fail(std::string message) const {
    throw ParseError{{peek().pos, DiagKind::Parse, std::move(message)}};
  }
  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  void expect_kw(std::string_view s) {
    if (!is_kw(s)) fail("expected '" + std::string(s) + "', found " + describe(peek()));
    next();
  }
  std::string ident() {
    if (peek().kind != Tok::Ident) fail("expected an identifier, found " + describe(peek()));
    return next().text;
  }
  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? std::string("end of input") : "'" + t.text + "'";
  }
  void recover() {
    next();
    while (peek().kind != Tok::End && !is_decl_keyword(peek())) next();
  }

  // A token ends the current term when it starts a new declaration or sits
  // at or left of the current equation's indentation on a fresh line.
  bool stop() const {
    const Token& t = peek();
    if (t.kind == Tok::End || is_decl_keyword(t)) return true;
    return t.lineStart && t.pos.column <= offside_;
  }

  Decl declaration() {
    const Token& kw = next();
    offside_ = kw.pos.column;
    if (kw.text == "datatype") return datatype(kw.pos);
    if (kw.text == "fun") return fun(kw.pos);
    if (kw.text == "class") return class_decl(kw.pos);
    if (kw.text == "instance") return instance(kw.pos);
    return definition(kw.pos);
  }

  DataDecl datatype(SourcePos pos) {
    DataDecl d;
    d.pos = pos;
    if (peek().kind == Tok::TyVar) {
      d.tyParams.push_back(next().text);
    } else if (is_sym("(") && peek(1).kind == Tok::TyVar) {
      next();
      d.tyParams.push_back(next().text);
      while (is_sym(",")) {
        next();
        if (peek().kind != Tok::TyVar) fail("expected a type variable");
        d.tyParams.push_back(next().text);
      }
      expect_sym(")");
    }
    d.name = ident();
    expect_sym("=");
    do {
      if (is_sym("|")) next();
      std::string ctor = ident();
      std::vector<TypePtr> fields;
      while (!stop() && (peek().kind == Tok::TyVar || peek().kind == Tok::Ident || is_sym("(")))
        fields.push_back(field_type());
      d.ctors.emplace_back(std::move(ctor), std::move(fields));
    } while (is_sym("|"));
    return d;
  }

  FunDecl fun(SourcePos pos) {
    FunDecl f;
    f.pos = pos;
    f.name = ident();
    expect_sym("::");
    sorts_.clear();
    f.signature = type();
    when_clause();
    f.sorts = std::move(sorts_);
    expect_kw("where");
    f.equations = equations();
    return f;
  }

  ClassDecl class_decl(SourcePos pos) {
    ClassDecl c;
    c.pos = pos;
    c.name = ident();
    if (is_sym("<=")) {
      next();
      c.superclasses.push_back(ident());
      while (is_sym(",")) {
        next();
        c.superclasses.push_back(ident());
      }
    }
    if (!is_kw("where")) return c;
    next();
    if (stop()) return c;
    offside_ = peek().pos.column;
    stopBeforeSignature_ = true;
    while (!stop() || (peek().lineStart && peek().pos.column == offside_ &&
                       !is_decl_keyword(peek()) && peek().kind != Tok::End)) {
      std::string name = method_name();
      expect_sym("::");
      c.methods.emplace_back(std::move(name), type());
    }
    stopBeforeSignature_ = false;
    return c;
  }

  std::string method_name() {
    if (is_sym("(")) {
      next();
      auto op = operator_name(peek().text);
      if (peek().kind != Tok::Symbol || !op) fail("expected an operator");
      next();
      expect_sym(")");
      return *op;
    }
    return ident();
  }

  InstanceDecl instance(SourcePos pos) {
    InstanceDecl inst;
    inst.pos = pos;
    sorts_.clear();
    inst.head = type();
    expect_sym("::");
    inst.className = ident();
    when_clause();
    inst.sorts = std::move(sorts_);
    if (!is_kw("where")) return inst;
    next();
    if (stop()) return inst;
    inst.equations = equations();
    return inst;
  }

  ConstDecl definition(SourcePos pos) {
    ConstDecl c;
    c.pos = pos;
    c.name = ident();
    expect_sym("::");
    sorts_.clear();
    c.signature = type();
    c.sorts = std::move(sorts_);
    expect_kw("where");
    offside_ = peek().pos.column;
    SourcePos at = peek().pos;
    if (ident() != c.name)
      throw ParseError{{at, DiagKind::Parse, "definition of '" + c.name + "' expected"}};
    if (!is_sym("=")) fail("definitions take no parameters");
    next();
    c.rhs = term();
    return c;
  }

  void when_clause() {
    if (!is_kw("when")) return;
    next();
    sort();
    while (is_sym(",")) {
      next();
      sort();
    }
  }

  void sort() {
    if (peek().kind != Tok::TyVar) fail("expected a type variable");
    Sort s{next().text, "", peek().pos};
    expect_sym("::");
    s.className = ident();
    sorts_.push_back(std::move(s));
  }

  // ---- types

  TypePtr make_type(Type::Kind k, std::string name, std::vector<TypePtr> args, SourcePos pos) {
    return std::make_shared<const Type>(Type{k, std::move(name), std::move(args), pos});
  }

  TypePtr type() {
    TypePtr lhs = product_type();
    if (is_sym("=>") && !stop()) {
      SourcePos pos = next().pos;
      return make_type(Type::Kind::Fun, "", {lhs, type()}, pos);
    }
    return lhs;
  }

  TypePtr product_type() {
    TypePtr lhs = applied_type();
    if (is_sym("*") && !stop()) {
      SourcePos pos = next().pos;
      return make_type(Type::Kind::Con, "prod", {lhs, product_type()}, pos);
    }
    return lhs;
  }

  bool type_name_follows() const {
    if (peek().kind != Tok::Ident || stop()) return false;
    return !(stopBeforeSignature_ && is_sym("::", 1));
  }

  TypePtr applied_type() {
    TypePtr t = atomic_type(true);
    while (type_name_follows()) {
      const Token& n = next();
      t = make_type(Type::Kind::Con, n.text, {t}, n.pos);
    }
    return t;
  }

  TypePtr field_type() {
    if (is_sym("(")) return atomic_type(false);
    const Token& t = next();
    if (t.kind == Tok::TyVar) return make_type(Type::Kind::Var, t.text, {}, t.pos);
    return make_type(Type::Kind::Con, t.text, {}, t.pos);
  }

  TypePtr atomic_type(bool allowSort) {
    const Token& t = peek();
    if (t.kind == Tok::TyVar) {
      next();
      return make_type(Type::Kind::Var, t.text, {}, t.pos);
    }
    if (t.kind == Tok::Ident) {
      next();
      return make_type(Type::Kind::Con, t.text, {}, t.pos);
    }
    if (!is_sym("(")) fail("expected a type, found " + describe(t));
    next();
    if (allowSort && peek().kind == Tok::TyVar && is_sym("::", 1)) {
      std::string var = peek().text;
      sort();
      expect_sym(")");
      return make_type(Type::Kind::Var, var, {}, t.pos);
    }
    bool saved = stopBeforeSignature_;
    std::size_t savedOffside = offside_;
    stopBeforeSignature_ = false;
    offside_ = 0;
    std::vector<TypePtr> items{type()};
    while (is_sym(",")) {
      next();
      items.push_back(type());
    }
    expect_sym(")");
    stopBeforeSignature_ = saved;
    offside_ = savedOffside;
    if (items.size() == 1) return items[0];
    if (peek().kind != Tok::Ident) fail("expected a type constructor after type argument list");
    const Token& n = next();
    return make_type(Type::Kind::Con, n.text, std::move(items), n.pos);
  }

  // ---- equations and patterns

  std::vector<Equation> equations() {
    std::vector<Equation> out;
    offside_ = peek().pos.column;
    std::size_t column = offside_;
    while (true) {
      out.push_back(equation());
      if (is_sym("|")) {
        next();
        continue;
      }
      const Token& t = peek();
      if (t.lineStart && t.pos.column == column && t.kind != Tok::End && !is_decl_keyword(t))
        continue;
      break;
    }
    return out;
  }

  Equation equation() {
    Equation eq;
    eq.pos = peek().pos;
    std::vector<PatternPtr> lhs;
    std::optional<std::string> op;
    std::vector<PatternPtr> rhsPats;
    while (!is_sym("=")) {
      if (peek().kind == Tok::End || is_decl_keyword(peek())) fail("expected '=' in equation");
      if (peek().kind == Tok::Symbol && operator_name(peek().text) && !is_sym("(", 0)) {
        if (op) fail("only one infix operator is allowed on the left-hand side");
        op = operator_name(next().text);
        continue;
      }
      (op ? rhsPats : lhs).push_back(pattern_atom(true));
    }
    next();
    if (op) {
      if (lhs.empty() || rhsPats.empty()) fail("infix equation needs two operands");
      eq.head = *op;
      eq.params = {collapse(lhs), collapse(rhsPats)};
    } else {
      if (lhs.empty() || !lhs[0]->args.empty()) fail("equation must start with a name");
      eq.head = lhs[0]->name;
      eq.params.assign(lhs.begin() + 1, lhs.end());
    }
    eq.rhs = term();
    return eq;
  }

  static PatternPtr collapse(const std::vector<PatternPtr>& items) {
    if (items.size() == 1) return items[0];
    if (!items[0]->args.empty())
      throw ParseError{{items[0]->pos, DiagKind::Parse, "malformed pattern application"}};
    return std::make_shared<const Pattern>(
        Pattern{items[0]->name, {items.begin() + 1, items.end()}, items[0]->pos});
  }

  PatternPtr pattern_atom(bool allowOperator) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      next();
      return std::make_shared<const Pattern>(Pattern{t.text, {}, t.pos});
    }
    if (!is_sym("(")) fail("expected a pattern, found " + describe(t));
    next();
    if (allowOperator && peek().kind == Tok::Symbol && operator_name(peek().text)) {
      std::string name = *operator_name(next().text);
      expect_sym(")");
      return std::make_shared<const Pattern>(Pattern{name, {}, t.pos});
    }
    PatternPtr p = pattern();
    expect_sym(")");
    return p;
  }

  PatternPtr pattern() {
    std::vector<PatternPtr> items{pattern_atom(false)};
    while (peek().kind == Tok::Ident || is_sym("(")) items.push_back(pattern_atom(false));
    return collapse(items);
  }

  // Decides whether the `|` at the cursor continues a case expression: the
  // next depth-0 `=>` must come before any `=`.
  bool clause_follows() const {
    int depth = 0;
    for (std::size_t k = pos_ + 1; k < toks_.size(); ++k) {
      const Token& t = toks_[k];
      if (t.kind == Tok::End || is_decl_keyword(t)) return false;
      if (t.kind != Tok::Symbol) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")" && --depth < 0) return false;
      if (depth != 0) continue;
      if (t.text == "=>") return true;
      if (t.text == "=" || t.text == "|") return false;
    }
    return false;
  }

  // ---- terms

  TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }

  TermPtr term() {
    if (is_sym("\\")) return lambda();
    if (is_kw("case")) return case_term();
    if (is_kw("let")) return let_term();
    return sum();
  }

  TermPtr lambda() {
    SourcePos pos = next().pos;
    std::vector<std::pair<std::string, TypePtr>> binders;
    while (!is_sym(".")) {
      if (is_sym("(")) {
        next();
        std::string name = ident();
        expect_sym("::");
        TypePtr ty = type();
        expect_sym(")");
        binders.emplace_back(std::move(name), std::move(ty));
      } else {
        binders.emplace_back(ident(), nullptr);
      }
    }
    if (binders.empty()) fail("lambda needs a binder");
    next();
    TermPtr body = term();
    for (auto it = binders.rbegin(); it != binders.rend(); ++it) {
      Term lam{Term::Kind::Lam};
      lam.name = it->first;
      lam.type = it->second;
      lam.left = body;
      lam.pos = pos;
      body = make(std::move(lam));
    }
    return body;
  }

  TermPtr case_term() {
    Term c{Term::Kind::Case};
    c.pos = next().pos;
    c.left = term();
    expect_kw("of");
    while (true) {
      PatternPtr p = pattern();
      expect_sym("=>");
      c.clauses.push_back({p, term()});
      if (is_sym("|") && clause_follows()) {
        next();
        continue;
      }
      break;
    }
    return make(std::move(c));
  }

  TermPtr let_term() {
    Term l{Term::Kind::Let};
    l.pos = next().pos;
    l.name = ident();
    expect_sym("=");
    l.left = term();
    expect_kw("in");
    l.right = term();
    return make(std::move(l));
  }

  TermPtr binary(TermPtr lhs, const Token& op, TermPtr rhs) {
    Term f{Term::Kind::Name};
    f.name = *operator_name(op.text);
    f.pos = op.pos;
    Term a1{Term::Kind::App, "", make(std::move(f)), lhs};
    a1.pos = op.pos;
    Term a2{Term::Kind::App, "", make(std::move(a1)), rhs};
    a2.pos = op.pos;
    return make(std::move(a2));
  }

  TermPtr sum() {
    TermPtr lhs = product();
    while (is_sym("+") && !stop()) {
      const Token& op = next();
      lhs = binary(lhs, op, product());
    }
    return lhs;
  }

  TermPtr product() {
    TermPtr lhs = application();
    while (is_sym("*") && !stop()) {
      const Token& op = next();
      lhs = binary(lhs, op, application());
    }
    return lhs;
  }

  bool atom_follows() const {
    if (stop()) return false;
    const Token& t = peek();
    return t.kind == Tok::Ident || t.kind == Tok::Int || t.kind == Tok::String || is_sym("(") ||
           is_sym("\\") || is_kw("case") || is_kw("let");
  }

  TermPtr application() {
    TermPtr head = atom();
    while (atom_follows()) {
      SourcePos pos = peek().pos;
      bool last = is_sym("\\") || is_kw("case") || is_kw("let");
      TermPtr arg = last ? term() : atom();
      Term app{Term::Kind::App, "", head, arg};
      app.pos = pos;
      head = make(std::move(app));
      if (last) break;
    }
    return head;
  }

  TermPtr atom() {
    const Token& t = peek();
    Term out;
    out.pos = t.pos;
    switch (t.kind) {
      case Tok::Ident:
        out.kind = Term::Kind::Name;
        out.name = next().text;
        return make(std::move(out));
      case Tok::Int:
        out.kind = Term::Kind::IntLit;
        out.name = next().text;
        return make(std::move(out));
      case Tok::String:
        out.kind = Term::Kind::StrLit;
        out.name = next().text;
        return make(std::move(out));
      default:
        break;
    }
    if (!is_sym("(")) fail("expected a term, found " + describe(t));
    next();
    std::size_t savedOffside = offside_;
    offside_ = 0;
    if (peek().kind == Tok::Symbol && operator_name(peek().text) && is_sym(")", 1)) {
      out.kind = Term::Kind::Name;
      out.name = *operator_name(next().text);
      next();
      offside_ = savedOffside;
      return make(std::move(out));
    }
    TermPtr inner = term();
    if (is_sym("::")) {
      next();
      out.kind = Term::Kind::Annot;
      out.left = inner;
      out.type = type();
      inner = make(std::move(out));
    }
    expect_sym(")");
    offside_ = savedOffside;
    return inner;
  }

  const std::vector<Token>& toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  std::size_t offside_ = 0;
  bool stopBeforeSignature_ = false;
  std::vector<Sort> sorts_;
};

}  // namespace

Module parse_module(const std::vector<Token>& toks, std::vector<Diagnostic>& diags) {
  return Parser(toks, diags).module();
}

std::optional<TermPtr> parse_closed_term(const std::vector<Token>& toks,
                                         std::vector<Diagnostic>& diags) {
  return Parser(toks, diags).closed_term();
}

}  // namespace fgo::parser::surface
