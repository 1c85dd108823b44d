#include <doctest.h>

#include <random>

#include "fgo/go_ast.hpp"

using namespace fgo::go;

namespace {

Type nat() { return Type::iface("Nat"); }
Type list_of(Type a) { return Type::iface("List", {std::move(a)}); }
Type option_of(Type a) { return Type::iface("Option", {std::move(a)}); }

ExprP zero() { return type_conv(nat(), struct_lit("Zero", {}, {})); }
ExprP suc(ExprP n) { return type_conv(nat(), struct_lit("Suc", {}, {std::move(n)})); }

Program nat_program() {
  Program p;
  p.decls.push_back(TypeDecl{"Nat", {}, true, {}});
  p.decls.push_back(TypeDecl{"Zero", {}, false, {}});
  p.decls.push_back(TypeDecl{"Suc", {}, false, {{"A", nat()}}});
  p.decls.push_back(FuncDecl{"Suc_dest", {}, {{"p", Type::strct("Suc")}}, {nat()},
                             ret({field_sel(var("p"), "A")}), true});
  return p;
}

// The clause structure of the hd2 lowering, one block per clause.
Program hd2_program() {
  Type a = Type::param("a");
  Program p;
  p.decls.push_back(TypeDecl{"List", {"a"}, true, {}});
  p.decls.push_back(TypeDecl{"Nil", {"a"}, false, {}});
  p.decls.push_back(TypeDecl{"Cons", {"a"}, false, {{"A", a}, {"Aa", list_of(a)}}});
  p.decls.push_back(FuncDecl{"Cons_dest",
                             {"a"},
                             {{"p", Type::strct("Cons", {a})}},
                             {a, list_of(a)},
                             ret({field_sel(var("p"), "A"), field_sel(var("p"), "Aa")}),
                             true});
  p.decls.push_back(TypeDecl{"Option", {"a"}, true, {}});
  p.decls.push_back(TypeDecl{"None", {"a"}, false, {}});
  p.decls.push_back(TypeDecl{"Some", {"a"}, false, {{"A", a}}});

  auto nil_list = [&] { return type_conv(list_of(a), struct_lit("Nil", {a}, {})); };
  auto none = [&] { return type_conv(option_of(a), struct_lit("None", {a}, {})); };
  auto cons_t = Type::strct("Cons", {a});

  StmtP c1 = if_(eq(var("x0"), nil_list()), ret({none()}), nullptr);
  StmtP c2 = type_assert(
      "q", "m", var("x0"), cons_t,
      if_(var("m"),
          var_decl({"_", "c"}, call("Cons_dest", {}, {var("q")}),
                   if_(eq(var("c"), nil_list()), ret({none()}), nullptr)),
          nullptr));
  StmtP c3 = type_assert(
      "q", "m", var("x0"), cons_t,
      if_(var("m"),
          var_decl({"_", "p"}, call("Cons_dest", {}, {var("q")}),
                   type_assert("q", "m", var("p"), cons_t,
                               if_(var("m"),
                                   var_decl({"y", "_"}, call("Cons_dest", {}, {var("q")}),
                                            ret({type_conv(option_of(a),
                                                           struct_lit("Some", {a}, {var("y")}))})),
                                   nullptr))),
          nullptr));
  StmtP body = block(c1, block(c2, block(c3, panic("match failed"))));
  p.decls.push_back(FuncDecl{"Hd2", {"a"}, {{"x0", list_of(a)}}, {option_of(a)}, body, false});
  return p;
}

Value gnat(int n) {
  Value v = make(GValue{GIface{nat(), make(GValue{GStruct{"Zero", {}, {}}})}});
  for (int i = 0; i < n; ++i) v = make(GValue{GIface{nat(), make(GValue{GStruct{"Suc", {}, {v}}})}});
  return v;
}

Value glist(const std::vector<Value>& xs, const Type& elem) {
  Type l = list_of(elem);
  Value v = make(GValue{GIface{Type::strct("Nil", {elem}), make(GValue{GStruct{"Nil", {elem}, {}}})}});
  for (auto it = xs.rbegin(); it != xs.rend(); ++it)
    v = make(GValue{GIface{Type::strct("Cons", {elem}),
                           make(GValue{GStruct{"Cons", {elem}, {*it, v}}})}});
  return v;
}

bool has(const std::vector<Diagnostic>& ds, Problem p) {
  for (const auto& d : ds)
    if (d.problem == p) return true;
  return false;
}

}  // namespace

TEST_CASE("number one is an interface around Suc around an interface around Zero") {
  auto r = geval_expr(nat_program(), suc(zero()));
  REQUIRE(std::holds_alternative<Value>(r));
  const Value& v = std::get<Value>(r);
  const auto& outer = std::get<GIface>(v->v);
  CHECK(outer.dynamic == Type::strct("Suc"));
  const auto& s = std::get<GStruct>(outer.inner->v);
  CHECK(s.type == "Suc");
  const auto& inner = std::get<GIface>(s.fields.at(0)->v);
  CHECK(inner.dynamic == Type::strct("Zero"));
  CHECK(std::get<GStruct>(inner.inner->v).fields.empty());
}

TEST_CASE("hd2 lowering checks and evaluates") {
  Program p = hd2_program();
  CHECK(check_wf(p).empty());
  Type n = nat();

  auto none = geval(p, "Hd2", {n}, {glist({}, n)});
  REQUIRE(std::holds_alternative<Value>(none));
  CHECK(std::get<GStruct>(std::get<GIface>(std::get<Value>(none)->v).inner->v).type == "None");

  auto one = geval(p, "Hd2", {n}, {glist({gnat(0)}, n)});
  CHECK(std::get<GStruct>(std::get<GIface>(std::get<Value>(one)->v).inner->v).type == "None");

  auto some = geval(p, "Hd2", {n}, {glist({gnat(0), gnat(1)}, n)});
  REQUIRE(std::holds_alternative<Value>(some));
  const auto& s = std::get<GStruct>(std::get<GIface>(std::get<Value>(some)->v).inner->v);
  CHECK(s.type == "Some");
  CHECK(equal(s.fields.at(0), gnat(1)) == true);
}

TEST_CASE("nil scrutinee falls through to the panic") {
  auto r = geval(hd2_program(), "Hd2", {nat()}, {make(GValue{GNil{}})});
  REQUIRE(std::holds_alternative<GFailure>(r));
  CHECK(std::get<GFailure>(r).kind == GFailure::Kind::Panic);
  CHECK(std::get<GFailure>(r).message == "match failed");
}

TEST_CASE("destructing nil is a nil dereference") {
  Program p = nat_program();
  auto r = geval_expr(p, call("Suc_dest", {}, {nil()}));
  REQUIRE(std::holds_alternative<GFailure>(r));
  CHECK(std::get<GFailure>(r).kind == GFailure::Kind::NilDereference);
}

TEST_CASE("multi-value results must be destructured") {
  Program p = nat_program();
  p.decls.push_back(FuncDecl{"Foo", {}, {}, {nat(), nat(), nat()}, ret({zero(), zero(), zero()})});
  p.decls.push_back(FuncDecl{"Bar", {}, {}, {nat()},
                             var_decl({"no_tuples"}, call("Foo", {}, {}), ret({var("no_tuples")}))});
  CHECK(has(check_wf(p), Problem::MultiValueMisuse));

  Program ok = nat_program();
  ok.decls.push_back(FuncDecl{"Foo", {}, {}, {nat(), nat(), nat()}, ret({zero(), zero(), zero()})});
  ok.decls.push_back(FuncDecl{"Bar", {}, {}, {nat()},
                              var_decl({"x", "_", "_"}, call("Foo", {}, {}), ret({var("x")}))});
  CHECK(check_wf(ok).empty());
}

TEST_CASE("a body without a return is rejected") {
  Program p = nat_program();
  p.decls.push_back(FuncDecl{"F", {}, {{"n", nat()}}, {nat()}, block(ret({var("n")}), nullptr)});
  CHECK(check_wf(p).empty());
  Program bad = nat_program();
  bad.decls.push_back(
      FuncDecl{"F", {}, {{"n", nat()}}, {nat()}, if_(eq(var("n"), zero()), ret({var("n")}), nullptr)});
  CHECK(has(check_wf(bad), Problem::MissingReturn));
}

TEST_CASE("scoping rules") {
  Program unused = nat_program();
  unused.decls.push_back(FuncDecl{"F", {}, {{"n", nat()}}, {nat()},
                                  var_decl({"k"}, var("n"), ret({var("n")}))});
  CHECK(has(check_wf(unused), Problem::UnusedVariable));

  Program blank = nat_program();
  blank.decls.push_back(FuncDecl{"F", {}, {{"n", nat()}}, {nat()}, ret({var("_")})});
  CHECK(has(check_wf(blank), Problem::BlankRead));

  Program redecl = nat_program();
  redecl.decls.push_back(FuncDecl{"F", {}, {{"n", nat()}}, {nat()},
                                  var_decl({"n"}, var("n"), ret({var("n")}))});
  CHECK(has(check_wf(redecl), Problem::Redeclared));

  Program shadow = nat_program();
  shadow.decls.push_back(FuncDecl{"F", {}, {{"n", nat()}}, {nat()},
                                  block(var_decl({"n"}, var("n"), ret({var("n")})), panic("x"))});
  CHECK(check_wf(shadow).empty());
}

TEST_CASE("type errors") {
  Program p = nat_program();
  p.decls.push_back(FuncDecl{"F", {}, {{"n", Type::strct("Suc")}}, {nat()}, ret({var("n")})});
  CHECK(has(check_wf(p), Problem::TypeMismatch));

  Program q = nat_program();
  q.decls.push_back(FuncDecl{"F", {}, {{"n", Type::strct("Suc")}}, {nat()},
                             type_assert("x", "ok", var("n"), Type::strct("Zero"), ret({zero()}))});
  CHECK(has(check_wf(q), Problem::NotInterface));
}

TEST_CASE("core strictness flags extensions") {
  auto ds = check_wf(hd2_program(), Strictness::Core);
  CHECK(has(ds, Problem::Extension));
  CHECK(check_wf(nat_program(), Strictness::Core).empty());
}

TEST_CASE("rendering") {
  CHECK(render(Program{}) == "package main\n\nimport (\n)\n");
  std::string nat = render(nat_program());
  CHECK(nat.find("type Nat any\n") != std::string::npos);
  CHECK(nat.find("type Zero struct {\n}\n") != std::string::npos);
  CHECK(nat.find("type Suc struct {\n\tA Nat\n}\n") != std::string::npos);
  CHECK(nat.find("func Suc_dest(p Suc) (Nat) {\n\treturn p.A\n}\n") != std::string::npos);
  std::string hd2 = render(hd2_program());
  CHECK(hd2.find("type List[a any] interface {}") != std::string::npos);
  CHECK(hd2.find("func Cons_dest[a any](p Cons[a]) (a, List[a]) {") != std::string::npos);
  CHECK(hd2.find("if (x0 == (List[a](Nil[a]{}))) {") != std::string::npos);
  CHECK(hd2.find("\tpanic(\"match failed\")\n") != std::string::npos);
  CHECK(render(Type::func({Type::param("a"), Type::param("a")}, {Type::param("a")})) ==
        "func(a, a) a");
}

TEST_CASE("equality on ground values is an equivalence relation") {
  std::mt19937 rng(7);
  std::vector<Value> pool;
  for (int i = 0; i < 40; ++i) {
    std::vector<Value> xs;
    int len = static_cast<int>(rng() % 3);
    for (int j = 0; j < len; ++j) xs.push_back(gnat(static_cast<int>(rng() % 3)));
    pool.push_back(rng() % 2 ? glist(xs, nat()) : gnat(static_cast<int>(rng() % 4)));
  }
  pool.push_back(make(GValue{GNil{}}));
  for (const auto& a : pool) {
    CHECK(equal(a, a) == true);
    for (const auto& b : pool) {
      auto ab = equal(a, b);
      REQUIRE(ab.has_value());
      CHECK(ab == equal(b, a));
      if (!*ab) continue;
      for (const auto& c : pool)
        if (equal(b, c) == true) CHECK(equal(a, c) == true);
    }
  }
  Value f = make(GValue{GClosure{}});
  CHECK(!equal(f, f).has_value());
}
