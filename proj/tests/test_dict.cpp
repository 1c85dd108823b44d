#include <doctest.h>

#include "fgo/dict_pass.hpp"
#include "fgo/parser.hpp"
#include "support/fixtures.hpp"

using namespace fgo;
using ir::Term;
using ir::TypeExpr;

namespace {

template <class T>
const T& decl_named(const ir::Program& p, const std::string& name) {
  for (const auto& d : p.decls)
    if (auto* x = std::get_if<T>(&d); x && ir::decl_name(d) == name) return *x;
  throw std::runtime_error("no declaration " + name);
}

bool has_classes(const ir::Program& p) {
  for (const auto& d : p.decls)
    if (std::holds_alternative<ir::ClassDecl>(d) || std::holds_alternative<ir::InstanceDecl>(d))
      return true;
  return false;
}

}  // namespace

TEST_CASE("classes become record datatypes with superclasses first") {
  auto q = dict::elaborate(test::load_fixture("fig1.fml"));
  CHECK(!has_classes(q));
  CHECK(ir::validate(q).empty());

  const auto& sg = decl_named<ir::DataDecl>(q, "semigroup");
  REQUIRE(sg.dict);
  CHECK(sg.dict->fieldNames == std::vector<std::string>{"Plus"});
  CHECK(sg.ctors.at(0).fields.at(0) ==
        TypeExpr::arrows({TypeExpr::var("a"), TypeExpr::var("a")}, TypeExpr::var("a")));

  const auto& mo = decl_named<ir::DataDecl>(q, "monoid");
  REQUIRE(mo.dict);
  CHECK(mo.dict->fieldNames == std::vector<std::string>{"Semigroup_monoid", "Zero"});
  CHECK(mo.dict->methodArity == std::vector<int>{-1, 0});
  CHECK(mo.ctors.at(0).fields.at(0) == TypeExpr::con("semigroup", {TypeExpr::var("a")}));
}

TEST_CASE("constrained functions take their dictionaries first") {
  auto q = dict::elaborate(test::load_fixture("fig1.fml"));
  const auto& sum = decl_named<ir::FunDecl>(q, "sum");
  CHECK(sum.dictParams == 1);
  CHECK(sum.constraints.empty());
  auto [args, res] = ir::split_arrows(sum.signature);
  REQUIRE(args.size() == 2);
  CHECK(args[0] == TypeExpr::con("monoid", {TypeExpr::var("a")}));
  CHECK(args[1] == TypeExpr::con("list", {TypeExpr::var("a")}));
  CHECK(sum.equations[0].params[0] == ir::Pattern::var("a_"));

  // fold (a_.Semigroup_monoid.Plus) xs (a_.Zero())
  auto [head, targs] = ir::unspine(sum.equations[0].rhs);
  CHECK(head.name() == "fold");
  REQUIRE(targs.size() == 3);
  const Term& plus = targs[0];
  REQUIRE(plus.kind() == Term::Kind::Field);
  CHECK(plus.method_arity() == 2);
  CHECK(plus.index() == 0);
  REQUIRE(plus.target().kind() == Term::Kind::Field);
  CHECK(plus.target().method_arity() == -1);
  CHECK(plus.target().target() == Term::var("a_"));
  CHECK(targs[2] == Term::field(Term::var("a_"), "monoid", 1, 0));
}

TEST_CASE("ground instances become constants over the method functions") {
  auto q = dict::elaborate(test::load_fixture("fig1.fml"));
  const auto& plus = decl_named<ir::FunDecl>(q, "plus_Nat");
  CHECK(plus.equations.size() == 3);
  CHECK(plus.dictParams == 0);
  const auto& d = decl_named<ir::ConstDecl>(q, "semigroup_Nat");
  CHECK(d.signature == TypeExpr::con("semigroup", {TypeExpr::con("Nat")}));
  auto [head, fields] = ir::unspine(d.rhs);
  CHECK(head.name() == "semigroup");
  REQUIRE(fields.size() == 1);
  CHECK(fields[0] == Term::method_value(Term::ref("plus_Nat"), 2));

  // the recursive call in the third equation goes straight to plus_Nat
  auto [h3, a3] = ir::unspine(plus.equations[2].rhs);
  CHECK(h3.name() == "Suc");
  CHECK(ir::unspine(a3.at(0)).first.name() == "plus_Nat");

  const auto& mon = decl_named<ir::ConstDecl>(q, "monoid_Nat");
  auto [mh, mfields] = ir::unspine(mon.rhs);
  REQUIRE(mfields.size() == 2);
  CHECK(mfields[0] == Term::ref("semigroup_Nat"));
  CHECK(mfields[1] == Term::method_value(Term::ref("zero_Nat"), 0));
}

TEST_CASE("parametric instances become dictionary functions") {
  auto q = dict::elaborate(test::load_fixture("hierarchy.fml"));
  CHECK(ir::validate(q).empty());
  const auto& d = decl_named<ir::FunDecl>(q, "semigroup_list");
  CHECK(d.dictParams == 1);
  CHECK(d.signature == TypeExpr::fun(TypeExpr::con("semigroup", {TypeExpr::var("a")}),
                                     TypeExpr::con("semigroup", {TypeExpr::con("list", {TypeExpr::var("a")})})));
  const auto& m = decl_named<ir::FunDecl>(q, "plus_list");
  CHECK(m.dictParams == 1);
  CHECK(m.equations.size() == 2);
}

TEST_CASE("resolve_constraint") {
  auto p = test::load_fixture("hierarchy.fml");
  ir::Index idx(p);
  std::vector<dict::InScope> scope{{"a_", {"a", "monoid"}}};

  SUBCASE("superclass of a parameter") {
    auto path = dict::resolve_constraint(idx, "semigroup", TypeExpr::var("a"), scope);
    CHECK(path.fromParam);
    CHECK(path.root == "a_");
    CHECK(path.projections == std::vector<std::string>{"semigroup"});
  }
  SUBCASE("ground instance") {
    auto path = dict::resolve_constraint(idx, "monoid", TypeExpr::con("Nat"), {});
    CHECK(!path.fromParam);
    CHECK(path.root == "monoid_Nat");
    CHECK(path.args.empty());
  }
  SUBCASE("parametric instance resolves recursively") {
    auto t = TypeExpr::con("list", {TypeExpr::con("Nat")});
    auto path = dict::resolve_constraint(idx, "semigroup", t, {});
    CHECK(path.root == "semigroup_list");
    REQUIRE(path.args.size() == 1);
    CHECK(path.args[0].root == "semigroup_Nat");
    CHECK(dict::path_term(idx, path) ==
          Term::app(Term::ref("semigroup_list", {TypeExpr::con("Nat")}), Term::ref("semigroup_Nat")));
  }
  SUBCASE("missing instances") {
    auto t = TypeExpr::con("list", {TypeExpr::fun(TypeExpr::con("Nat"), TypeExpr::con("Nat"))});
    CHECK_THROWS_AS(dict::resolve_constraint(idx, "semigroup", t, {}), dict::DictError);
    CHECK_THROWS_AS(dict::resolve_constraint(idx, "monoid", TypeExpr::var("b"), scope),
                    dict::DictError);
  }
}

TEST_CASE("elaboration leaves class-free programs alone") {
  auto p = test::load_fixture("rbt.fml");
  CHECK(dict::elaborate(p) == p);
  auto q = dict::elaborate(test::load_fixture("fig1.fml"));
  CHECK(dict::elaborate(q) == q);
}

TEST_CASE("entry terms get ground dictionaries") {
  auto p = test::load_fixture("fig1.fml");
  auto t = parser::parse_term(p, "sum (Cons Zero Nil)");
  REQUIRE(t.term);
  auto e = dict::elaborate_term(p, *t.term);
  auto [head, args] = ir::unspine(e);
  CHECK(head.name() == "sum");
  REQUIRE(args.size() == 2);
  CHECK(args[0] == Term::ref("monoid_Nat"));
}
