#include <sstream>
#include <stdexcept>

#include "fgo/parser.hpp"

namespace fgo::parser {

namespace {

using ir::Term;
using ir::TypeExpr;

bool atomic_type(const TypeExpr& t) { return t.is_var() || (t.is_con() && t.args().empty()); }

std::string field(const TypeExpr& t) {
  return atomic_type(t) ? ir::to_string(t) : "(" + ir::to_string(t) + ")";
}

std::string pattern(const ir::Pattern& p, bool nested) {
  if (p.is_var() || p.subpatterns().empty()) return p.name();
  std::string s = p.name();
  for (const auto& sub : p.subpatterns()) s += " " + pattern(sub, true);
  return nested ? "(" + s + ")" : s;
}

std::string literal(const ir::Literal& l) {
  std::string text = prim::render(l.value);
  if (l.type.is_con() && l.type.name() == prim::kNat) return "(" + text + " :: nat)";
  return text;
}

// prec 0: anything; 1: application head; 2: argument
std::string term(const Term& t, int prec) {
  auto wrap = [&](std::string s, int needed) { return prec > needed ? "(" + s + ")" : s; };
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Ref:
      return t.name();
    case Term::Kind::Lit:
      return literal(t.literal());
    case Term::Kind::App: {
      auto [head, args] = ir::unspine(t);
      std::string s = term(head, 1);
      for (const auto& a : args) s += " " + term(a, 2);
      return wrap(s, 0);
    }
    case Term::Kind::Abs:
      return "(\\(" + t.name() + " :: " + ir::to_string(t.type()) + "). " + term(t.body(), 0) +
             ")";
    case Term::Kind::Case: {
      std::string s = "(case " + term(t.scrutinee(), 0) + " of ";
      for (std::size_t i = 0; i < t.clauses().size(); ++i) {
        if (i) s += " | ";
        s += pattern(t.clauses()[i].pattern, false) + " => " + term(t.clauses()[i].body, 0);
      }
      return s + ")";
    }
    case Term::Kind::Field:
    case Term::Kind::MethodValue:
      break;
  }
  throw std::invalid_argument("dictionary terms have no surface syntax");
}

std::string constraints(const std::vector<ir::Constraint>& cs) {
  if (cs.empty()) return "";
  std::string s = " when ";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) s += ", ";
    s += "'" + cs[i].var + " :: " + cs[i].className;
  }
  return s;
}

void equations(std::ostream& os, const std::string& head, const std::vector<ir::Equation>& eqs) {
  for (const auto& eq : eqs) {
    os << "  " << head;
    for (const auto& p : eq.params) os << " " << pattern(p, true);
    os << " = " << term(eq.rhs, 0) << "\n";
  }
}

struct Printer {
  std::ostream& os;

  void operator()(const ir::DataDecl& d) {
    if (d.dict) throw std::invalid_argument("dictionary types have no surface syntax");
    os << "datatype ";
    if (d.tyParams.size() == 1) os << "'" << d.tyParams[0] << " ";
    if (d.tyParams.size() > 1) {
      os << "(";
      for (std::size_t i = 0; i < d.tyParams.size(); ++i) os << (i ? ", '" : "'") << d.tyParams[i];
      os << ") ";
    }
    os << d.name << " =";
    for (std::size_t i = 0; i < d.ctors.size(); ++i) {
      os << (i ? " | " : " ") << d.ctors[i].name;
      for (const auto& f : d.ctors[i].fields) os << " " << field(f);
    }
    os << "\n";
  }

  void operator()(const ir::FunDecl& f) {
    if (f.dictParams) throw std::invalid_argument("elaborated functions have no surface syntax");
    os << "fun " << f.name << " :: " << ir::to_string(f.signature) << constraints(f.constraints)
       << " where\n";
    equations(os, f.name, f.equations);
  }

  void operator()(const ir::ClassDecl& c) {
    os << "class " << c.name;
    for (std::size_t i = 0; i < c.superclasses.size(); ++i)
      os << (i ? ", " : " <= ") << c.superclasses[i];
    if (!c.methods.empty()) {
      os << " where\n";
      for (const auto& m : c.methods) os << "  " << m.name << " :: " << ir::to_string(m.signature) << "\n";
    } else {
      os << "\n";
    }
  }

  void operator()(const ir::InstanceDecl& inst) {
    std::vector<TypeExpr> params;
    for (const auto& p : inst.tyParams) params.push_back(TypeExpr::var(p));
    os << "instance " << ir::to_string(TypeExpr::con(inst.tyCon, params))
       << " :: " << inst.className << constraints(inst.constraints);
    if (inst.methods.empty()) {
      os << "\n";
      return;
    }
    os << " where\n";
    for (const auto& m : inst.methods) equations(os, m.name, m.equations);
  }

  void operator()(const ir::ConstDecl& c) {
    os << "definition " << c.name << " :: " << ir::to_string(c.signature) << " where\n  " << c.name
       << " = " << term(c.rhs, 0) << "\n";
  }
};

}  // namespace

std::string pretty(const ir::Program& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.decls.size(); ++i) {
    if (i) os << "\n";
    std::visit(Printer{os}, p.decls[i]);
  }
  return os.str();
}

std::string pretty(const ir::Term& t) { return term(t, 0); }

}  // namespace fgo::parser
