#include "support/gen.hpp"

#include <cassert>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace fgo::test {

namespace {

// ---------------------------------------------------------------------------
// Class-free programs

struct RType {
  enum Kind { Int, Bool, Var, Data, Fun } kind = Int;
  int data = -1;
  std::vector<RType> args;
  friend bool operator==(const RType&, const RType&) = default;
};

RType t_int() { return {RType::Int, -1, {}}; }
RType t_bool() { return {RType::Bool, -1, {}}; }
RType t_var() { return {RType::Var, -1, {}}; }
RType t_data(int d, std::vector<RType> args = {}) { return {RType::Data, d, std::move(args)}; }
RType t_fun(RType a, RType b) { return {RType::Fun, -1, {std::move(a), std::move(b)}}; }

RType subst(const RType& t, const RType& a) {
  if (t.kind == RType::Var) return a;
  RType out = t;
  for (auto& x : out.args) x = subst(x, a);
  return out;
}

bool first_order(const RType& t) {
  if (t.kind == RType::Fun) return false;
  for (const auto& a : t.args)
    if (!first_order(a)) return false;
  return true;
}

RType arrows(const std::vector<RType>& params, std::size_t from, RType result) {
  for (std::size_t i = params.size(); i > from; --i) result = t_fun(params[i - 1], result);
  return result;
}

struct RCtor {
  std::string name;
  std::vector<RType> fields;
};

struct RData {
  std::string name;
  bool param = false;
  std::vector<RCtor> ctors;
};

struct RFun {
  std::string name;
  bool poly = false;
  std::vector<RType> params;
  RType result;
};

struct Binding {
  std::string name;
  RType type;
};

struct Ctx {
  std::vector<Binding> env;
  std::vector<std::string> smaller;
  bool poly = false;
  int self = -1;
  int limit = 0;
};

struct Head {
  std::string text;
  std::vector<RType> params;
  RType result;
};

std::string wrap(const std::string& s) {
  for (char c : s)
    if (c == ' ') return "(" + s + ")";
  return s;
}

class ProgramGen {
 public:
  ProgramGen(std::mt19937_64& rng, const ProgramShape& shape) : rng_(rng), shape_(shape) {}

  GeneratedProgram run() {
    for (;;) {
      data_.clear();
      funs_.clear();
      GeneratedProgram out;
      gen_data();
      gen_fun_types();
      for (const auto& d : data_) out.source += data_text(d);
      for (std::size_t i = 0; i < funs_.size(); ++i) out.source += fun_text(static_cast<int>(i));
      std::vector<int> eligible;
      for (std::size_t i = 0; i < funs_.size(); ++i) {
        bool ok = true;
        for (const auto& p : funs_[i].params) ok = ok && first_order(p);
        if (ok) eligible.push_back(static_cast<int>(i));
      }
      if (eligible.empty()) continue;
      int entries = shape_.minEntries + pick(3);
      for (int k = 0; k < entries; ++k) {
        const RFun& f = funs_[eligible[pick(static_cast<int>(eligible.size()))]];
        std::string call = f.name;
        for (const auto& p : f.params) call += " " + wrap(value(subst(p, t_int()), 3));
        out.entries.push_back(call);
      }
      for (int k = 0; k < shape_.closedTerms; ++k) {
        Ctx ctx;
        ctx.limit = static_cast<int>(funs_.size());
        counter_ = 0;
        RType t = base_type(false);
        out.closedTerms.push_back(chance(0.5) ? case_term(t, ctx, 3) : term(t, ctx, 3));
      }
      return out;
    }
  }

 private:
  int pick(int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng_)); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  template <class T>
  const T& choose(const std::vector<T>& xs) {
    return xs[static_cast<std::size_t>(pick(static_cast<int>(xs.size())))];
  }

  std::string show(const RType& t) const {
    switch (t.kind) {
      case RType::Int:
        return "int";
      case RType::Bool:
        return "bool";
      case RType::Var:
        return "'a";
      case RType::Data:
        return data_[t.data].param ? "(" + show(t.args[0]) + " " + data_[t.data].name + ")"
                                   : data_[t.data].name;
      case RType::Fun:
        return "(" + show(t.args[0]) + " => " + show(t.args[1]) + ")";
    }
    return "?";
  }

  RType instantiate(int d, bool poly) {
    if (!data_[d].param) return t_data(d);
    return t_data(d, {poly && chance(0.5) ? t_var() : t_int()});
  }

  RType field_type(int owner, bool param, bool recursive) {
    std::vector<std::function<RType()>> opts = {[] { return t_int(); }, [] { return t_bool(); }};
    if (param) opts.push_back([] { return t_var(); });
    for (int j = 0; j < owner; ++j) opts.push_back([this, j, param] { return instantiate(j, param); });
    if (recursive && chance(0.4))
      return data_[owner].param ? t_data(owner, {t_var()}) : t_data(owner);
    return choose(opts)();
  }

  void gen_data() {
    int n = 1 + pick(shape_.maxData);
    for (int i = 0; i < n; ++i) {
      RData d;
      d.name = "d" + std::to_string(i);
      d.param = chance(0.4);
      data_.push_back(d);
      int ctors = 1 + pick(3);
      for (int c = 0; c < ctors; ++c) {
        RCtor k;
        k.name = "C" + std::to_string(i) + std::to_string(c);
        int fields = c == 0 ? pick(3) : pick(4);
        for (int f = 0; f < fields; ++f) k.fields.push_back(field_type(i, d.param, c > 0));
        data_.back().ctors.push_back(k);
      }
    }
  }

  RType base_type(bool poly) {
    int r = pick(poly ? 7 : 6);
    if (r == 0) return t_int();
    if (r == 1) return t_bool();
    if (r == 6) return t_var();
    return instantiate(pick(static_cast<int>(data_.size())), poly);
  }

  RType any_type(bool poly) {
    if (chance(0.15)) return t_fun(base_type(poly), base_type(poly));
    return base_type(poly);
  }

  void gen_fun_types() {
    int n = 1 + pick(shape_.maxFuns);
    for (int i = 0; i < n; ++i) {
      RFun f;
      f.name = "f" + std::to_string(i);
      f.poly = chance(0.35);
      int params = 1 + pick(3);
      for (int k = 0; k < params; ++k) f.params.push_back(any_type(f.poly));
      if (f.poly) f.params[static_cast<std::size_t>(pick(params))] = t_var();
      f.result = chance(0.1) ? t_fun(base_type(f.poly), base_type(f.poly)) : base_type(f.poly);
      funs_.push_back(f);
    }
  }

  std::string data_text(const RData& d) const {
    std::string s = "datatype " + std::string(d.param ? "'a " : "") + d.name + " =";
    for (std::size_t c = 0; c < d.ctors.size(); ++c) {
      s += (c ? " | " : " ") + d.ctors[c].name;
      for (const auto& f : d.ctors[c].fields) s += " " + show(f);
    }
    return s + "\n";
  }

  std::vector<RType> ctor_fields(const RType& t, std::size_t c) const {
    std::vector<RType> out;
    for (const auto& f : data_[t.data].ctors[c].fields)
      out.push_back(data_[t.data].param ? subst(f, t.args[0]) : f);
    return out;
  }

  std::string value(const RType& t, int depth) {
    switch (t.kind) {
      case RType::Int:
      case RType::Var:
        return std::to_string(pick(10));
      case RType::Bool:
        return chance(0.5) ? "True" : "False";
      case RType::Data: {
        std::size_t c = depth <= 0 ? 0 : static_cast<std::size_t>(pick(static_cast<int>(data_[t.data].ctors.size())));
        std::string s = data_[t.data].ctors[c].name;
        for (const auto& f : ctor_fields(t, c)) s += " " + wrap(value(f, depth - 1));
        return s;
      }
      case RType::Fun:
        break;
    }
    throw std::logic_error("no ground values of function type");
  }

  std::string fresh(const char* base) { return base + std::to_string(counter_++); }

  std::string pattern(const RType& t, int depth, bool inner, Ctx& ctx, const RType* firstParam) {
    if (t.kind == RType::Data && depth > 0 && chance(0.65)) {
      std::size_t c = static_cast<std::size_t>(pick(static_cast<int>(data_[t.data].ctors.size())));
      std::string s = data_[t.data].ctors[c].name;
      for (const auto& f : ctor_fields(t, c)) s += " " + wrap(pattern(f, depth - 1, true, ctx, firstParam));
      return s;
    }
    if (chance(0.25)) return "_";
    std::string v = fresh("v");
    ctx.env.push_back({v, t});
    if (inner && firstParam && t == *firstParam) ctx.smaller.push_back(v);
    return v;
  }

  std::string fun_text(int i) {
    const RFun& f = funs_[i];
    counter_ = 0;
    std::string s = "fun " + f.name + " ::";
    for (const auto& p : f.params) s += " " + show(p) + " =>";
    s += " " + show(f.result) + " where\n";
    bool matchable = false;
    for (const auto& p : f.params) matchable = matchable || p.kind == RType::Data;
    int rows = matchable ? 1 + pick(3) : 1;
    bool total = chance(0.6);
    for (int r = 0; r < rows; ++r) {
      Ctx ctx;
      ctx.poly = f.poly;
      ctx.self = i;
      ctx.limit = i;
      bool catchAll = r == rows - 1 && total;
      std::string lhs = f.name;
      for (std::size_t k = 0; k < f.params.size(); ++k) {
        int depth = catchAll ? 0 : shape_.maxPatternDepth;
        lhs += " " + wrap(pattern(f.params[k], depth, false, ctx, k == 0 ? &f.params[0] : nullptr));
      }
      // a parameter of type 'a is always bound somewhere so 'a stays inhabited
      if (f.poly) {
        bool has = false;
        for (const auto& b : ctx.env) has = has || b.type.kind == RType::Var;
        if (!has) {
          lhs = f.name;
          ctx.env.clear();
          ctx.smaller.clear();
          for (std::size_t k = 0; k < f.params.size(); ++k) {
            std::string v = fresh("v");
            ctx.env.push_back({v, f.params[k]});
            lhs += " " + v;
          }
        }
      }
      s += (r ? "| " : "  ") + lhs + " = " + term(f.result, ctx, 3) + "\n";
    }
    return s;
  }

  std::string leaf(const RType& t, Ctx& ctx) {
    for (const auto& b : ctx.env)
      if (b.type == t && chance(0.7)) return b.name;
    switch (t.kind) {
      case RType::Int:
        return std::to_string(pick(10));
      case RType::Bool:
        return chance(0.5) ? "True" : "False";
      case RType::Var:
        for (const auto& b : ctx.env)
          if (b.type == t) return b.name;
        throw std::logic_error("uninhabited type variable");
      case RType::Data: {
        std::string s = data_[t.data].ctors[0].name;
        for (const auto& f : ctor_fields(t, 0)) s += " " + wrap(leaf(f, ctx));
        return s;
      }
      case RType::Fun: {
        std::string w = fresh("w");
        Ctx inner = ctx;
        inner.env.push_back({w, t.args[0]});
        return "(\\" + w + ". " + leaf(t.args[1], inner) + ")";
      }
    }
    return "?";
  }

  std::vector<Head> heads(bool poly, int limit, const Ctx& ctx) {
    std::vector<Head> hs;
    auto bin = [&](const char* n, RType a, RType r) { hs.push_back({n, {a, a}, r}); };
    bin("int_plus", t_int(), t_int());
    bin("int_minus", t_int(), t_int());
    bin("int_times", t_int(), t_int());
    bin("int_less", t_int(), t_bool());
    bin("int_eq", t_int(), t_bool());
    bin("conj", t_bool(), t_bool());
    bin("disj", t_bool(), t_bool());
    hs.push_back({"not", {t_bool()}, t_bool()});
    std::vector<RType> insts = {t_int()};
    if (poly) insts.push_back(t_var());
    for (std::size_t d = 0; d < data_.size(); ++d)
      for (const auto& a : data_[d].param ? insts : std::vector<RType>{t_int()}) {
        RType t = data_[d].param ? t_data(static_cast<int>(d), {a}) : t_data(static_cast<int>(d));
        for (std::size_t c = 0; c < data_[d].ctors.size(); ++c)
          if (!data_[d].ctors[c].fields.empty()) hs.push_back({data_[d].ctors[c].name, ctor_fields(t, c), t});
      }
    for (int j = 0; j < limit; ++j) {
      const RFun& f = funs_[j];
      for (const auto& a : f.poly ? insts : std::vector<RType>{t_int()}) {
        Head h{f.name, {}, subst(f.result, a)};
        for (const auto& p : f.params) h.params.push_back(subst(p, a));
        hs.push_back(h);
      }
    }
    for (const auto& b : ctx.env)
      if (b.type.kind == RType::Fun) hs.push_back({b.name, {b.type.args[0]}, b.type.args[1]});
    return hs;
  }

  std::string case_term(const RType& t, Ctx& ctx, int depth) {
    std::vector<Binding> scrutinees;
    for (const auto& b : ctx.env)
      if (b.type.kind == RType::Data) scrutinees.push_back(b);
    std::string scr;
    RType st;
    std::vector<int> plain;
    for (std::size_t d = 0; d < data_.size(); ++d)
      if (!data_[d].param) plain.push_back(static_cast<int>(d));
    if (scrutinees.empty() && plain.empty()) return term(t, ctx, depth - 1);
    // a computed scrutinee of a parametric type could leave its instance open
    if (!scrutinees.empty() && (plain.empty() || chance(0.7))) {
      const Binding& b = choose(scrutinees);
      scr = b.name;
      st = b.type;
    } else {
      st = t_data(choose(plain));
      scr = term(st, ctx, depth - 1);
    }
    int clauses = 1 + pick(3);
    bool total = chance(0.75);
    std::string s = "(case " + scr + " of ";
    for (int c = 0; c < clauses; ++c) {
      Ctx inner = ctx;
      bool last = c == clauses - 1 && total;
      std::string p = pattern(st, last ? 0 : 2, false, inner, nullptr);
      s += (c ? " | " : "") + p + " => " + term(t, inner, depth - 1);
    }
    return s + ")";
  }

  std::string term(const RType& t, Ctx& ctx, int depth) {
    if (depth <= 0) return leaf(t, ctx);
    std::vector<std::function<std::string()>> opts;
    for (const auto& b : ctx.env)
      if (b.type == t) opts.push_back([n = b.name] { return n; });
    if (t.kind == RType::Int) opts.push_back([this] { return std::to_string(pick(10)); });
    if (t.kind == RType::Bool) opts.push_back([this] { return std::string(chance(0.5) ? "True" : "False"); });
    if (t.kind == RType::Data) {
      opts.push_back([&, this] {
        std::size_t c = static_cast<std::size_t>(pick(static_cast<int>(data_[t.data].ctors.size())));
        std::string s = data_[t.data].ctors[c].name;
        for (const auto& f : ctor_fields(t, c)) s += " " + wrap(term(f, ctx, depth - 1));
        return s;
      });
    }
    if (t.kind == RType::Fun) {
      opts.push_back([&, this] {
        std::string w = fresh("w");
        Ctx inner = ctx;
        inner.env.push_back({w, t.args[0]});
        return "(\\" + w + ". " + term(t.args[1], inner, depth - 1) + ")";
      });
    }
    std::vector<std::pair<Head, std::size_t>> apps;
    for (auto& h : heads(ctx.poly, ctx.limit, ctx)) {
      std::vector<RType> chain = h.params;
      RType r = h.result;
      while (r.kind == RType::Fun) {
        chain.push_back(r.args[0]);
        RType next = r.args[1];
        r = next;
      }
      for (std::size_t k = 1; k <= chain.size(); ++k)
        if (arrows(chain, k, r) == t) apps.push_back({Head{h.text, chain, r}, k});
    }
    if (!apps.empty()) {
      for (int w = 0; w < 3; ++w)
        opts.push_back([&, this] {
          const auto& [h, k] = choose(apps);
          std::string s = h.text;
          for (std::size_t i = 0; i < k; ++i) s += " " + wrap(term(h.params[i], ctx, depth - 1));
          return s;
        });
    }
    if (ctx.self >= 0 && !ctx.smaller.empty() && funs_[ctx.self].result == t) {
      opts.push_back([&, this] {
        const RFun& f = funs_[ctx.self];
        std::string s = f.name + " " + choose(ctx.smaller);
        for (std::size_t i = 1; i < f.params.size(); ++i) s += " " + wrap(term(f.params[i], ctx, depth - 1));
        return s;
      });
    }
    opts.push_back([&, this] { return case_term(t, ctx, depth); });
    opts.push_back([&, this] {
      RType a = base_type(ctx.poly);
      if (a.kind == RType::Var || (a.kind == RType::Data && data_[a.data].param)) a = t_int();
      std::string w = fresh("w");
      Ctx inner = ctx;
      inner.env.push_back({w, a});
      return "(\\" + w + ". " + term(t, inner, depth - 1) + ") " + wrap(term(a, ctx, depth - 1));
    });
    return choose(opts)();
  }

  std::mt19937_64& rng_;
  ProgramShape shape_;
  std::vector<RData> data_;
  std::vector<RFun> funs_;
  int counter_ = 0;
};

// ---------------------------------------------------------------------------
// Programs over the semigroup/monoid hierarchy

struct HType {
  enum Kind { Nat, List, Option, Var } kind = Nat;
  std::vector<HType> args;
  friend bool operator==(const HType&, const HType&) = default;
};

HType h_nat() { return {HType::Nat, {}}; }
HType h_var() { return {HType::Var, {}}; }
HType h_list(HType a) { return {HType::List, {std::move(a)}}; }
HType h_option(HType a) { return {HType::Option, {std::move(a)}}; }

HType hsubst(const HType& t, const HType& a) {
  if (t.kind == HType::Var) return a;
  HType out = t;
  for (auto& x : out.args) x = hsubst(x, a);
  return out;
}

bool has_var(const HType& t) {
  if (t.kind == HType::Var) return true;
  for (const auto& a : t.args)
    if (has_var(a)) return true;
  return false;
}

std::string mangle(const HType& t) {
  switch (t.kind) {
    case HType::Nat:
      return "N";
    case HType::List:
      return "L" + mangle(t.args[0]);
    case HType::Option:
      return "O" + mangle(t.args[0]);
    case HType::Var:
      break;
  }
  throw std::logic_error("mangling an open type");
}

std::string hshow(const HType& t, std::string* annotation = nullptr) {
  switch (t.kind) {
    case HType::Nat:
      return "Nat";
    case HType::List:
      return "(" + hshow(t.args[0], annotation) + " list)";
    case HType::Option:
      return "(" + hshow(t.args[0], annotation) + " option)";
    case HType::Var:
      if (annotation && !annotation->empty()) {
        std::string s = "('a :: " + *annotation + ")";
        annotation->clear();
        return s;
      }
      return "'a";
  }
  return "?";
}

/// Matches `pattern` (which mentions 'a) against `t`.
std::optional<HType> unify(const HType& pattern, const HType& t) {
  if (pattern.kind == HType::Var) return t;
  if (pattern.kind != t.kind) return std::nullopt;
  if (pattern.args.empty()) return std::nullopt;
  return unify(pattern.args[0], t.args[0]);
}

struct HTerm {
  enum Kind { Var, Plus, Zero, Double, Sum, Call, Ctor, Case } kind = Var;
  std::string name;
  HType type;
  int fun = -1;
  std::vector<HTerm> args;
  std::vector<std::string> pats;
};

struct HFun {
  std::string name;
  bool poly = false;
  bool monoid = false;
  std::vector<HType> params;
  HType result;
  /// Equations: parameter patterns and right-hand side.
  std::vector<std::pair<std::vector<std::string>, HTerm>> equations;
};

struct HBinding {
  std::string name;
  HType type;
};

const char* kHierarchyTypes =
    "datatype Nat = Zero | Suc Nat\n"
    "datatype 'a list = Nil | Cons 'a ('a list)\n"
    "datatype 'a option = None | Some 'a\n"
    "fun fold :: ('a => 'b => 'b) => 'a list => 'b => 'b where\n"
    "  fold f Nil s = s\n"
    "| fold f (Cons x xs) s = fold f xs (f x s)\n";

const char* kHierarchyClasses =
    "class semigroup where\n"
    "  (+) :: 'a => 'a => 'a\n"
    "class monoid <= semigroup where\n"
    "  zero :: 'a\n"
    "instance Nat :: semigroup where\n"
    "  a + Zero = a\n"
    "  Zero + a = a\n"
    "  (Suc a) + b = Suc (a + b)\n"
    "instance Nat :: monoid where\n"
    "  zero = Zero\n"
    "instance 'a list :: semigroup when 'a :: semigroup where\n"
    "  (Cons x xs) + (Cons y ys) = Cons (x + y) (xs + ys)\n"
    "  xs + ys = Nil\n"
    "instance 'a list :: monoid when 'a :: monoid where\n"
    "  zero = Cons zero Nil\n"
    "instance 'a option :: semigroup when 'a :: semigroup where\n"
    "  (Some x) + (Some y) = Some (x + y)\n"
    "  None + y = y\n"
    "  x + None = x\n"
    "instance 'a option :: monoid when 'a :: semigroup where\n"
    "  zero = None\n"
    "fun sum :: ('a :: monoid) list => 'a where\n"
    "  sum xs = fold (+) xs zero\n"
    "fun double :: ('a :: semigroup) => 'a where\n"
    "  double x = x + x\n";

class HierarchyGen {
 public:
  explicit HierarchyGen(std::mt19937_64& rng) : rng_(rng) {}

  ErasureCase run() {
    int n = 2 + pick(4);
    for (int i = 0; i < n; ++i) gen_fun(i);
    ErasureCase out;
    out.classful = std::string(kHierarchyTypes) + kHierarchyClasses;
    for (const auto& f : funs_) out.classful += classful_text(f);
    std::string wrappers, specWrappers;
    int entries = 5 + pick(3);
    for (int k = 0; k < entries; ++k) {
      int j = pick(static_cast<int>(funs_.size()));
      const HFun& f = funs_[j];
      HType a = h_nat();
      if (f.poly)
        do a = ground(2);
        while (f.monoid && !monoid(a, false));
      std::string name = "e" + std::to_string(k);
      std::string sig = "fun " + name + " ::";
      std::string lhs = name, rhs = f.name, srhs = f.poly ? spec_name(j, a) : f.name, call = name;
      for (std::size_t p = 0; p < f.params.size(); ++p) {
        HType t = hsubst(f.params[p], a);
        sig += " " + hshow(t) + " =>";
        lhs += " x" + std::to_string(p);
        rhs += " x" + std::to_string(p);
        srhs += " x" + std::to_string(p);
        call += " " + value(t, 3);
      }
      sig += " " + hshow(hsubst(f.result, a)) + " where\n";
      wrappers += sig + "  " + lhs + " = " + rhs + "\n";
      specWrappers += sig + "  " + lhs + " = " + srhs + "\n";
      out.entries.push_back(call);
    }
    out.classful += wrappers;
    for (const auto& f : funs_)
      if (!f.poly) specialized_ += spec_text_mono(f);
    while (!pending_.empty()) {
      auto [j, a] = pending_.back();
      pending_.pop_back();
      specialized_ += spec_text(j, a);
    }
    out.specialized = std::string(kHierarchyTypes) + helpers_ + specialized_ + specWrappers;
    return out;
  }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  HType ground(int depth) {
    int r = depth <= 0 ? 0 : pick(3);
    if (r == 0) return h_nat();
    return r == 1 ? h_list(ground(depth - 1)) : h_option(ground(depth - 1));
  }

  HType open(int depth, bool poly) {
    int r = depth <= 0 ? 0 : pick(4);
    if (r == 0) return poly && chance(0.6) ? h_var() : h_nat();
    if (r == 3) return poly ? h_var() : h_nat();
    return r == 1 ? h_list(open(depth - 1, poly)) : h_option(open(depth - 1, poly));
  }

  bool monoid(const HType& t, bool varIsMonoid) const {
    switch (t.kind) {
      case HType::Nat:
      case HType::Option:
        return true;
      case HType::List:
        return monoid(t.args[0], varIsMonoid);
      case HType::Var:
        return varIsMonoid;
    }
    return false;
  }

  std::string value(const HType& t, int depth) {
    switch (t.kind) {
      case HType::Nat: {
        std::string s = "Zero";
        for (int i = pick(4); i > 0; --i) s = "(Suc " + s + ")";
        return s;
      }
      case HType::List: {
        std::string s = "Nil";
        for (int i = depth <= 0 ? 0 : pick(4); i > 0; --i) s = "(Cons " + value(t.args[0], depth - 1) + " " + s + ")";
        return s;
      }
      case HType::Option:
        return depth <= 0 || chance(0.3) ? "None" : "(Some " + value(t.args[0], depth - 1) + ")";
      case HType::Var:
        break;
    }
    throw std::logic_error("no values of an open type");
  }

  std::string fresh() { return "y" + std::to_string(counter_++); }

  void gen_fun(int i) {
    HFun f;
    f.name = "g" + std::to_string(i);
    f.poly = chance(0.6);
    f.monoid = f.poly && chance(0.5);
    int params = 1 + pick(3);
    for (int k = 0; k < params; ++k) f.params.push_back(open(2, f.poly));
    if (f.poly) {
      f.params[static_cast<std::size_t>(pick(params))] = h_var();
      int r = pick(3);
      f.result = r == 0 ? h_var() : r == 1 ? h_list(h_var()) : h_option(h_var());
    } else {
      f.result = open(2, false);
    }
    funs_.push_back(f);
    counter_ = 0;
    HFun& g = funs_.back();
    const HType& first = g.params[0];
    if (first.kind != HType::Var && chance(0.5)) {
      // one equation per constructor of the first parameter
      std::vector<std::pair<std::string, std::vector<HType>>> ctors;
      if (first.kind == HType::Nat) ctors = {{"Zero", {}}, {"Suc", {h_nat()}}};
      if (first.kind == HType::List) ctors = {{"Nil", {}}, {"Cons", {first.args[0], first}}};
      if (first.kind == HType::Option) ctors = {{"None", {}}, {"Some", {first.args[0]}}};
      for (const auto& [c, fields] : ctors) {
        std::vector<HBinding> env;
        std::string p = c;
        for (const auto& ft : fields) {
          std::string v = fresh();
          env.push_back({v, ft});
          p += " " + v;
        }
        std::vector<std::string> pats = {fields.empty() ? p : "(" + p + ")"};
        for (std::size_t k = 1; k < g.params.size(); ++k) {
          pats.push_back("x" + std::to_string(k));
          env.push_back({pats.back(), g.params[k]});
        }
        g.equations.push_back({pats, term(g.result, env, 3, i)});
      }
    } else {
      std::vector<HBinding> env;
      std::vector<std::string> pats;
      for (std::size_t k = 0; k < g.params.size(); ++k) {
        pats.push_back("x" + std::to_string(k));
        env.push_back({pats.back(), g.params[k]});
      }
      g.equations.push_back({pats, term(g.result, env, 3, i)});
    }
  }

  HTerm term(const HType& t, std::vector<HBinding>& env, int depth, int self) {
    const HFun& cur = funs_[self];
    std::vector<std::function<HTerm()>> opts;
    for (const auto& b : env)
      if (b.type == t) opts.push_back([n = b.name] { return HTerm{HTerm::Var, n, {}, -1, {}, {}}; });
    bool isMonoid = monoid(t, cur.monoid);
    auto ctor0 = [&]() -> std::optional<HTerm> {
      if (t.kind == HType::Nat) return HTerm{HTerm::Ctor, "Zero", t, -1, {}, {}};
      if (t.kind == HType::List) return HTerm{HTerm::Ctor, "Nil", t, -1, {}, {}};
      if (t.kind == HType::Option) return HTerm{HTerm::Ctor, "None", t, -1, {}, {}};
      return std::nullopt;
    };
    if (auto c = ctor0()) opts.push_back([c] { return *c; });
    if (isMonoid) opts.push_back([t] { return HTerm{HTerm::Zero, "", t, -1, {}, {}}; });
    if (depth <= 0) {
      if (opts.empty()) throw std::logic_error("uninhabited");
      return opts[static_cast<std::size_t>(pick(static_cast<int>(opts.size())))]();
    }
    auto sub = [&](const HType& st) { return term(st, env, depth - 1, self); };
    opts.push_back([&] { return HTerm{HTerm::Plus, "", t, -1, {sub(t), sub(t)}, {}}; });
    opts.push_back([&] { return HTerm{HTerm::Double, "", t, -1, {sub(t)}, {}}; });
    if (isMonoid) opts.push_back([&] { return HTerm{HTerm::Sum, "", t, -1, {sub(h_list(t))}, {}}; });
    if (t.kind == HType::Nat) opts.push_back([&] { return HTerm{HTerm::Ctor, "Suc", t, -1, {sub(t)}, {}}; });
    if (t.kind == HType::List)
      opts.push_back([&] { return HTerm{HTerm::Ctor, "Cons", t, -1, {sub(t.args[0]), sub(t)}, {}}; });
    if (t.kind == HType::Option)
      opts.push_back([&] { return HTerm{HTerm::Ctor, "Some", t, -1, {sub(t.args[0])}, {}}; });
    for (int j = 0; j < self; ++j) {
      const HFun& g = funs_[j];
      HType a = h_nat();
      if (g.poly) {
        auto u = unify(g.result, t);
        if (!u || (g.monoid && !monoid(*u, cur.monoid))) continue;
        a = *u;
      } else if (!(g.result == t)) {
        continue;
      }
      opts.push_back([&, j, a] {
        HTerm c{HTerm::Call, funs_[j].name, a, j, {}, {}};
        for (const auto& p : funs_[j].params) c.args.push_back(sub(hsubst(p, a)));
        return c;
      });
    }
    std::vector<HBinding> scrutinees;
    for (const auto& b : env)
      if (b.type.kind != HType::Var) scrutinees.push_back(b);
    if (!scrutinees.empty()) {
      opts.push_back([&] {
        HBinding s = scrutinees[static_cast<std::size_t>(pick(static_cast<int>(scrutinees.size())))];
        HTerm c{HTerm::Case, s.name, s.type, -1, {}, {}};
        std::vector<std::pair<std::string, std::vector<HType>>> ctors;
        if (s.type.kind == HType::Nat) ctors = {{"Zero", {}}, {"Suc", {h_nat()}}};
        if (s.type.kind == HType::List) ctors = {{"Nil", {}}, {"Cons", {s.type.args[0], s.type}}};
        if (s.type.kind == HType::Option) ctors = {{"None", {}}, {"Some", {s.type.args[0]}}};
        bool wildcardLast = chance(0.5);
        for (std::size_t k = 0; k < ctors.size(); ++k) {
          std::size_t before = env.size();
          std::string p;
          if (wildcardLast && k + 1 == ctors.size()) {
            p = "_";
          } else {
            p = ctors[k].first;
            for (const auto& ft : ctors[k].second) {
              std::string v = fresh();
              env.push_back({v, ft});
              p += " " + v;
            }
          }
          c.pats.push_back(p);
          c.args.push_back(sub(t));
          env.resize(before);
        }
        return c;
      });
    }
    return opts[static_cast<std::size_t>(pick(static_cast<int>(opts.size())))]();
  }

  std::string classful(const HTerm& t) const {
    switch (t.kind) {
      case HTerm::Var:
        return t.name;
      case HTerm::Plus:
        return "(" + classful(t.args[0]) + " + " + classful(t.args[1]) + ")";
      case HTerm::Zero:
        return "zero";
      case HTerm::Double:
        return "(double " + classful(t.args[0]) + ")";
      case HTerm::Sum:
        return "(sum " + classful(t.args[0]) + ")";
      case HTerm::Call:
      case HTerm::Ctor: {
        if (t.args.empty()) return t.name;
        std::string s = "(" + t.name;
        for (const auto& a : t.args) s += " " + classful(a);
        return s + ")";
      }
      case HTerm::Case: {
        std::string s = "(case " + t.name + " of ";
        for (std::size_t k = 0; k < t.pats.size(); ++k)
          s += (k ? " | " : "") + t.pats[k] + " => " + classful(t.args[k]);
        return s + ")";
      }
    }
    return "?";
  }

  std::string classful_text(const HFun& f) const {
    std::string constraint = f.poly ? (f.monoid ? "monoid" : "semigroup") : "";
    std::string s = "fun " + f.name + " ::";
    for (const auto& p : f.params) s += " " + hshow(p, &constraint) + " =>";
    s += " " + hshow(f.result, &constraint) + " where\n";
    return s + equations_text(f, [this](const HTerm& t) { return classful(t); });
  }

  std::string equations_text(const HFun& f, const std::function<std::string(const HTerm&)>& body) const {
    std::string s;
    for (std::size_t e = 0; e < f.equations.size(); ++e) {
      s += (e ? "| " : "  ") + f.name;
      for (const auto& p : f.equations[e].first) s += " " + p;
      s += " = " + body(f.equations[e].second) + "\n";
    }
    return s;
  }

  // Hand-specialised method instances, emitted once per ground type.

  std::string plus(const HType& t) {
    std::string m = mangle(t), n = "plus_" + m;
    if (!done_.insert(n).second) return n;
    std::string ty = hshow(t);
    std::string s = "fun " + n + " :: " + ty + " => " + ty + " => " + ty + " where\n";
    if (t.kind == HType::Nat) {
      s += "  " + n + " a Zero = a\n| " + n + " Zero a = a\n| " + n + " (Suc a) b = Suc (" + n + " a b)\n";
    } else if (t.kind == HType::List) {
      std::string e = plus(t.args[0]);
      s += "  " + n + " (Cons x xs) (Cons y ys) = Cons (" + e + " x y) (" + n + " xs ys)\n| " + n + " xs ys = Nil\n";
    } else {
      std::string e = plus(t.args[0]);
      s += "  " + n + " (Some x) (Some y) = Some (" + e + " x y)\n| " + n + " None y = y\n| " + n + " x None = x\n";
    }
    helpers_ += s;
    return n;
  }

  std::string zero(const HType& t) {
    std::string n = "zero_" + mangle(t);
    if (!done_.insert(n).second) return n;
    std::string rhs = t.kind == HType::Nat ? "Zero" : t.kind == HType::List ? "Cons " + zero(t.args[0]) + " Nil" : "None";
    helpers_ += "definition " + n + " :: " + hshow(t) + " where\n  " + n + " = " + rhs + "\n";
    return n;
  }

  std::string dbl(const HType& t) {
    std::string n = "double_" + mangle(t);
    if (!done_.insert(n).second) return n;
    std::string p = plus(t);
    helpers_ += "fun " + n + " :: " + hshow(t) + " => " + hshow(t) + " where\n  " + n + " x = " + p + " x x\n";
    return n;
  }

  std::string sum(const HType& t) {
    std::string n = "sum_" + mangle(t);
    if (!done_.insert(n).second) return n;
    std::string p = plus(t), z = zero(t);
    helpers_ += "fun " + n + " :: " + hshow(h_list(t)) + " => " + hshow(t) + " where\n  " + n + " xs = fold " + p +
                " xs " + z + "\n";
    return n;
  }

  std::string spec_name(int j, const HType& a) {
    std::string n = funs_[j].name + "_" + mangle(a);
    if (done_.insert(n).second) pending_.push_back({j, a});
    return n;
  }

  std::string specialize(const HTerm& t, const HType& a) {
    auto at = [&](const HType& x) { return hsubst(x, a); };
    switch (t.kind) {
      case HTerm::Var:
        return t.name;
      case HTerm::Plus:
        return "(" + plus(at(t.type)) + " " + specialize(t.args[0], a) + " " + specialize(t.args[1], a) + ")";
      case HTerm::Zero:
        return zero(at(t.type));
      case HTerm::Double:
        return "(" + dbl(at(t.type)) + " " + specialize(t.args[0], a) + ")";
      case HTerm::Sum:
        return "(" + sum(at(t.type)) + " " + specialize(t.args[0], a) + ")";
      case HTerm::Call:
      case HTerm::Ctor: {
        std::string head = t.name;
        if (t.kind == HTerm::Call && funs_[t.fun].poly) head = spec_name(t.fun, at(t.type));
        if (t.args.empty()) return head;
        std::string s = "(" + head;
        for (const auto& x : t.args) s += " " + specialize(x, a);
        return s + ")";
      }
      case HTerm::Case: {
        std::string s = "(case " + t.name + " of ";
        for (std::size_t k = 0; k < t.pats.size(); ++k)
          s += (k ? " | " : "") + t.pats[k] + " => " + specialize(t.args[k], a);
        return s + ")";
      }
    }
    return "?";
  }

  std::string spec_text(int j, const HType& a) {
    const HFun& f = funs_[j];
    HFun copy = f;
    copy.name = f.name + "_" + mangle(a);
    std::string s = "fun " + copy.name + " ::";
    for (const auto& p : f.params) s += " " + hshow(hsubst(p, a)) + " =>";
    s += " " + hshow(hsubst(f.result, a)) + " where\n";
    return s + equations_text(copy, [&](const HTerm& t) { return specialize(t, a); });
  }

  std::string spec_text_mono(const HFun& f) {
    std::string s = "fun " + f.name + " ::";
    for (const auto& p : f.params) s += " " + hshow(p) + " =>";
    s += " " + hshow(f.result) + " where\n";
    return s + equations_text(f, [&](const HTerm& t) { return specialize(t, h_nat()); });
  }

  std::mt19937_64& rng_;
  std::vector<HFun> funs_;
  int counter_ = 0;
  std::set<std::string> done_;
  std::vector<std::pair<int, HType>> pending_;
  std::string helpers_;
  std::string specialized_;
};

}  // namespace

GeneratedProgram random_program(std::mt19937_64& rng, const ProgramShape& shape) {
  return ProgramGen(rng, shape).run();
}

ErasureCase random_hierarchy_program(std::mt19937_64& rng) { return HierarchyGen(rng).run(); }

std::string random_rbt_tree(std::mt19937_64& rng, int maxDepth) {
  std::bernoulli_distribution leaf(0.2), red(0.5);
  std::uniform_int_distribution<int> key(0, 9);
  std::function<std::string(int)> go = [&](int d) -> std::string {
    if (d <= 0 || leaf(rng)) return "Leaf";
    std::string l = go(d - 1);
    std::string k = std::to_string(key(rng));
    std::string c = red(rng) ? "Red" : "Black";
    return "(Node " + l + " (Pair " + k + " " + c + ") " + go(d - 1) + ")";
  };
  return go(maxDepth);
}

}  // namespace fgo::test
