#include "fgo/emit.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "fgo/dict_pass.hpp"
#include "fgo/oracle.hpp"
#include "fgo/parser.hpp"

namespace fgo::emit {

using nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kUsage, "cannot read " + path};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kToolchainError, "cannot write " + path.string()};
  out << text;
}

int code_of(parser::DiagKind k) {
  return k == parser::DiagKind::Lex || k == parser::DiagKind::Parse ? kParseError : kTypeError;
}

[[noreturn]] void fail_diagnostics(const std::vector<parser::Diagnostic>& ds) {
  std::string msg;
  int code = kTypeError;
  for (const auto& d : ds) {
    msg += parser::format(d) + "\n";
    code = std::min(code, code_of(d.kind));
  }
  if (!msg.empty()) msg.pop_back();
  throw Failure{code, msg};
}

ordered_json type_json(const ir::TypeExpr& t) {
  switch (t.kind()) {
    case ir::TypeExpr::Kind::Var:
      return {{"kind", "var"}, {"name", t.name()}};
    case ir::TypeExpr::Kind::Con: {
      ordered_json args = ordered_json::array();
      for (const auto& a : t.args()) args.push_back(type_json(a));
      return {{"kind", "con"}, {"name", t.name()}, {"args", args}};
    }
    case ir::TypeExpr::Kind::Fun:
      return {{"kind", "fun"}, {"arg", type_json(t.arg())}, {"result", type_json(t.result())}};
  }
  return nullptr;
}

ordered_json types_json(const std::vector<ir::TypeExpr>& ts) {
  ordered_json out = ordered_json::array();
  for (const auto& t : ts) out.push_back(type_json(t));
  return out;
}

ordered_json pattern_json(const ir::Pattern& p) {
  if (p.is_var()) return {{"kind", "pvar"}, {"name", p.name()}};
  ordered_json subs = ordered_json::array();
  for (const auto& s : p.subpatterns()) subs.push_back(pattern_json(s));
  return {{"kind", "pcon"}, {"name", p.name()}, {"typeArgs", types_json(p.type_args())},
          {"subpatterns", subs}};
}

ordered_json scalar_json(const prim::Scalar& s) {
  if (const auto* b = std::get_if<bool>(&s)) return *b;
  if (const auto* str = std::get_if<std::string>(&s)) return *str;
  return prim::render(s);
}

ordered_json term_json(const ir::Term& t) {
  using K = ir::Term::Kind;
  switch (t.kind()) {
    case K::Var:
      return {{"kind", "var"}, {"name", t.name()}};
    case K::Ref:
      return {{"kind", "ref"}, {"name", t.name()}, {"typeArgs", types_json(t.type_args())}};
    case K::App:
      return {{"kind", "app"}, {"fun", term_json(t.fun())}, {"arg", term_json(t.arg())}};
    case K::Abs:
      return {{"kind", "abs"}, {"name", t.name()}, {"type", type_json(t.type())},
              {"body", term_json(t.body())}};
    case K::Case: {
      ordered_json clauses = ordered_json::array();
      for (const auto& c : t.clauses())
        clauses.push_back({{"pattern", pattern_json(c.pattern)}, {"body", term_json(c.body)}});
      return {{"kind", "case"}, {"scrutinee", term_json(t.scrutinee())},
              {"type", type_json(t.type())}, {"clauses", clauses}};
    }
    case K::Lit:
      return {{"kind", "lit"}, {"value", scalar_json(t.literal().value)},
              {"type", type_json(t.literal().type)}};
    case K::Field:
      return {{"kind", "field"}, {"target", term_json(t.target())}, {"data", t.name()},
              {"index", t.index()}, {"methodArity", t.method_arity()}};
    case K::MethodValue:
      return {{"kind", "methodValue"}, {"body", term_json(t.body())}, {"arity", t.index()}};
  }
  return nullptr;
}

ordered_json equations_json(const std::vector<ir::Equation>& eqs) {
  ordered_json out = ordered_json::array();
  for (const auto& e : eqs) {
    ordered_json ps = ordered_json::array();
    for (const auto& p : e.params) ps.push_back(pattern_json(p));
    out.push_back({{"params", ps}, {"rhs", term_json(e.rhs)}});
  }
  return out;
}

ordered_json constraints_json(const std::vector<ir::Constraint>& cs) {
  ordered_json out = ordered_json::array();
  for (const auto& c : cs) out.push_back({{"var", c.var}, {"class", c.className}});
  return out;
}

struct DeclJson {
  ordered_json operator()(const ir::DataDecl& d) const {
    ordered_json ctors = ordered_json::array();
    for (const auto& c : d.ctors) ctors.push_back({{"name", c.name}, {"fields", types_json(c.fields)}});
    ordered_json j = {{"kind", "data"}, {"name", d.name}, {"tyParams", d.tyParams}, {"ctors", ctors}};
    if (d.dict)
      j["dict"] = {{"className", d.dict->className},
                   {"fieldNames", d.dict->fieldNames},
                   {"methodArity", d.dict->methodArity}};
    return j;
  }
  ordered_json operator()(const ir::FunDecl& f) const {
    return {{"kind", "fun"},
            {"name", f.name},
            {"tyParams", f.tyParams},
            {"constraints", constraints_json(f.constraints)},
            {"signature", type_json(f.signature)},
            {"dictParams", f.dictParams},
            {"equations", equations_json(f.equations)}};
  }
  ordered_json operator()(const ir::ClassDecl& c) const {
    ordered_json ms = ordered_json::array();
    for (const auto& m : c.methods) ms.push_back({{"name", m.name}, {"signature", type_json(m.signature)}});
    return {{"kind", "class"}, {"name", c.name}, {"tyParam", c.tyParam},
            {"superclasses", c.superclasses}, {"methods", ms}};
  }
  ordered_json operator()(const ir::InstanceDecl& i) const {
    ordered_json ms = ordered_json::array();
    for (const auto& m : i.methods) ms.push_back({{"name", m.name}, {"equations", equations_json(m.equations)}});
    return {{"kind", "instance"},
            {"class", i.className},
            {"tyCon", i.tyCon},
            {"tyParams", i.tyParams},
            {"constraints", constraints_json(i.constraints)},
            {"methods", ms}};
  }
  ordered_json operator()(const ir::ConstDecl& c) const {
    return {{"kind", "const"}, {"name", c.name}, {"tyParams", c.tyParams},
            {"signature", type_json(c.signature)}, {"rhs", term_json(c.rhs)}};
  }
};

codegen::AdaptationTable load_table(const CompileJob& job) {
  auto table = codegen::AdaptationTable::defaults();
  if (job.adaptPath) {
    try {
      table.merge(codegen::AdaptationTable::from_json(read_file(*job.adaptPath)));
    } catch (const codegen::CodegenError& e) {
      throw Failure{kCodegenError, e.what()};
    }
  }
  return table;
}

ir::Term entry_term(const ir::Program& source, const std::string& entry, const std::string& args) {
  ir::Index idx(source);
  if (!idx.fun(entry) && !idx.constant(entry))
    throw Failure{kTypeError, "unknown entry function " + entry};
  auto r = parser::parse_term(source, entry + " " + args);
  if (!r.term) fail_diagnostics(r.diagnostics);
  return *r.term;
}

struct Outcome {
  int code = kOk;
  std::string text;
};

Outcome run_oracle(const Pipeline& pl, const ir::Term& t, std::uint64_t fuel) {
  ir::Term e;
  try {
    e = dict::elaborate_term(pl.source, t);
  } catch (const dict::DictError& err) {
    throw Failure{kTypeError, err.what()};
  }
  oracle::Options opts;
  opts.fuel = fuel;
  auto r = oracle::eval(pl.elaborated, e, {}, opts);
  Outcome o{kOk, oracle::render(r)};
  if (oracle::is_failure(r, oracle::Failure::Kind::MatchFailed)) o.code = kMatchFailed;
  if (oracle::is_failure(r, oracle::Failure::Kind::OutOfFuel)) o.code = kOutOfFuel;
  return o;
}

Outcome run_fragment(const Pipeline& pl, const ir::Term& t, std::uint64_t fuel) {
  ir::Term e;
  try {
    e = dict::elaborate_term(pl.source, t);
  } catch (const dict::DictError& err) {
    throw Failure{kTypeError, err.what()};
  }
  go::ExprP x;
  try {
    x = pl.generator->translate_expr(e);
  } catch (const codegen::CodegenError& err) {
    throw Failure{kCodegenError, err.what()};
  }
  go::EvalOptions opts;
  opts.fuel = fuel;
  auto r = go::geval_expr(pl.generator->program(), x, opts);
  Outcome o{kOk, codegen::render(r, *pl.generator)};
  if (const auto* f = std::get_if<go::GFailure>(&r))
    o.code = f->kind == go::GFailure::Kind::OutOfFuel ? kOutOfFuel : kMatchFailed;
  return o;
}

int toolchain_check(const std::filesystem::path& dir, const std::string& package, std::ostream& err) {
  const char* env = std::getenv("GO_BIN");
  std::string go = env && *env ? env : "go";
  if (!std::filesystem::exists(dir / "go.mod"))
    write_file(dir / "go.mod", "module " + package + "\n\ngo 1.18\n");
  std::string cmd = "cd '" + dir.string() + "' && '" + go + "' vet ./... && '" + go + "' build ./...";
  int status = std::system(cmd.c_str());
  if (status != 0) {
    err << "go toolchain failed (" << go << ")\n";
    return kToolchainError;
  }
  return kOk;
}

int compile(const CompileJob& job, std::ostream& out, std::ostream& err) {
  Pipeline pl = build(read_file(job.inputPath), load_table(job), job.packageName);
  const auto& gp = pl.generator->program();
  if (auto ds = go::check_wf(gp); !ds.empty()) {
    for (const auto& d : ds) err << d.decl << ": " << go::to_string(d.problem) << ": " << d.message << "\n";
    return kCodegenError;
  }
  std::filesystem::path dir(job.outputDir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  write_file(dir / (job.packageName + ".go"), go::render(gp));
  write_file(dir / (job.packageName + ".manifest.json"), manifest_json(*pl.generator));
  out << (dir / (job.packageName + ".go")).string() << "\n";
  if (job.goCheck) return toolchain_check(dir, job.packageName, err);
  return kOk;
}

int check(const CompileJob& job, std::ostream& out, std::ostream& err) {
  Pipeline pl = build(read_file(job.inputPath), load_table(job), job.packageName);
  auto ds = go::check_wf(pl.generator->program());
  for (const auto& d : ds) err << d.decl << ": " << go::to_string(d.problem) << ": " << d.message << "\n";
  if (!ds.empty()) return kCodegenError;
  out << "ok\n";
  return kOk;
}

int run(const CompileJob& job, std::ostream& out) {
  bool go = job.engine == Engine::Go;
  Pipeline pl = build(read_file(job.inputPath), load_table(job), job.packageName, go);
  ir::Term t = entry_term(pl.source, job.entry, job.args);
  Outcome o = go ? run_fragment(pl, t, job.fuel) : run_oracle(pl, t, job.fuel);
  out << o.text << "\n";
  return o.code;
}

int vectors(const CompileJob& job, std::ostream& out) {
  Pipeline pl = build(read_file(job.inputPath), load_table(job), job.packageName);
  ordered_json spec;
  try {
    spec = ordered_json::parse(read_file(job.specPath));
  } catch (const ordered_json::exception& e) {
    throw Failure{kUsage, std::string("bad vector spec: ") + e.what()};
  }
  if (!spec.is_array()) throw Failure{kUsage, "vector spec must be a JSON array"};
  const auto& values = pl.generator->names().values;
  ordered_json result = ordered_json::array();
  for (const auto& item : spec) {
    std::string entry = item.at("entry").get<std::string>();
    std::vector<std::string> args = item.value("args", std::vector<std::string>{});
    auto goName = values.find(entry);
    if (goName == values.end()) throw Failure{kTypeError, "unknown entry function " + entry};
    ordered_json v = {{"entry", goName->second}, {"args", args}};
    if (std::find(args.begin(), args.end(), "nil") != args.end()) {
      v["expectedPanic"] = true;
      result.push_back(v);
      continue;
    }
    std::string joined;
    for (const auto& a : args) joined += "(" + a + ") ";
    Outcome o = run_oracle(pl, entry_term(pl.source, entry, joined), job.fuel);
    if (o.code == kOutOfFuel) throw Failure{kOutOfFuel, "out of fuel running " + entry};
    if (o.code == kMatchFailed)
      v["expectedPanic"] = true;
    else
      v["expected"] = o.text;
    result.push_back(v);
  }
  out << result.dump(2) << "\n";
  return kOk;
}

int dump(const CompileJob& job, std::ostream& out) {
  Pipeline pl = build(read_file(job.inputPath), load_table(job), job.packageName, false);
  out << ir_json(job.elaborated ? pl.elaborated : pl.source) << "\n";
  return kOk;
}

}  // namespace

Pipeline build(std::string_view src, const codegen::AdaptationTable& table, const std::string& package,
               bool generate) {
  auto parsed = parser::parse_program(src);
  if (!parsed.program) fail_diagnostics(parsed.diagnostics);
  Pipeline pl;
  pl.source = *parsed.program;
  try {
    pl.elaborated = dict::elaborate(pl.source);
  } catch (const dict::DictError& e) {
    throw Failure{kTypeError, e.what()};
  } catch (const ir::TypeError& e) {
    throw Failure{kTypeError, e.message};
  }
  if (!generate) return pl;
  try {
    pl.generator = std::make_unique<codegen::Generator>(pl.elaborated, table, package);
  } catch (const codegen::CodegenError& e) {
    throw Failure{kCodegenError, e.what()};
  } catch (const ir::TypeError& e) {
    throw Failure{kCodegenError, e.message};
  }
  return pl;
}

bool valid_package_name(std::string_view name) {
  if (name.empty() || !(std::islower(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char c : name)
    if (!(std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  static const char* keywords[] = {"break", "case", "chan", "const", "continue", "default", "defer",
                                   "else", "fallthrough", "for", "func", "go", "goto", "if", "import",
                                   "interface", "map", "package", "range", "return", "select", "struct",
                                   "switch", "type", "var", "_"};
  for (const char* k : keywords)
    if (name == k) return false;
  return true;
}

std::string ir_json(const ir::Program& p) {
  ordered_json decls = ordered_json::array();
  for (const auto& d : p.decls) decls.push_back(std::visit(DeclJson{}, d));
  return ordered_json{{"decls", decls}}.dump(2);
}

std::string manifest_json(const codegen::Generator& g) {
  const auto& n = g.names();
  ordered_json j = {{"package", g.program().package},
                    {"imports", g.program().imports},
                    {"types", n.types},
                    {"ctors", n.ctors},
                    {"destructors", n.destructors},
                    {"values", n.values}};
  return j.dump(2) + "\n";
}

int execute(const CompileJob& job, std::ostream& out, std::ostream& err) {
  try {
    if (!valid_package_name(job.packageName)) throw Failure{kUsage, "invalid package name " + job.packageName};
    switch (job.mode) {
      case Mode::Compile:
        return compile(job, out, err);
      case Mode::Check:
        return check(job, out, err);
      case Mode::Run:
        return run(job, out);
      case Mode::Vectors:
        return vectors(job, out);
      case Mode::DumpIr:
        return dump(job, out);
    }
  } catch (const Failure& f) {
    err << f.message << "\n";
    return f.code;
  }
  return kUsage;
}

}  // namespace fgo::emit
