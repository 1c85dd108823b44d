#include "support/fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fgo/parser.hpp"

namespace fgo::test {

std::string fixture_path(const std::string& name) {
  return std::string(FGO_FIXTURE_DIR) + "/" + name;
}

std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ir::Program parse_or_throw(const std::string& src) {
  auto r = parser::parse_program(src);
  if (!r.program) {
    std::string msg = "parse failed:";
    for (const auto& d : r.diagnostics) msg += "\n  " + parser::format(d);
    throw std::runtime_error(msg);
  }
  return *r.program;
}

ir::Program load_fixture(const std::string& name) { return parse_or_throw(read_fixture(name)); }

}  // namespace fgo::test
