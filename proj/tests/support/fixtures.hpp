#pragma once

#include <string>

#include "fgo/ir.hpp"

namespace fgo::test {

std::string fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);
/// Parses a fixture and fails loudly if it does not elaborate.
ir::Program load_fixture(const std::string& name);
ir::Program parse_or_throw(const std::string& src);

}  // namespace fgo::test
