#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fgo/go_ast.hpp"

namespace fgo::test {

/// Go tokens of `text` with layout and `;` dropped.
std::vector<std::string> go_tokens(std::string_view text);
bool same_tokens(std::string_view a, std::string_view b);
/// First differing token position, for failure messages.
std::string token_diff(std::string_view a, std::string_view b);

/// Renames identifiers (whole tokens only).
std::string alpha_rename(std::string_view text, const std::map<std::string, std::string>& renaming);

/// The named declarations of `p`, in program order, without the package header.
std::string render_decls(const go::Program& p, const std::vector<std::string>& names,
                         const go::RenderOptions& opts = {});

/// Number of top-level `{ ... }` clause blocks in the body of function `name`.
std::size_t clause_blocks(const go::Program& p, const std::string& name);

}  // namespace fgo::test
