#pragma once

// Primitive base values and the built-in operations over them. These back
// the adapted types (int, nat, bool, string) in both evaluators.

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fgo/bigint.hpp"

namespace fgo::prim {

using Scalar = std::variant<bool, BigInt, std::string>;

inline constexpr std::string_view kInt = "int";
inline constexpr std::string_view kNat = "nat";
inline constexpr std::string_view kBool = "bool";
inline constexpr std::string_view kString = "string";

bool is_base_type(std::string_view name);

struct PrimOp {
  std::string name;
  std::vector<std::string> argTypes;
  std::string resultType;
  std::function<Scalar(std::span<const Scalar>)> apply;
};

const std::vector<PrimOp>& ops();
const PrimOp* find(std::string_view name);

/// Canonical rendering shared by the oracle and the fragment evaluator.
std::string render(const Scalar& s);
std::string quote(std::string_view text);

}  // namespace fgo::prim
