#include "fgo/prim.hpp"

#include <cstdio>

namespace fgo::prim {

namespace {

const BigInt& as_int(const Scalar& s) { return std::get<BigInt>(s); }
bool as_bool(const Scalar& s) { return std::get<bool>(s); }
const std::string& as_str(const Scalar& s) { return std::get<std::string>(s); }

PrimOp binary_int(std::string name, std::string type,
                  BigInt (*f)(const BigInt&, const BigInt&)) {
  return PrimOp{std::move(name),
                {type, type},
                type,
                [f](std::span<const Scalar> a) -> Scalar {
                  return f(as_int(a[0]), as_int(a[1]));
                }};
}

PrimOp compare_int(std::string name, std::string type,
                   bool (*f)(const BigInt&, const BigInt&)) {
  return PrimOp{std::move(name),
                {type, type},
                std::string(kBool),
                [f](std::span<const Scalar> a) -> Scalar {
                  return f(as_int(a[0]), as_int(a[1]));
                }};
}

std::vector<PrimOp> make_ops() {
  const std::string i(kInt), n(kNat), b(kBool), s(kString);
  auto add = [](const BigInt& x, const BigInt& y) { return x + y; };
  auto sub = [](const BigInt& x, const BigInt& y) { return x - y; };
  auto mul = [](const BigInt& x, const BigInt& y) { return x * y; };
  auto monus = [](const BigInt& x, const BigInt& y) {
    BigInt r = x - y;
    return r.sign() < 0 ? BigInt(0) : r;
  };
  auto lt = [](const BigInt& x, const BigInt& y) { return x < y; };
  auto le = [](const BigInt& x, const BigInt& y) { return x <= y; };
  auto eq = [](const BigInt& x, const BigInt& y) { return x == y; };

  std::vector<PrimOp> out;
  out.push_back(binary_int("int_plus", i, add));
  out.push_back(binary_int("int_minus", i, sub));
  out.push_back(binary_int("int_times", i, mul));
  out.push_back(compare_int("int_less", i, lt));
  out.push_back(compare_int("int_less_eq", i, le));
  out.push_back(compare_int("int_eq", i, eq));
  out.push_back(binary_int("nat_plus", n, add));
  out.push_back(binary_int("nat_minus", n, monus));
  out.push_back(binary_int("nat_times", n, mul));
  out.push_back(compare_int("nat_less", n, lt));
  out.push_back(compare_int("nat_less_eq", n, le));
  out.push_back(compare_int("nat_eq", n, eq));
  out.push_back(PrimOp{"int_of_nat", {n}, i,
                       [](std::span<const Scalar> a) -> Scalar { return a[0]; }});
  out.push_back(PrimOp{"True", {}, b,
                       [](std::span<const Scalar>) -> Scalar { return true; }});
  out.push_back(PrimOp{"False", {}, b,
                       [](std::span<const Scalar>) -> Scalar { return false; }});
  out.push_back(PrimOp{"conj", {b, b}, b, [](std::span<const Scalar> a) -> Scalar {
                         return as_bool(a[0]) && as_bool(a[1]);
                       }});
  out.push_back(PrimOp{"disj", {b, b}, b, [](std::span<const Scalar> a) -> Scalar {
                         return as_bool(a[0]) || as_bool(a[1]);
                       }});
  out.push_back(PrimOp{"not", {b}, b, [](std::span<const Scalar> a) -> Scalar {
                         return !as_bool(a[0]);
                       }});
  out.push_back(PrimOp{"str_concat", {s, s}, s, [](std::span<const Scalar> a) -> Scalar {
                         return as_str(a[0]) + as_str(a[1]);
                       }});
  out.push_back(PrimOp{"str_eq", {s, s}, b, [](std::span<const Scalar> a) -> Scalar {
                         return as_str(a[0]) == as_str(a[1]);
                       }});
  return out;
}

}  // namespace

bool is_base_type(std::string_view name) {
  return name == kInt || name == kNat || name == kBool || name == kString;
}

const std::vector<PrimOp>& ops() {
  static const std::vector<PrimOp> table = make_ops();
  return table;
}

const PrimOp* find(std::string_view name) {
  for (const auto& op : ops())
    if (op.name == name) return &op;
  return nullptr;
}

std::string quote(std::string_view text) {
  std::string out = "\"";
  for (unsigned char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\x%02x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
  return out;
}

std::string render(const Scalar& s) {
  if (auto* b = std::get_if<bool>(&s)) return *b ? "true" : "false";
  if (auto* i = std::get_if<BigInt>(&s)) return i->to_string();
  return quote(std::get<std::string>(s));
}

}  // namespace fgo::prim
