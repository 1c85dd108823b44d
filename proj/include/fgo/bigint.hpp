#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace fgo {

/// Immutable arbitrary-precision integer. Copies share storage.
class BigInt {
 public:
  BigInt();
  BigInt(std::int64_t value);  // NOLINT(google-explicit-constructor)

  static std::optional<BigInt> parse(std::string_view decimal);

  std::string to_string() const;
  bool fits_int64() const;
  int sign() const;

  friend BigInt operator+(const BigInt& a, const BigInt& b);
  friend BigInt operator-(const BigInt& a, const BigInt& b);
  friend BigInt operator*(const BigInt& a, const BigInt& b);
  friend bool operator==(const BigInt& a, const BigInt& b);
  friend std::strong_ordering operator<=>(const BigInt& a, const BigInt& b);

 private:
  struct Impl;
  explicit BigInt(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

}  // namespace fgo
