#include "fgo/bigint.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace fgo {

using boost::multiprecision::cpp_int;

struct BigInt::Impl {
  cpp_int value;
};

BigInt::BigInt() : BigInt(std::int64_t{0}) {}

BigInt::BigInt(std::int64_t value)
    : impl_(std::make_shared<const Impl>(Impl{cpp_int(value)})) {}

BigInt::BigInt(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

std::optional<BigInt> BigInt::parse(std::string_view decimal) {
  std::size_t i = 0;
  bool negative = false;
  if (i < decimal.size() && (decimal[i] == '-' || decimal[i] == '+')) {
    negative = decimal[i] == '-';
    ++i;
  }
  if (i == decimal.size()) return std::nullopt;
  cpp_int value = 0;
  for (; i < decimal.size(); ++i) {
    char c = decimal[i];
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  if (negative) value = -value;
  return BigInt(std::make_shared<const Impl>(Impl{std::move(value)}));
}

std::string BigInt::to_string() const { return impl_->value.str(); }

bool BigInt::fits_int64() const {
  return impl_->value >= std::numeric_limits<std::int64_t>::min() &&
         impl_->value <= std::numeric_limits<std::int64_t>::max();
}

int BigInt::sign() const { return impl_->value.sign(); }

BigInt operator+(const BigInt& a, const BigInt& b) {
  return BigInt(std::make_shared<const BigInt::Impl>(
      BigInt::Impl{a.impl_->value + b.impl_->value}));
}

BigInt operator-(const BigInt& a, const BigInt& b) {
  return BigInt(std::make_shared<const BigInt::Impl>(
      BigInt::Impl{a.impl_->value - b.impl_->value}));
}

BigInt operator*(const BigInt& a, const BigInt& b) {
  return BigInt(std::make_shared<const BigInt::Impl>(
      BigInt::Impl{a.impl_->value * b.impl_->value}));
}

bool operator==(const BigInt& a, const BigInt& b) {
  return a.impl_->value == b.impl_->value;
}

std::strong_ordering operator<=>(const BigInt& a, const BigInt& b) {
  int c = a.impl_->value.compare(b.impl_->value);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace fgo
