#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "berkskel/error.hpp"

namespace berkskel {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "n", "-n", "n/d" with decimal digits only. No whitespace, no
// exponent, no decimal point: floats are rejected at the boundary.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  auto digits = [&](std::size_t from, std::size_t& to) {
    to = from;
    while (to < text.size() && text[to] >= '0' && text[to] <= '9') ++to;
    return to > from;
  };
  std::size_t end = 0;
  if (!digits(pos, end)) return std::nullopt;
  Integer num(std::string(text.substr(pos, end - pos)));
  Integer den = 1;
  if (end < text.size()) {
    if (text[end] != '/') return std::nullopt;
    std::size_t den_end = 0;
    if (!digits(end + 1, den_end) || den_end != text.size()) return std::nullopt;
    den = Integer(std::string(text.substr(end + 1, den_end - end - 1)));
    if (den == 0) return std::nullopt;
  }
  Rational value(num, den);
  return negative ? Rational(-value) : value;
}

inline Rational parse_rational(std::string_view text) {
  if (auto value = try_parse_rational(text)) return *value;
  fail(ErrorKind::ParseError, "malformed rational '" + std::string(text) + "'");
}

inline std::string format_rational(const Rational& value) {
  return value.str();
}

inline bool is_integer(const Rational& value) {
  return denominator(value) == 1;
}

inline std::int64_t to_int64(const Rational& value) {
  if (!is_integer(value)) fail(ErrorKind::InvalidArgument, format_rational(value) + " is not an integer");
  const Integer& n = numerator(value);
  if (n > Integer(INT64_MAX) || n < Integer(INT64_MIN)) {
    fail(ErrorKind::OutOfRange, format_rational(value) + " does not fit in 64 bits");
  }
  return n.convert_to<std::int64_t>();
}

// Decimal approximation with `digits` fractional digits, rounded half away
// from zero. Only used for auxiliary plotting columns.
inline std::string to_decimal(const Rational& value, unsigned digits) {
  Integer scale = 1;
  for (unsigned i = 0; i < digits; ++i) scale *= 10;
  Integer num = numerator(value) * scale;
  Integer den = denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  Integer q = (2 * num + den) / (2 * den);
  std::string body = q.str();
  if (digits > 0) {
    if (body.size() <= digits) body.insert(0, digits + 1 - body.size(), '0');
    body.insert(body.size() - digits, ".");
  }
  return (negative && q != 0 ? "-" : "") + body;
}

/// A radius r in [0,1] stored as its logarithmic depth -log r: an exact
/// nonnegative rational, or infinity for r = 0 (type-1 points).
class LogValue {
 public:
  LogValue() = default;
  LogValue(const Rational& value) : value_(value) {  // NOLINT: implicit by intent
    if (value_ < 0) fail(ErrorKind::NegativeLogValue, "log value " + format_rational(value_) + " < 0");
  }
  LogValue(int value) : LogValue(Rational(value)) {}  // NOLINT

  static LogValue infinity() {
    LogValue v;
    v.infinite_ = true;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }

  const Rational& value() const {
    if (infinite_) fail(ErrorKind::InvalidArgument, "finite value requested from inf");
    return value_;
  }

  friend LogValue operator+(const LogValue& a, const LogValue& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return LogValue(a.value_ + b.value_);
  }

  // Subtraction that refuses to leave the log-value domain.
  friend LogValue operator-(const LogValue& a, const LogValue& b) {
    if (b.infinite_) fail(ErrorKind::NegativeLogValue, "subtracting inf");
    if (a.infinite_) return infinity();
    return LogValue(a.value_ - b.value_);
  }

  // r^factor for a positive rational factor.
  LogValue scaled(const Rational& factor) const {
    if (factor <= 0) fail(ErrorKind::InvalidArgument, "log values scale by positive factors only");
    if (infinite_) return infinity();
    return LogValue(value_ * factor);
  }

  friend bool operator==(const LogValue& a, const LogValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend std::strong_ordering operator<=>(const LogValue& a, const LogValue& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::string str() const { return infinite_ ? "inf" : format_rational(value_); }

  friend std::ostream& operator<<(std::ostream& os, const LogValue& v) { return os << v.str(); }

 private:
  Rational value_{0};
  bool infinite_ = false;
};

inline LogValue parse_log_value(std::string_view text) {
  if (text == "inf") return LogValue::infinity();
  return LogValue(parse_rational(text));
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Residue characteristic of the ground field: a prime, or 0 when every
/// multiplicity is tame.
class ResidueCharacteristic {
 public:
  constexpr ResidueCharacteristic() = default;
  ResidueCharacteristic(std::uint64_t p) : p_(p) {
    if (p != 0 && !is_prime(p)) fail(ErrorKind::InvalidArgument, std::to_string(p) + " is neither 0 nor prime");
  }

  std::uint64_t value() const { return p_; }
  bool is_zero() const { return p_ == 0; }

  bool divides(std::int64_t n) const { return p_ != 0 && n % static_cast<std::int64_t>(p_) == 0; }

  // In characteristic 0 only 1 counts as a p-power.
  bool is_power(const Rational& n) const {
    if (!is_integer(n) || n < 1) return false;
    Integer m = numerator(n);
    if (p_ == 0) return m == 1;
    while (m % p_ == 0) m /= p_;
    return m == 1;
  }

  // Largest power of p dividing n (1 in characteristic 0).
  std::int64_t power_part(std::int64_t n) const {
    std::int64_t part = 1;
    if (p_ == 0) return part;
    const auto p = static_cast<std::int64_t>(p_);
    while (n % p == 0) {
      n /= p;
      part *= p;
    }
    return part;
  }

  friend bool operator==(const ResidueCharacteristic&, const ResidueCharacteristic&) = default;

 private:
  std::uint64_t p_ = 0;
};

}  // namespace berkskel
