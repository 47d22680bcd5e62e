#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace sofic {

using Rational = boost::rational<std::int64_t>;

// Tolerance used whenever at least one side of a comparison is a real.
inline constexpr double kTolerance = 1e-12;

// Prints "p/q", or "p" when the denominator is one.
std::string format_rational(const Rational& r);

// Formats a real with 12 significant digits.
std::string format_real(double x);

// Accepts "p/q", integers and finite decimals ("0.9", "-1.25").
Rational parse_rational(std::string_view text);

// A norm value: exact rational for Hamming and graph norms, real for
// character norms. Arithmetic stays exact while both operands are exact.
class NormValue {
 public:
  NormValue() : value_(Rational{0}) {}
  NormValue(Rational r) : value_(r) {}  // NOLINT(google-explicit-constructor)
  NormValue(std::int64_t n) : value_(Rational{n}) {}  // NOLINT
  static NormValue real(double x) { return NormValue(Tag{}, x); }

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  double to_double() const;

  std::string str() const;

  friend NormValue operator+(const NormValue& a, const NormValue& b);
  friend NormValue operator-(const NormValue& a, const NormValue& b);
  friend NormValue operator*(const NormValue& a, const NormValue& b);

  // Exact when both sides are exact; otherwise values within kTolerance
  // compare equivalent. The tolerant relation is not transitive.
  friend std::partial_ordering operator<=>(const NormValue& a, const NormValue& b);
  friend bool operator==(const NormValue& a, const NormValue& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }

 private:
  struct Tag {};
  NormValue(Tag, double x) : value_(x) {}
  std::variant<Rational, double> value_;
};

inline NormValue max(const NormValue& a, const NormValue& b) { return a < b ? b : a; }
inline NormValue min(const NormValue& a, const NormValue& b) { return b < a ? b : a; }

}  // namespace sofic
