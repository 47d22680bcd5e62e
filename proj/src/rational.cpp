#include "sofic/rational.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "sofic/error.hpp"

namespace sofic {

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  if (s.empty()) throw MalformedInput("not a number: '" + std::string(whole) + "'");
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw MalformedInput("not a number: '" + std::string(whole) + "'");
    if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
      throw MalformedInput("number too large: '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(s.substr(slash + 1), text);
    if (den == 0) throw MalformedInput("zero denominator: '" + std::string(text) + "'");
    result = Rational(parse_int(s.substr(0, slash), text), den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto int_part = s.substr(0, dot);
    auto frac_part = s.substr(dot + 1);
    if (frac_part.size() > 15) throw MalformedInput("too many decimals: '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    std::int64_t ip = int_part.empty() ? 0 : parse_int(int_part, text);
    std::int64_t fp = frac_part.empty() ? 0 : parse_int(frac_part, text);
    if (int_part.empty() && frac_part.empty())
      throw MalformedInput("not a number: '" + std::string(text) + "'");
    result = Rational(ip) + Rational(fp, scale);
  } else {
    result = Rational(parse_int(s, text));
  }
  return negative ? -result : result;
}

double NormValue::to_double() const {
  if (is_exact()) return boost::rational_cast<double>(exact());
  return std::get<double>(value_);
}

std::string NormValue::str() const {
  return is_exact() ? format_rational(exact()) : format_real(std::get<double>(value_));
}

NormValue operator+(const NormValue& a, const NormValue& b) {
  if (a.is_exact() && b.is_exact()) return NormValue(a.exact() + b.exact());
  return NormValue::real(a.to_double() + b.to_double());
}

NormValue operator-(const NormValue& a, const NormValue& b) {
  if (a.is_exact() && b.is_exact()) return NormValue(a.exact() - b.exact());
  return NormValue::real(a.to_double() - b.to_double());
}

NormValue operator*(const NormValue& a, const NormValue& b) {
  if (a.is_exact() && b.is_exact()) return NormValue(a.exact() * b.exact());
  return NormValue::real(a.to_double() * b.to_double());
}

std::partial_ordering operator<=>(const NormValue& a, const NormValue& b) {
  if (a.is_exact() && b.is_exact()) {
    if (a.exact() < b.exact()) return std::partial_ordering::less;
    if (b.exact() < a.exact()) return std::partial_ordering::greater;
    return std::partial_ordering::equivalent;
  }
  double x = a.to_double(), y = b.to_double();
  if (std::isnan(x) || std::isnan(y)) return std::partial_ordering::unordered;
  if (std::fabs(x - y) <= kTolerance) return std::partial_ordering::equivalent;
  return x < y ? std::partial_ordering::less : std::partial_ordering::greater;
}

}  // namespace sofic
