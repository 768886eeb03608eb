#pragma once

// Exact integer and rational scalars shared by every other module.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace razak_forge {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Builds num/den in lowest terms with a positive denominator.
inline Rational make_rational(const Int& num, const Int& den) {
  if (den == 0) {
    throw std::domain_error("make_rational: zero denominator");
  }
  if (den < 0) {
    return Rational(Int(-num), Int(-den));
  }
  return Rational(num, den);
}

inline Int numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Structural equality on the normalized (num, den) pair.
inline bool structurally_equal(const Rational& a, const Rational& b) {
  return numerator(a) == numerator(b) && denominator(a) == denominator(b);
}

inline std::string to_string(const Int& v) { return v.str(); }

/// Renders "num/den", or just "num" when the denominator is 1.
inline std::string to_string(const Rational& q) {
  const Int den = denominator(q);
  if (den == 1) {
    return numerator(q).str();
  }
  return numerator(q).str() + "/" + den.str();
}

/// Parses a decimal integer; throws std::invalid_argument on malformed text.
inline Int parse_int(const std::string& text) {
  if (text.empty()) {
    throw std::invalid_argument("empty integer literal");
  }
  std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
  if (i == text.size()) {
    throw std::invalid_argument("malformed integer literal '" + text + "'");
  }
  for (std::size_t j = i; j < text.size(); ++j) {
    if (text[j] < '0' || text[j] > '9') {
      throw std::invalid_argument("malformed integer literal '" + text + "'");
    }
  }
  return Int(text[0] == '+' ? text.substr(1) : text);
}

/// Parses "num/den" or "num".
inline Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    return Rational(parse_int(text));
  }
  return make_rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

inline std::optional<std::int64_t> to_int64(const Int& v) {
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(v);
}

/// Floor division for a positive divisor.
inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b != 0) && (a < 0)) {
    --q;
  }
  return q;
}

/// Ceiling division for a positive divisor.
inline Int ceil_div(const Int& a, const Int& b) { return -floor_div(-a, b); }

/// Decimal rendering rounded half away from zero, computed without floating point.
inline std::string to_decimal(const Rational& q, int places) {
  Int scale = 1;
  for (int i = 0; i < places; ++i) {
    scale *= 10;
  }
  const Int num = numerator(q);
  const Int den = denominator(q);
  const bool negative = num < 0;
  const Int mag = negative ? Int(-num) : num;
  const Int scaled = (2 * mag * scale + den) / (2 * den);
  const Int whole = scaled / scale;
  std::string frac = Int(scaled % scale).str();
  if (static_cast<int>(frac.size()) < places) {
    frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
  }
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += whole.str();
  if (places > 0) {
    out += "." + frac;
  }
  return out;
}

}  // namespace razak_forge
