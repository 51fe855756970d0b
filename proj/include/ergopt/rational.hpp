#pragma once

// Exact rational scalar used by every "rational mode" computation, plus the
// small set of scalar traits that let templated code run on either Rational
// or double.

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <concepts>
#include <sstream>
#include <string>
#include <string_view>

#include "ergopt/errors.hpp"

namespace ergopt {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

template <typename T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

template <Scalar T>
T from_rational(const Rational& q) {
  if constexpr (is_exact_v<T>) {
    return q;
  } else {
    return to_double(q);
  }
}

// Every finite double is a dyadic rational; this conversion is exact.
inline Rational exact_from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite value cannot be made rational");
  return Rational(x);
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline std::string to_string(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// Accepts "p/q", integers, and decimal strings such as "-0.125" or "1e-3".
// Decimal input is converted exactly (0.1 becomes 1/10, not the nearest double).
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw ParseError("invalid rational literal '" + std::string(text) + "'"); };
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  if (s.empty()) fail();

  auto parse_int = [&](const std::string& digits) {
    if (digits.empty()) fail();
    std::size_t i = (digits[0] == '-' || digits[0] == '+') ? 1 : 0;
    if (i == digits.size()) fail();
    for (std::size_t j = i; j < digits.size(); ++j)
      if (!std::isdigit(static_cast<unsigned char>(digits[j]))) fail();
    std::string body = digits.substr(i);
    body.erase(0, std::min(body.find_first_not_of('0'), body.size() - 1));
    Integer v(body);
    return digits[0] == '-' ? Integer(-v) : v;
  };

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num = parse_int(s.substr(0, slash));
    std::string den_text = s.substr(slash + 1);
    if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) fail();
    Integer den = parse_int(den_text);
    if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(num, den);
  }

  std::string mantissa = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mantissa = s.substr(0, e);
    std::string exp_text = s.substr(e + 1);
    Integer ex = parse_int(exp_text);
    if (abs(ex) > 4000) fail();
    exponent = ex.convert_to<long>();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(mantissa.begin());
  }
  std::string digits;
  long frac_len = 0;
  bool seen_point = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_len;
    } else {
      fail();
    }
  }
  if (digits.empty()) fail();
  // A leading 0 would select octal in the Integer string constructor.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Rational value{Integer(digits)};
  long scale = exponent - frac_len;
  Integer ten_pow = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(scale < 0 ? -scale : scale));
  value = scale < 0 ? value / Rational(ten_pow) : value * Rational(ten_pow);
  return negative ? Rational(-value) : value;
}

}  // namespace ergopt
