#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

#include "idv/errors.hpp"

namespace idv {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Every quantity in this library is a Rational; floating point
/// is banned so that branch conditions and tie rules are decided exactly.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

/// Parses "p", "-p" or "p/q" (q > 0 after canonicalization).
inline Rational parse_rational(std::string_view text) {
  auto fail = [&]() -> Rational {
    throw InputError("invalid rational literal: '" + std::string(text) + "'");
  };
  std::size_t begin = text.find_first_not_of(" \t");
  std::size_t end = text.find_last_not_of(" \t");
  if (begin == std::string_view::npos) return fail();
  text = text.substr(begin, end - begin + 1);

  std::string_view num = text;
  std::string_view den = "1";
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  if (!digits_ok(num, true) || !digits_ok(den, false)) return fail();
  Integer n{std::string(num)};
  Integer d{std::string(den)};
  if (d == 0) throw InputError("zero denominator in rational literal: '" + std::string(text) + "'");
  return Rational(n, d);
}

/// "p" when integral, otherwise "p/q".
inline std::string rational_to_string(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace idv
