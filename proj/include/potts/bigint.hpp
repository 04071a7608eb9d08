#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "potts/error.hpp"

namespace potts {

using BigInt = boost::multiprecision::cpp_int;

inline std::string to_string(const BigInt& x) { return x.str(); }

inline BigInt parse_bigint(std::string_view text) {
  std::size_t k = 0;
  if (k < text.size() && (text[k] == '-' || text[k] == '+')) ++k;
  if (k == text.size()) throw InputError("malformed integer '" + std::string(text) + "'");
  for (std::size_t j = k; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9') throw InputError("malformed integer '" + std::string(text) + "'");
  const bool negative = text[0] == '-';
  BigInt value(std::string(text.substr(k)));
  return negative ? BigInt(-value) : value;
}

// Nonnegative residue of x modulo p.
inline std::uint32_t mod_reduce(const BigInt& x, std::uint32_t p) {
  BigInt r = x % p;
  if (r < 0) r += p;
  return r.convert_to<std::uint32_t>();
}

// x = mantissa * 2^exponent with 0.5 <= |mantissa| < 1 (or 0 for x == 0).
// Works for integers far beyond the double range.
inline std::pair<double, long> frexp_big(const BigInt& x) {
  if (x == 0) return {0.0, 0};
  const BigInt mag = abs(x);
  const long bits = static_cast<long>(boost::multiprecision::msb(mag)) + 1;
  const long shift = bits > 64 ? bits - 64 : 0;
  const BigInt top = mag >> shift;
  const double m = top.convert_to<double>();
  int e = 0;
  const double frac = std::frexp(m, &e);
  return {x < 0 ? -frac : frac, static_cast<long>(e) + shift};
}

}  // namespace potts
