#pragma once

#include <string>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "ooebp/rational.hpp"

namespace ooebp {

/// 50 significant decimal digits; used wherever constants are irrational.
using real = boost::multiprecision::cpp_dec_float_50;

template <class Int>
real to_real(const basic_rational<Int>& r) {
  return real(detail::integer_to_string(r.num())) / real(detail::integer_to_string(r.den()));
}

namespace detail {

inline __int128 parse_int128(const std::string& digits) {
  __int128 v = 0;
  bool negative = false;
  std::size_t i = 0;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    i = 1;
  }
  for (; i < digits.size(); ++i) {
    const char c = digits[i];
    if (c == '.') break;
    if (c < '0' || c > '9') throw std::invalid_argument("bad integer literal: " + digits);
    v = checked_add(checked_mul(v, static_cast<__int128>(10)), static_cast<__int128>(c - '0'));
  }
  return negative ? -v : v;
}

}  // namespace detail

/// floor(x * den) / den, as an exact fraction.
inline wide_rational truncate_to_rational(const real& x, __int128 den) {
  const real scaled = boost::multiprecision::floor(x * real(detail::integer_to_string(den)));
  return {detail::parse_int128(scaled.str(0, std::ios_base::fixed)), den};
}

inline constexpr __int128 pow10_int128(int e) {
  __int128 v = 1;
  for (int i = 0; i < e; ++i) v *= 10;
  return v;
}

}  // namespace ooebp
