#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace ooebp {

/// Thrown when an exact computation would leave the range of the backing
/// integer type. Results are never silently wrapped or rounded.
class arithmetic_overflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

namespace detail {

template <class Int>
constexpr Int abs_value(Int v) {
  return v < 0 ? -v : v;
}

// std::gcd is not guaranteed to accept __int128 outside GNU mode.
template <class Int>
constexpr Int gcd(Int a, Int b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

template <class Int>
Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw arithmetic_overflow("rational arithmetic overflow (mul)");
  return r;
}

template <class Int>
Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw arithmetic_overflow("rational arithmetic overflow (add)");
  return r;
}

template <class Int>
Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) throw arithmetic_overflow("rational arithmetic overflow (sub)");
  return r;
}

template <class Int>
constexpr Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Compares a/b with c/d for b, d > 0 without forming cross products, using
// the continued-fraction expansion of both sides.
template <class Int>
std::strong_ordering compare_fractions(Int a, Int b, Int c, Int d) {
  while (true) {
    const Int q1 = floor_div(a, b);
    const Int q2 = floor_div(c, d);
    if (q1 != q2) return q1 <=> q2;
    const Int r1 = a - q1 * b;
    const Int r2 = c - q2 * d;
    if (r1 == 0 || r2 == 0) {
      if (r1 == 0 && r2 == 0) return std::strong_ordering::equal;
      return r1 == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    // r1/b <=> r2/d  ==  d/r2 <=> b/r1
    Int na = d, nb = r2, nc = b, nd = r1;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
}

template <class Int>
std::string integer_to_string(Int v) {
  if (v == 0) return "0";
  const bool negative = v < 0;
  std::string digits;
  while (v != 0) {
    Int digit = v % 10;
    if (digit < 0) digit = -digit;
    digits.push_back(static_cast<char>('0' + static_cast<int>(digit)));
    v /= 10;
  }
  if (negative) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

}  // namespace detail

/// Exact fraction num/den kept in canonical form: den > 0 and
/// gcd(|num|, den) == 1. Every operation re-normalizes; overflow of the
/// backing integer throws arithmetic_overflow.
template <class Int>
class basic_rational {
 public:
  using integer_type = Int;

  constexpr basic_rational() noexcept = default;
  constexpr basic_rational(Int value) noexcept : num_(value) {}  // NOLINT(google-explicit-constructor)
  basic_rational(Int num, Int den) : num_(num), den_(den) {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    normalize();
  }

  [[nodiscard]] constexpr Int num() const noexcept { return num_; }
  [[nodiscard]] constexpr Int den() const noexcept { return den_; }

  [[nodiscard]] constexpr bool is_zero() const noexcept { return num_ == 0; }
  [[nodiscard]] constexpr bool is_integer() const noexcept { return den_ == 1; }

  [[nodiscard]] Int floor() const { return detail::floor_div(num_, den_); }
  [[nodiscard]] Int ceil() const { return -detail::floor_div(-num_, den_); }

  template <class Float>
  [[nodiscard]] Float to() const {
    return static_cast<Float>(num_) / static_cast<Float>(den_);
  }
  [[nodiscard]] long double to_long_double() const { return to<long double>(); }
  [[nodiscard]] double to_double() const { return to<double>(); }

  template <class Other>
  [[nodiscard]] basic_rational<Other> convert() const {
    if constexpr (std::numeric_limits<Other>::digits < std::numeric_limits<Int>::digits) {
      if (num_ > static_cast<Int>(std::numeric_limits<Other>::max()) ||
          num_ < static_cast<Int>(std::numeric_limits<Other>::min()) ||
          den_ > static_cast<Int>(std::numeric_limits<Other>::max())) {
        throw arithmetic_overflow("rational does not fit the target integer type");
      }
    }
    return basic_rational<Other>(static_cast<Other>(num_), static_cast<Other>(den_));
  }

  friend basic_rational operator-(const basic_rational& a) {
    basic_rational r;
    r.num_ = detail::checked_sub(Int{0}, a.num_);
    r.den_ = a.den_;
    return r;
  }

  friend basic_rational operator+(const basic_rational& a, const basic_rational& b) {
    if (a.den_ == b.den_) return from_raw(detail::checked_add(a.num_, b.num_), a.den_);
    const Int g = detail::gcd(a.den_, b.den_);
    const Int bd = b.den_ / g;
    const Int ad = a.den_ / g;
    const Int num = detail::checked_add(detail::checked_mul(a.num_, bd), detail::checked_mul(b.num_, ad));
    return from_raw(num, detail::checked_mul(a.den_, bd));
  }

  friend basic_rational operator-(const basic_rational& a, const basic_rational& b) { return a + (-b); }

  friend basic_rational operator*(const basic_rational& a, const basic_rational& b) {
    const Int g1 = detail::gcd(a.num_, b.den_);
    const Int g2 = detail::gcd(b.num_, a.den_);
    const Int n1 = g1 == 0 ? a.num_ : a.num_ / g1;
    const Int d2 = g1 == 0 ? b.den_ : b.den_ / g1;
    const Int n2 = g2 == 0 ? b.num_ : b.num_ / g2;
    const Int d1 = g2 == 0 ? a.den_ : a.den_ / g2;
    return from_raw(detail::checked_mul(n1, n2), detail::checked_mul(d1, d2));
  }

  friend basic_rational operator/(const basic_rational& a, const basic_rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    basic_rational inv;
    inv.num_ = b.num_ < 0 ? -b.den_ : b.den_;
    inv.den_ = detail::abs_value(b.num_);
    return a * inv;
  }

  basic_rational& operator+=(const basic_rational& o) { return *this = *this + o; }
  basic_rational& operator-=(const basic_rational& o) { return *this = *this - o; }
  basic_rational& operator*=(const basic_rational& o) { return *this = *this * o; }
  basic_rational& operator/=(const basic_rational& o) { return *this = *this / o; }

  // Canonical form makes member-wise equality exact equality.
  friend constexpr bool operator==(const basic_rational&, const basic_rational&) noexcept = default;

  friend std::strong_ordering operator<=>(const basic_rational& a, const basic_rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    Int lhs, rhs;
    if (!__builtin_mul_overflow(a.num_, b.den_, &lhs) && !__builtin_mul_overflow(b.num_, a.den_, &rhs)) {
      return lhs <=> rhs;
    }
    return detail::compare_fractions(a.num_, a.den_, b.num_, b.den_);
  }

  [[nodiscard]] std::string str() const {
    if (den_ == 1) return detail::integer_to_string(num_);
    return detail::integer_to_string(num_) + "/" + detail::integer_to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const basic_rational& r) { return os << r.str(); }

 private:
  static basic_rational from_raw(Int num, Int den) {
    basic_rational r;
    r.num_ = num;
    r.den_ = den;
    r.normalize();
    return r;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = detail::checked_sub(Int{0}, num_);
      den_ = detail::checked_sub(Int{0}, den_);
    }
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const Int g = detail::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Int num_ = 0;
  Int den_ = 1;
};

using rational = basic_rational<std::int64_t>;
using wide_rational = basic_rational<__int128>;

/// Parses "p/q" or an integer literal. Whitespace is not accepted.
inline rational parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s) -> std::int64_t {
    std::int64_t v = 0;
    if (s.empty()) throw std::invalid_argument("empty number");
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc::result_out_of_range) throw std::invalid_argument("number out of range: " + std::string(s));
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not a number: " + std::string(s));
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return rational(parse_int(text));
  const std::int64_t p = parse_int(text.substr(0, slash));
  const std::int64_t q = parse_int(text.substr(slash + 1));
  if (q == 0) throw std::invalid_argument("zero denominator");
  return {p, q};
}

}  // namespace ooebp
