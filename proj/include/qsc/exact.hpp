#pragma once

// Exact scalar tower: arbitrary-precision integers and rationals (GMP).
//
// gmpxx keeps mpq_class results of arithmetic in lowest terms; values built
// from a raw numerator/denominator pair must go through make_rational().

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include "qsc/errors.hpp"

namespace qsc {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den) {
  return make_rational(BigInt(num), BigInt(den));
}

// log2 of a positive big integer, accurate to double precision regardless of size.
inline double log2_big(const BigInt& x) {
  if (x <= 0) throw DomainError("log2_big of non-positive integer");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return static_cast<double>(exp) + std::log2(mant);
}

inline double log2_rational(const Rational& q) {
  if (q <= 0) throw DomainError("log2_rational of non-positive value");
  return log2_big(q.get_num()) - log2_big(q.get_den());
}

// mpq_get_d handles operands of any size; only the result must fit a double.
inline double to_double(const Rational& q) { return q.get_d(); }

inline double to_double(double x) { return x; }

// Converts an exact value into the working scalar of a numeric tower.
template <class Scalar>
Scalar scalar_from(const Rational& q) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return q;
  } else {
    return static_cast<Scalar>(q.get_d());
  }
}

inline BigInt pow_big(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rational pow_rational(const Rational& base, unsigned long e) {
  Rational r(pow_big(base.get_num(), e), pow_big(base.get_den(), e));
  r.canonicalize();
  return r;
}

// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& q) { return q.get_str(); }

// Parses "12", "-3/8", "0.125", "2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&]() { return UsageError("not a number: '" + s + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
      throw bad();
    if (den == 0) throw bad();
    return make_rational(num, den);
  }
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    try {
      std::size_t used = 0;
      exp10 = std::stol(s.substr(e + 1), &used);
      if (used != s.size() - e - 1) throw bad();
    } catch (const std::logic_error&) {
      throw bad();
    }
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.erase(0, 1);
  }
  std::string digits;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    exp10 -= static_cast<long>(mant.size() - dot - 1);
  } else {
    digits = mant;
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) throw bad();
  BigInt num(digits, 10);
  if (neg) num = -num;
  const BigInt ten(10);
  if (exp10 >= 0) return Rational(num * pow_big(ten, static_cast<unsigned long>(exp10)));
  return make_rational(num, pow_big(ten, static_cast<unsigned long>(-exp10)));
}

}  // namespace qsc
