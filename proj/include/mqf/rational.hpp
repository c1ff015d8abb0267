#pragma once

// Thin helpers over GMP's C++ classes. Every exact quantity in the library is
// an Integer or a Rational; nothing here rounds.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mqf/error.hpp"

namespace mqf {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Integer& x) { return sgn(x); }
inline int sign(const Rational& x) { return sgn(x); }

inline Integer isqrt(const Integer& n) {
  if (n < 0) throw Error(ErrorKind::Format, "isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Integer& n) {
  return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer floor(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline Integer ceil(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer pow2(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline bool is_integer(const Rational& x) { return x.get_den() == 1; }

/// floor(sqrt(x)) for a nonnegative rational.
inline Integer floor_sqrt(const Rational& x) { return isqrt(floor(x)); }

/// A rational upper bound for sqrt(x), within 2^-bits of the true value.
inline Rational sqrt_upper(const Rational& x, unsigned bits = 64) {
  if (x <= 0) return Rational(0);
  Integer scale = pow2(bits);
  Integer s = isqrt(ceil(x * scale * scale));
  if (Rational(s * s) < x * scale * scale) s += 1;
  Rational r(s, scale);
  r.canonicalize();
  return r;
}

/// Trial-division factorization; callers keep inputs at desk scale.
inline std::vector<std::pair<Integer, unsigned>> factorize(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  if (n < 0) n = -n;
  if (n < 2) return out;
  auto take = [&](const Integer& d) {
    unsigned e = 0;
    while (mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t())) {
      n /= d;
      ++e;
    }
    if (e > 0) out.emplace_back(d, e);
  };
  take(2);
  take(3);
  for (Integer d = 5; d * d <= n; d += 6) {
    take(d);
    Integer d2 = d + 2;
    take(d2);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_squarefree(const Integer& n) {
  if (n == 0) return false;
  Integer m = abs(n);
  if (m == 1) return true;
  if (is_perfect_square(m)) return false;
  for (const auto& [p, e] : factorize(m)) {
    if (e > 1) return false;
  }
  return true;
}

/// Parses "n", "-n" or "n/d" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (text.empty() || r.set_str(text, 10) != 0) {
    throw Error(ErrorKind::Format, "not a rational: '" + text + "'");
  }
  if (r.get_den() == 0) throw Error(ErrorKind::Format, "zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

inline Integer parse_integer(const std::string& text) {
  Integer z;
  if (text.empty() || z.set_str(text, 10) != 0) {
    throw Error(ErrorKind::Format, "not an integer: '" + text + "'");
  }
  return z;
}

/// "n/d" always, the wire format for rationals.
inline std::string to_fraction_string(const Rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline bool fits_int64(const Integer& z) {
  return mpz_cmp_si(z.get_mpz_t(), INT64_MAX) <= 0 && mpz_cmp_si(z.get_mpz_t(), INT64_MIN) >= 0;
}

inline std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw Error(ErrorKind::Format, "integer out of 64-bit range: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

}  // namespace mqf
