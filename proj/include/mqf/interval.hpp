#pragma once

// Rigorous rational enclosures of real embeddings. Used to turn embedding
// values into rational bounds for enumeration boxes, and in tests as an
// independent check of the exact sign routine.

#include <utility>
#include <vector>

#include "mqf/field.hpp"

namespace mqf {

struct Enclosure {
  Rational lo;
  Rational hi;

  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  int sign() const { return lo > 0 ? 1 : (hi < 0 ? -1 : 0); }
};

/// [lo, hi] containing sigma_t(x), width about 2^-128 * sum |a_I|.
inline Enclosure enclose(const FieldElement& x, Mask t) {
  const MultiquadField& f = x.field();
  Enclosure e{0, 0};
  for (Mask I = 0; I < x.coeffs().size(); ++I) {
    const Rational& a = x[I];
    if (a == 0) continue;
    Rational c = character(I, t) < 0 ? Rational(-a) : a;
    if (c > 0) {
      e.lo += c * f.sqrt_lower(I);
      e.hi += c * f.sqrt_upper(I);
    } else {
      e.lo += c * f.sqrt_upper(I);
      e.hi += c * f.sqrt_lower(I);
    }
  }
  return e;
}

/// Upper bounds on |sigma_t(x)| for every embedding t.
inline std::vector<Rational> abs_embedding_bounds(const FieldElement& x) {
  std::vector<Rational> out;
  const Mask n = static_cast<Mask>(x.field().degree());
  out.reserve(n);
  for (Mask t = 0; t < n; ++t) {
    Enclosure e = enclose(x, t);
    out.push_back(abs(e.lo) > abs(e.hi) ? Rational(abs(e.lo)) : Rational(abs(e.hi)));
  }
  return out;
}

/// Approximate embedding values; pre-filters only.
inline std::vector<double> embeddings_approx(const FieldElement& x) {
  const MultiquadField& f = x.field();
  const Mask n = static_cast<Mask>(f.degree());
  std::vector<double> terms(n);
  for (Mask I = 0; I < n; ++I) terms[I] = x[I].get_d() * f.sqrt_approx(I);
  std::vector<double> out(n, 0.0);
  for (Mask t = 0; t < n; ++t) {
    for (Mask I = 0; I < n; ++I) out[t] += character(I, t) * terms[I];
  }
  return out;
}

}  // namespace mqf
