#pragma once

// Random algebraic integers and totally positive integers for property
// checks. Integrality holds by construction: products of the quadratic
// integers w_i = (1 + sqrt p_i)/2 (p_i = 1 mod 4) or sqrt p_i are integral,
// and so is every Z-combination of them.

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "mqf/field.hpp"
#include "mqf/interval.hpp"

namespace mqf {

/// w_i for each generator.
inline std::vector<FieldElement> quadratic_generators(const MultiquadField& f) {
  std::vector<FieldElement> out;
  for (unsigned i = 0; i < f.k(); ++i) {
    FieldElement root = FieldElement::basis(f, Mask{1} << i);
    if (mpz_fdiv_ui(f.primes()[i].get_mpz_t(), 4) == 1) {
      out.push_back((root + Rational(1)) * Rational(1, 2));
    } else {
      out.push_back(root);
    }
  }
  return out;
}

/// Products prod_{i in I} w_i for every subset I; a Z-basis of a suborder.
inline std::vector<FieldElement> product_order_basis(const MultiquadField& f) {
  std::vector<FieldElement> gens = quadratic_generators(f);
  std::vector<FieldElement> out(f.degree(), FieldElement::rational(f, 1));
  for (Mask I = 1; I < f.degree(); ++I) {
    const unsigned low = static_cast<unsigned>(std::countr_zero(I));
    out[I] = out[I & (I - 1)] * gens[low];
  }
  return out;
}

/// sum n_I w_I with independent n_I uniform in [-range, range].
template <class Rng>
FieldElement random_integral_element(const MultiquadField& f, Rng& rng, long range) {
  std::vector<FieldElement> basis = product_order_basis(f);
  std::uniform_int_distribution<long> coef(-range, range);
  FieldElement x(f);
  for (const auto& b : basis) {
    long n = coef(rng);
    if (n != 0) x += b * Rational(n);
  }
  return x;
}

/// Smallest rational integer n with y + n totally positive.
inline Integer positivity_shift(const FieldElement& y) {
  const Mask count = static_cast<Mask>(y.field().degree());
  Integer n = -floor(enclose(y, 0).lo);
  for (Mask t = 1; t < count; ++t) {
    Integer need = -floor(enclose(y, t).lo);
    if (need > n) n = need;
  }
  while (!is_totally_positive(y + Rational(n))) ++n;
  while (is_totally_positive(y + Rational(n - 1))) --n;
  return n;
}

/// A random totally positive integer. Mixes three shapes: barely positive
/// shifts y + n_min (small trace for their coefficients), squares, and sums
/// of two squares.
template <class Rng>
FieldElement random_totally_positive_integer(const MultiquadField& f, Rng& rng, long range) {
  std::uniform_int_distribution<int> shape(0, 3);
  for (;;) {
    FieldElement y = random_integral_element(f, rng, range);
    switch (shape(rng)) {
      case 0:
      case 1: {
        std::uniform_int_distribution<int> extra(0, 2);
        FieldElement x = y + Rational(positivity_shift(y) + extra(rng));
        if (!x.is_zero()) return x;
        break;
      }
      case 2:
        if (!y.is_zero()) return y * y;
        break;
      default: {
        FieldElement z = random_integral_element(f, rng, range);
        FieldElement x = y * y + z * z;
        if (!x.is_zero()) return x;
        break;
      }
    }
  }
}

}  // namespace mqf
