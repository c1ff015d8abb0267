#pragma once

// Algebraic integers: membership test, explicit bases for biquadratic rings
// of integers, and the superset lattice (1/2^k) Z[sqrt p_I] that contains
// O_K and drives every exhaustive enumeration.

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "mqf/field.hpp"

namespace mqf {

/// True iff the characteristic polynomial of x has integer coefficients.
inline bool is_algebraic_integer(const FieldElement& x) {
  if (std::all_of(x.coeffs().begin(), x.coeffs().end(), [](const Rational& c) { return is_integer(c); })) {
    return true;  // Z[sqrt p_I] is integral
  }
  // Tr(x sqrt p_I) = 2^k a_I p_I is a coefficient of an integral polynomial
  // whenever x is integral; cheap rejection before the full expansion.
  const MultiquadField& f = x.field();
  const Integer n(static_cast<unsigned long>(f.degree()));
  for (Mask I = 0; I < f.degree(); ++I) {
    if (!is_integer(Rational(x[I] * n * f.radicand(I)))) return false;
  }
  for (const Rational& c : char_poly(x)) {
    if (!is_integer(c)) return false;
  }
  return true;
}

struct IntegralBasis {
  MultiquadField field;
  std::vector<FieldElement> basis;
};

namespace detail {

inline Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && a[pivot][c] == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational factor = a[r][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[r][j] -= factor * a[c][j];
    }
  }
  return det;
}

inline Rational basis_determinant(const std::vector<FieldElement>& basis) {
  std::vector<std::vector<Rational>> rows;
  rows.reserve(basis.size());
  for (const auto& b : basis) rows.push_back(b.coeffs());
  return determinant(std::move(rows));
}

// Echelon basis of the Z-lattice spanned by integer row vectors (full rank).
inline std::vector<std::vector<Integer>> echelon_basis(std::vector<std::vector<Integer>> rows,
                                                       std::size_t dim) {
  std::vector<std::vector<Integer>> out;
  for (std::size_t c = 0; c < dim; ++c) {
    // Euclid on column c until at most one row has a nonzero entry there.
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r][c] != 0 && (best == rows.size() || abs(rows[r][c]) < abs(rows[best][c]))) best = r;
      }
      if (best == rows.size()) break;
      bool reduced = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == best || rows[r][c] == 0) continue;
        Integer q = rows[r][c] / rows[best][c];
        for (std::size_t j = 0; j < dim; ++j) rows[r][j] -= q * rows[best][j];
        reduced = true;
      }
      if (!reduced) {
        if (rows[best][c] < 0) {
          for (auto& v : rows[best]) v = -v;
        }
        out.push_back(rows[best]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        break;
      }
    }
  }
  return out;
}

// O_K for k = 2 by exhausting the 4^4 cosets of Z[sqrt p_I] inside
// (1/4) Z[sqrt p_I].
inline std::vector<FieldElement> biquadratic_basis_by_search(const MultiquadField& f) {
  const Integer four(4);
  std::vector<std::vector<Integer>> gens;
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<Integer> e(4, Integer(0));
    e[i] = 4;
    gens.push_back(e);
  }
  std::array<std::int64_t, 4> m{};
  for (m[0] = 0; m[0] < 4; ++m[0]) {
    for (m[1] = 0; m[1] < 4; ++m[1]) {
      for (m[2] = 0; m[2] < 4; ++m[2]) {
        for (m[3] = 0; m[3] < 4; ++m[3]) {
          if (m[0] == 0 && m[1] == 0 && m[2] == 0 && m[3] == 0) continue;
          FieldElement x = FieldElement::from_numerators(f, m, four);
          if (is_algebraic_integer(x)) {
            gens.push_back({Integer(static_cast<long>(m[0])), Integer(static_cast<long>(m[1])),
                            Integer(static_cast<long>(m[2])), Integer(static_cast<long>(m[3]))});
          }
        }
      }
    }
  }
  std::vector<FieldElement> basis;
  for (const auto& row : echelon_basis(std::move(gens), 4)) {
    std::vector<Rational> c(4);
    for (std::size_t i = 0; i < 4; ++i) {
      c[i] = Rational(row[i], four);
      c[i].canonicalize();
    }
    basis.emplace_back(f, std::move(c));
  }
  return basis;
}

inline std::vector<FieldElement> biquadratic_basis_by_class(const MultiquadField& f) {
  const auto residue = [&](Mask I) { return static_cast<int>(mpz_fdiv_ui(f.radicand(I).get_mpz_t(), 4)); };
  const FieldElement one = FieldElement::rational(f, 1);
  const auto root = [&](Mask I) { return FieldElement::basis(f, I); };
  const auto half_plus = [&](Mask I) { return (one + root(I)) * Rational(1, 2); };
  const std::array<Mask, 3> masks{1, 2, 3};
  const int ones = static_cast<int>(std::count_if(masks.begin(), masks.end(), [&](Mask I) { return residue(I) == 1; }));
  if (ones == 3) {
    return {one, half_plus(1), half_plus(2), half_plus(1) * half_plus(2)};
  }
  const auto pick = [&](int r) {
    std::vector<Mask> out;
    for (Mask I : masks) {
      if (residue(I) == r) out.push_back(I);
    }
    return out;
  };
  if (ones == 1) {
    Mask a = pick(1).front();
    std::vector<Mask> rest;
    for (Mask I : masks) {
      if (I != a) rest.push_back(I);
    }
    return {one, half_plus(a), root(rest[0]), (root(rest[0]) + root(rest[1])) * Rational(1, 2)};
  }
  std::vector<Mask> threes = pick(3);
  std::vector<Mask> twos = pick(2);
  if (threes.size() == 1 && twos.size() == 2) {
    return {one, root(threes[0]), root(twos[0]), (root(twos[0]) + root(twos[1])) * Rational(1, 2)};
  }
  throw Error(ErrorKind::UnsupportedResidueClass, "residues of p, q, r mod 4");
}

}  // namespace detail

/// Z-basis of O_K for a biquadratic field. The classical basis for the
/// residue class of (p, q, r) mod 4 is returned when it checks out as
/// integral with full index; otherwise the basis found by coset search.
inline IntegralBasis biquadratic_basis(const MultiquadField& f) {
  if (f.k() != 2) throw Error(ErrorKind::WrongDegree, "biquadratic basis needs k = 2");
  std::vector<FieldElement> searched = detail::biquadratic_basis_by_search(f);
  const Rational target = abs(detail::basis_determinant(searched));
  try {
    std::vector<FieldElement> classic = detail::biquadratic_basis_by_class(f);
    bool ok = std::all_of(classic.begin(), classic.end(), [](const FieldElement& b) { return is_algebraic_integer(b); });
    if (ok && abs(detail::basis_determinant(classic)) == target) return {f, std::move(classic)};
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedResidueClass) throw;
  }
  return {f, std::move(searched)};
}

/// { sum a_I sqrt p_I : a_I in (1/2^k) Z, |a_I| <= bound_I }, stored as
/// integer numerator bounds over the common denominator 2^k.
struct LatticeBox {
  MultiquadField field;
  std::vector<Integer> numerator_bound;
  Integer denominator;

  Rational bound(Mask subset) const {
    Rational b(numerator_bound.at(subset), denominator);
    b.canonicalize();
    return b;
  }

  bool contains(const FieldElement& x) const {
    for (Mask I = 0; I < numerator_bound.size(); ++I) {
      Rational scaled = x[I] * denominator;
      if (!is_integer(scaled) || abs(scaled.get_num()) > numerator_bound[I]) return false;
    }
    return true;
  }

  /// Number of lattice points in the box.
  Integer point_count() const {
    Integer n = 1;
    for (const auto& b : numerator_bound) n *= 2 * b + 1;
    return n;
  }
};

/// Box guaranteed to contain every algebraic integer whose embeddings are all
/// bounded in absolute value by the given per-embedding bounds: since
/// a_I = 2^-k sum_t chi_I(t) sigma_t(x) / sqrt p_I, |a_I| <= max_t bound_t / sqrt p_I.
inline LatticeBox superset_lattice_box(const MultiquadField& f, const std::vector<Rational>& embedding_bound) {
  if (embedding_bound.size() != f.degree()) throw Error(ErrorKind::Format, "need one bound per embedding");
  Rational top = 0;
  for (const auto& b : embedding_bound) {
    if (b < 0) throw Error(ErrorKind::Format, "embedding bounds must be nonnegative");
    if (b > top) top = b;
  }
  LatticeBox box{f, {}, pow2(f.k())};
  const Rational scaled = top * top * box.denominator * box.denominator;
  box.numerator_bound.reserve(f.degree());
  for (Mask I = 0; I < f.degree(); ++I) {
    // largest m with (m / 2^k)^2 p_I <= top^2
    box.numerator_bound.push_back(floor_sqrt(Rational(scaled / f.radicand(I))));
  }
  return box;
}

}  // namespace mqf
