#pragma once

// Multiquadratic fields Q(sqrt p_1, ..., sqrt p_k) and exact arithmetic on
// their elements, written in the basis { sqrt p_I : I subset of {1..k} }.
//
// Subsets are bitmasks: bit i stands for p_{i+1}. Real embeddings are also
// indexed by bitmasks t: bit i of t set means sqrt p_{i+1} -> -sqrt p_{i+1}.
// Under embedding t the basis vector sqrt p_I picks up (-1)^{|I & t|}.

#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mqf/error.hpp"
#include "mqf/rational.hpp"

namespace mqf {

using Mask = std::uint32_t;

/// (-1)^{|I & t|}: the sign sqrt p_I acquires under embedding t.
constexpr int character(Mask subset, Mask embedding) {
  return (std::popcount(subset & embedding) & 1) ? -1 : 1;
}

namespace detail {

struct FieldData {
  unsigned k = 0;
  std::vector<Integer> primes;
  std::vector<Integer> radicand;    // p_I, indexed by mask
  std::vector<Integer> multiplier;  // m with sqrt p_I * sqrt p_J = m * sqrt p_{I^J}
  std::vector<double> sqrt_approx;  // sqrt p_I as double, for pre-filters only
  std::vector<Rational> sqrt_lo;    // 128-bit dyadic enclosures of sqrt p_I
  std::vector<Rational> sqrt_hi;
};

inline constexpr unsigned kEnclosureBits = 128;
inline constexpr unsigned kMaxGenerators = 8;

}  // namespace detail

inline Integer min_of(const Integer& a, const Integer& b) { return a < b ? a : b; }

class FieldElement;

/// Signs of the generators under one real embedding.
struct EmbeddingSigns {
  std::vector<int> signs;

  static EmbeddingSigns from_mask(Mask t, unsigned k) {
    EmbeddingSigns s;
    s.signs.resize(k);
    for (unsigned i = 0; i < k; ++i) s.signs[i] = ((t >> i) & 1U) ? -1 : 1;
    return s;
  }

  Mask mask() const {
    Mask t = 0;
    for (std::size_t i = 0; i < signs.size(); ++i) {
      if (signs[i] < 0) t |= Mask{1} << i;
    }
    return t;
  }

  /// Induced sign on sqrt p_I.
  int on(Mask subset) const { return character(subset, mask()); }
};

class MultiquadField {
 public:
  MultiquadField() = default;

  /// Builds Q(sqrt p_1, ..., sqrt p_k). Throws EmptyPrimeList, NotSquarefree,
  /// PairwiseCoprimeRequired (k >= 3) or DegenerateField (degree < 2^k).
  static MultiquadField make(const std::vector<Integer>& primes) {
    if (primes.empty()) throw Error(ErrorKind::EmptyPrimeList, "need at least one generator");
    if (primes.size() > detail::kMaxGenerators) {
      throw Error(ErrorKind::Format, "at most 8 generators supported");
    }
    const unsigned k = static_cast<unsigned>(primes.size());
    for (unsigned i = 0; i < k; ++i) {
      if (primes[i] < 2 || !is_squarefree(primes[i])) {
        throw Error(ErrorKind::NotSquarefree,
                    "p_" + std::to_string(i + 1) + " = " + primes[i].get_str());
      }
    }
    if (k >= 3) {
      for (unsigned i = 0; i < k; ++i) {
        for (unsigned j = i + 1; j < k; ++j) {
          if (gcd(primes[i], primes[j]) != 1) {
            throw Error(ErrorKind::PairwiseCoprimeRequired,
                        primes[i].get_str() + " and " + primes[j].get_str());
          }
        }
      }
    }

    auto d = std::make_shared<detail::FieldData>();
    d->k = k;
    d->primes = primes;
    const std::size_t n = std::size_t{1} << k;
    d->radicand.assign(n, Integer(1));
    // For squarefree a, b: sqfree(a*b) = (a/g)(b/g) with g = gcd(a, b).
    for (Mask I = 1; I < n; ++I) {
      const unsigned low = static_cast<unsigned>(std::countr_zero(I));
      const Integer& a = d->radicand[I & (I - 1)];
      const Integer& b = primes[low];
      Integer g = gcd(a, b);
      d->radicand[I] = (a / g) * (b / g);
    }
    for (Mask I = 1; I < n; ++I) {
      if (d->radicand[I] == 1) {
        throw Error(ErrorKind::DegenerateField,
                    "p_I is a perfect square for subset mask " + std::to_string(I));
      }
      for (Mask J = I + 1; J < n; ++J) {
        if (d->radicand[I] == d->radicand[J]) {
          throw Error(ErrorKind::DegenerateField, "p_I collides for masks " + std::to_string(I) +
                                                      " and " + std::to_string(J));
        }
      }
    }
    d->multiplier.resize(n * n);
    for (Mask I = 0; I < n; ++I) {
      for (Mask J = 0; J < n; ++J) {
        Integer m = gcd(d->radicand[I], d->radicand[J]);
        if (m * m * d->radicand[I ^ J] != d->radicand[I] * d->radicand[J]) {
          throw Error(ErrorKind::InternalNonRational, "product table inconsistency");
        }
        d->multiplier[I * n + J] = m;
      }
    }
    const Integer scale = pow2(detail::kEnclosureBits);
    d->sqrt_approx.resize(n);
    d->sqrt_lo.resize(n);
    d->sqrt_hi.resize(n);
    for (Mask I = 0; I < n; ++I) {
      Integer s = isqrt(d->radicand[I] * scale * scale);
      d->sqrt_lo[I] = Rational(s, scale);
      d->sqrt_lo[I].canonicalize();
      d->sqrt_hi[I] = is_perfect_square(d->radicand[I]) ? d->sqrt_lo[I] : Rational(s + 1, scale);
      d->sqrt_hi[I].canonicalize();
      d->sqrt_approx[I] = d->sqrt_lo[I].get_d();
    }
    MultiquadField f;
    f.d_ = std::move(d);
    return f;
  }

  static MultiquadField make(std::initializer_list<long> primes) {
    std::vector<Integer> v;
    for (long p : primes) v.emplace_back(p);
    return make(v);
  }

  bool valid() const { return d_ != nullptr; }
  unsigned k() const { return d_->k; }
  std::size_t degree() const { return std::size_t{1} << d_->k; }
  const std::vector<Integer>& primes() const { return d_->primes; }
  const Integer& radicand(Mask subset) const { return d_->radicand[subset]; }
  const std::vector<Integer>& radicands() const { return d_->radicand; }
  const Integer& multiplier(Mask a, Mask b) const { return d_->multiplier[a * degree() + b]; }
  double sqrt_approx(Mask subset) const { return d_->sqrt_approx[subset]; }
  const Rational& sqrt_lower(Mask subset) const { return d_->sqrt_lo[subset]; }
  const Rational& sqrt_upper(Mask subset) const { return d_->sqrt_hi[subset]; }

  /// Smallest radicand among nontrivial subsets.
  Integer min_radicand() const {
    Integer m = d_->radicand[1];
    for (Mask I = 2; I < degree(); ++I) m = min_of(m, d_->radicand[I]);
    return m;
  }

  friend bool operator==(const MultiquadField& a, const MultiquadField& b) {
    if (a.d_ == b.d_) return true;
    if (!a.d_ || !b.d_) return false;
    return a.d_->primes == b.d_->primes;
  }

  /// K(sqrt q): the same generators followed by q.
  MultiquadField extend(const Integer& q) const {
    std::vector<Integer> p = d_->primes;
    p.push_back(q);
    return make(p);
  }

  std::string describe() const {
    std::string s = "Q(";
    for (unsigned i = 0; i < k(); ++i) {
      if (i) s += ", ";
      s += "sqrt " + primes()[i].get_str();
    }
    return s + ")";
  }

 private:
  std::shared_ptr<const detail::FieldData> d_;
};

/// An element sum_I a_I sqrt p_I with exact rational a_I. The coefficient
/// vector is dense (length 2^k), so equality is plain vector equality.
class FieldElement {
 public:
  FieldElement() = default;
  explicit FieldElement(MultiquadField field)
      : field_(std::move(field)), coeffs_(field_.degree()) {}
  FieldElement(MultiquadField field, std::vector<Rational> coeffs)
      : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != field_.degree()) {
      throw Error(ErrorKind::Format, "coefficient vector has wrong length");
    }
    for (auto& c : coeffs_) c.canonicalize();
  }

  static FieldElement rational(const MultiquadField& field, const Rational& value) {
    FieldElement x(field);
    x.coeffs_[0] = value;
    return x;
  }

  /// sqrt p_I itself.
  static FieldElement basis(const MultiquadField& field, Mask subset) {
    FieldElement x(field);
    x.coeffs_.at(subset) = 1;
    return x;
  }

  /// Lattice point (1/denominator) * sum m_I sqrt p_I.
  static FieldElement from_numerators(const MultiquadField& field, std::span<const std::int64_t> m,
                                      const Integer& denominator) {
    FieldElement x(field);
    for (std::size_t I = 0; I < m.size(); ++I) {
      if (m[I] != 0) {
        x.coeffs_[I] = Rational(Integer(static_cast<long>(m[I])), denominator);
        x.coeffs_[I].canonicalize();
      }
    }
    return x;
  }

  const MultiquadField& field() const { return field_; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  const Rational& operator[](Mask subset) const { return coeffs_[subset]; }
  void set(Mask subset, Rational value) {
    value.canonicalize();
    coeffs_.at(subset) = std::move(value);
  }

  bool is_zero() const {
    for (const auto& c : coeffs_) {
      if (c != 0) return false;
    }
    return true;
  }

  bool is_rational() const {
    for (std::size_t I = 1; I < coeffs_.size(); ++I) {
      if (coeffs_[I] != 0) return false;
    }
    return true;
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.coeffs_ == b.coeffs_;
  }

  FieldElement& operator+=(const FieldElement& o) {
    check_same(o);
    for (std::size_t I = 0; I < coeffs_.size(); ++I) coeffs_[I] += o.coeffs_[I];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    check_same(o);
    for (std::size_t I = 0; I < coeffs_.size(); ++I) coeffs_[I] -= o.coeffs_[I];
    return *this;
  }
  FieldElement& operator*=(const Rational& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator-(FieldElement a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend FieldElement operator*(FieldElement a, const Rational& s) { return a *= s; }
  friend FieldElement operator*(const Rational& s, FieldElement a) { return a *= s; }
  friend FieldElement operator+(FieldElement a, const Rational& s) {
    a.coeffs_[0] += s;
    return a;
  }
  friend FieldElement operator-(FieldElement a, const Rational& s) {
    a.coeffs_[0] -= s;
    return a;
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);

  void check_same(const FieldElement& o) const {
    if (!(field_ == o.field_)) throw Error(ErrorKind::FieldMismatch, "operands live in different fields");
  }

 private:
  MultiquadField field_;
  std::vector<Rational> coeffs_;
};

namespace detail {

// Product of two coefficient blocks living in the subfield spanned by masks
// below `size`. The product table of the full field restricts correctly
// because the masks are closed under xor.
inline std::vector<Rational> mul_block(const MultiquadField& f, std::span<const Rational> x,
                                       std::span<const Rational> y) {
  const std::size_t size = x.size();
  std::vector<Rational> out(size);
  Rational t;
  for (Mask I = 0; I < size; ++I) {
    if (x[I] == 0) continue;
    for (Mask J = 0; J < size; ++J) {
      if (y[J] == 0) continue;
      t = x[I] * y[J];
      const Integer& m = f.multiplier(I, J);
      if (m != 1) t *= m;
      out[I ^ J] += t;
    }
  }
  return out;
}

// Exact sign of the block under the embedding t restricted to the first
// `level` generators. Writes x = u + v sqrt p_level with u, v in the subfield
// and compares u^2 with v^2 p_level when the two parts disagree in sign.
inline int sign_block(const MultiquadField& f, std::span<const Rational> x, unsigned level, Mask t) {
  if (level == 0) return sgn(x[0]);
  const std::size_t half = std::size_t{1} << (level - 1);
  const Mask top = static_cast<Mask>(half);
  std::span<const Rational> u = x.first(half);
  std::vector<Rational> v(half);
  bool v_zero = true;
  for (Mask J = 0; J < half; ++J) {
    const Rational& c = x[J | top];
    if (c == 0) continue;
    v_zero = false;
    // sqrt p_{J|top} = sqrt p_J * sqrt p_top / m(J, top)
    const Integer& m = f.multiplier(J, top);
    v[J] = (m == 1) ? c : Rational(c / m);
  }
  const int su = sign_block(f, u, level - 1, t);
  if (v_zero) return su;
  int sv = sign_block(f, v, level - 1, t);
  if ((t >> (level - 1)) & 1U) sv = -sv;
  if (sv == 0) return su;
  if (su == 0 || su == sv) return su == 0 ? sv : su;
  std::vector<Rational> uu = mul_block(f, u, u);
  std::vector<Rational> vv = mul_block(f, v, v);
  const Integer& p = f.primes()[level - 1];
  for (Mask J = 0; J < half; ++J) uu[J] -= vv[J] * p;
  return su * sign_block(f, uu, level - 1, t);
}

}  // namespace detail

inline FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  a.check_same(b);
  return FieldElement(a.field(), detail::mul_block(a.field(), a.coeffs(), b.coeffs()));
}

inline FieldElement mul(const FieldElement& x, const FieldElement& y) { return x * y; }

inline FieldElement pow(FieldElement base, unsigned exponent) {
  FieldElement result = FieldElement::rational(base.field(), 1);
  while (exponent) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1;
    if (exponent) base = base * base;
  }
  return result;
}

/// Image of x under the embedding/automorphism t.
inline FieldElement conjugate(const FieldElement& x, Mask t) {
  std::vector<Rational> c = x.coeffs();
  for (Mask I = 0; I < c.size(); ++I) {
    if (character(I, t) < 0) c[I] = -c[I];
  }
  return FieldElement(x.field(), std::move(c));
}

inline FieldElement conjugate(const FieldElement& x, const EmbeddingSigns& s) {
  if (s.signs.size() != x.field().k()) throw Error(ErrorKind::FieldMismatch, "sign vector length");
  return conjugate(x, s.mask());
}

inline Rational trace(const FieldElement& x) {
  return Rational(x[0] * Integer(static_cast<unsigned long>(x.field().degree())));
}

/// Multiplies x successively by its relative conjugates; after step i the
/// running product is fixed by sigma_1..sigma_i, so the end result is the
/// product of all 2^k conjugates.
inline Rational norm(const FieldElement& x) {
  FieldElement y = x;
  for (unsigned i = 0; i < x.field().k(); ++i) y = y * conjugate(y, Mask{1} << i);
  if (!y.is_rational()) throw Error(ErrorKind::InternalNonRational, "norm has irrational part");
  return y[0];
}

/// Product of (T - sigma_t(x)) over all embeddings, as rational coefficients
/// c_0, ..., c_{2^k} of T^0, ..., T^{2^k} (monic).
inline std::vector<Rational> char_poly(const FieldElement& x) {
  const MultiquadField& f = x.field();
  std::vector<FieldElement> poly{-x, FieldElement::rational(f, 1)};
  for (unsigned i = 0; i < f.k(); ++i) {
    const Mask t = Mask{1} << i;
    std::vector<FieldElement> other;
    other.reserve(poly.size());
    for (const auto& c : poly) other.push_back(conjugate(c, t));
    std::vector<FieldElement> prod(poly.size() * 2 - 1, FieldElement(f));
    for (std::size_t a = 0; a < poly.size(); ++a) {
      if (poly[a].is_zero()) continue;
      for (std::size_t b = 0; b < other.size(); ++b) {
        if (other[b].is_zero()) continue;
        prod[a + b] += poly[a] * other[b];
      }
    }
    poly = std::move(prod);
  }
  std::vector<Rational> out;
  out.reserve(poly.size());
  for (const auto& c : poly) {
    if (!c.is_rational()) {
      throw Error(ErrorKind::InternalNonRational, "characteristic polynomial coefficient");
    }
    out.push_back(c[0]);
  }
  return out;
}

/// Exact sign of sigma_t(x); no floating point involved.
inline int sign_exact(const FieldElement& x, Mask t) {
  return detail::sign_block(x.field(), x.coeffs(), x.field().k(), t);
}

inline int sign_exact(const FieldElement& x, const EmbeddingSigns& s) { return sign_exact(x, s.mask()); }

namespace detail {

// Interval pre-filter on doubles. Returns +1/-1 when the sign is certain,
// 0 when the exact routine must decide.
inline int sign_hint(const FieldElement& x, Mask t) {
  const MultiquadField& f = x.field();
  double value = 0.0;
  double magnitude = 0.0;
  for (Mask I = 0; I < x.coeffs().size(); ++I) {
    const Rational& c = x[I];
    if (c == 0) continue;
    double term = c.get_d() * f.sqrt_approx(I);
    value += character(I, t) * term;
    magnitude += term < 0 ? -term : term;
  }
  const double slack = magnitude * 0x1p-40 + 0x1p-1000;
  if (value > slack) return 1;
  if (value < -slack) return -1;
  return 0;
}

}  // namespace detail

inline bool is_totally_positive(const FieldElement& x) {
  const Mask n = static_cast<Mask>(x.field().degree());
  for (Mask t = 0; t < n; ++t) {
    int h = detail::sign_hint(x, t);
    if (h < 0) return false;
    if (h == 0 && sign_exact(x, t) <= 0) return false;
  }
  return true;
}

/// x >= y in the total-positivity order: x == y or x - y totally positive.
inline bool succeq(const FieldElement& x, const FieldElement& y) {
  x.check_same(y);
  FieldElement d = x - y;
  return d.is_zero() || is_totally_positive(d);
}

/// x > y: x - y totally positive.
inline bool succ(const FieldElement& x, const FieldElement& y) {
  x.check_same(y);
  return is_totally_positive(x - y);
}

/// Multiplicative inverse via the norm: x^{-1} = (prod of other conjugates) / N(x).
inline FieldElement inverse(const FieldElement& x) {
  if (x.is_zero()) throw Error(ErrorKind::Format, "division by zero");
  FieldElement y = x;
  FieldElement cofactor = FieldElement::rational(x.field(), 1);
  for (unsigned i = 0; i < x.field().k(); ++i) {
    FieldElement c = conjugate(y, Mask{1} << i);
    cofactor = cofactor * c;
    y = y * c;
  }
  return cofactor * Rational(1 / y[0]);
}

/// Re-expresses an element of K in K(sqrt q); masks are unchanged.
inline FieldElement lift(const FieldElement& x, const MultiquadField& extension) {
  const MultiquadField& base = x.field();
  if (extension.k() < base.k()) throw Error(ErrorKind::FieldMismatch, "extension is smaller");
  for (unsigned i = 0; i < base.k(); ++i) {
    if (extension.primes()[i] != base.primes()[i]) {
      throw Error(ErrorKind::FieldMismatch, "extension does not contain the base generators");
    }
  }
  std::vector<Rational> c(extension.degree());
  for (std::size_t I = 0; I < x.coeffs().size(); ++I) c[I] = x[I];
  return FieldElement(extension, std::move(c));
}

/// Human-readable form, e.g. "2 + 1/2*s2 - 1/2*s6".
inline std::string to_string(const FieldElement& x) {
  std::string out;
  for (Mask I = 0; I < x.coeffs().size(); ++I) {
    Rational c = x[I];
    if (c == 0) continue;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    Rational a = abs(c);
    if (I == 0) {
      out += a.get_str();
    } else {
      if (a != 1) out += a.get_str() + "*";
      out += "s" + x.field().radicand(I).get_str();
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace mqf
