#pragma once

// Additively indecomposable totally positive integers: the trace lower bound,
// the small-norm sufficient criterion for biquadratic fields, and an
// exhaustive decomposition search that serves as ground truth.

#include <cstdint>
#include <optional>
#include <vector>

#include "mqf/integers.hpp"
#include "mqf/interval.hpp"
#include "mqf/lattice_walk.hpp"

namespace mqf {

inline constexpr std::uint64_t kDefaultDecompositionBudget = 10'000'000;

enum class Indecomposability { ByNorm, ByExhaustion, Decomposable, Unknown };

inline const char* to_string(Indecomposability v) {
  switch (v) {
    case Indecomposability::ByNorm: return "IndecomposableByNorm";
    case Indecomposability::ByExhaustion: return "IndecomposableByExhaustion";
    case Indecomposability::Decomposable: return "Decomposable";
    case Indecomposability::Unknown: return "Unknown";
  }
  return "Unknown";
}

struct IndecomposabilityVerdict {
  FieldElement element;
  Indecomposability verdict = Indecomposability::Unknown;
  std::optional<FieldElement> witness;  // beta with beta > 0, element - beta > 0
  std::uint64_t budget_used = 0;

  bool indecomposable() const {
    return verdict == Indecomposability::ByNorm || verdict == Indecomposability::ByExhaustion;
  }
};

inline void require_totally_positive_integer(const FieldElement& x) {
  if (!is_totally_positive(x)) throw Error(ErrorKind::NotTotallyPositive, to_string(x));
  if (!is_algebraic_integer(x)) throw Error(ErrorKind::NotIntegral, to_string(x));
}

/// For every I with a_I != 0: Tr(x) > sqrt p_I, compared as Tr(x)^2 > p_I.
inline bool trace_bound_holds(const FieldElement& x) {
  require_totally_positive_integer(x);
  const Rational tr = trace(x);
  const Rational tr2 = tr * tr;
  for (Mask I = 1; I < x.field().degree(); ++I) {
    if (x[I] != 0 && !(tr > 0 && tr2 > x.field().radicand(I))) return false;
  }
  return true;
}

/// If x is not rational, Tr(x) > min_I sqrt p_I.
inline bool trace_exceeds_min_radicand(const FieldElement& x) {
  require_totally_positive_integer(x);
  if (x.is_rational()) return true;
  const Rational tr = trace(x);
  return tr > 0 && tr * tr > x.field().min_radicand();
}

/// Smallest prime n with x / n still integral, if any. Any such n divides
/// Tr(x sqrt p_I) = 2^k a_I p_I for every I, so only those primes are tried.
inline std::optional<Integer> rational_integer_divisor(const FieldElement& x) {
  const MultiquadField& f = x.field();
  const Integer n(static_cast<unsigned long>(f.degree()));
  Integer content = 0;
  for (Mask I = 0; I < f.degree(); ++I) {
    Rational t = x[I] * n * f.radicand(I);
    if (!is_integer(t)) throw Error(ErrorKind::NotIntegral, to_string(x));
    content = gcd(content, t.get_num());
  }
  if (content == 0) return std::nullopt;
  for (const auto& [p, e] : factorize(content)) {
    if (is_algebraic_integer(x * Rational(1, p))) return p;
  }
  return std::nullopt;
}

/// Norm criterion (k = 2): N(x) < 2 min(sqrt p, sqrt q, sqrt r) and no
/// rational integer n > 1 divides x. True implies x is indecomposable.
inline bool normab_criterion(const FieldElement& x) {
  if (x.field().k() != 2) throw Error(ErrorKind::WrongDegree, "norm criterion is stated for k = 2");
  require_totally_positive_integer(x);
  const Rational nm = norm(x);
  if (!(nm * nm < 4 * Rational(x.field().min_radicand()))) return false;
  return !rational_integer_divisor(x).has_value();
}

/// Searches for beta with 0 < beta < x among lattice points of the superset
/// box; 0 < sigma_t(beta) < sigma_t(x) bounds every embedding. Points are
/// visited in lexicographic order of (a_0, a_1, ...), so the witness found, if
/// any, is the lexicographically smallest one.
inline IndecomposabilityVerdict exhaustive_indecomposable(const FieldElement& x,
                                                          std::uint64_t budget = kDefaultDecompositionBudget) {
  require_totally_positive_integer(x);
  const MultiquadField& f = x.field();
  IndecomposabilityVerdict out{x, Indecomposability::Unknown, std::nullopt, 0};

  LatticeWalker walker(superset_lattice_box(f, abs_embedding_bounds(x)));
  std::vector<double> hi = embeddings_approx(x);
  walker.set_window(std::vector<double>(f.degree(), 0.0), hi);

  std::vector<double> emb;
  const Integer den = walker.box().denominator;
  WalkResult r = walker.walk(
      [&](std::span<const std::int64_t> m) {
        double mag = 0.0;
        lattice_point_embeddings(f, m, emb, &mag);
        for (std::size_t t = 0; t < emb.size(); ++t) {
          const double slack = 1e-9 * (1.0 + hi[t]) + 1e-12 * mag;
          if (emb[t] <= -slack || emb[t] >= hi[t] + slack) return Visit::Continue;
        }
        FieldElement beta = FieldElement::from_numerators(f, m, den);
        if (!is_totally_positive(beta) || !succ(x, beta)) return Visit::Continue;
        if (!is_algebraic_integer(beta)) return Visit::Continue;
        out.witness = std::move(beta);
        return Visit::Stop;
      },
      budget);
  out.budget_used = r.visited;
  if (out.witness) {
    out.verdict = Indecomposability::Decomposable;
  } else if (!r.budget_exceeded) {
    out.verdict = Indecomposability::ByExhaustion;
  }
  return out;
}

/// Norm criterion when it applies, exhaustive search otherwise.
inline IndecomposabilityVerdict classify_indecomposable(const FieldElement& x,
                                                        std::uint64_t budget = kDefaultDecompositionBudget) {
  if (x.field().k() == 2 && normab_criterion(x)) {
    return {x, Indecomposability::ByNorm, std::nullopt, 0};
  }
  return exhaustive_indecomposable(x, budget);
}

}  // namespace mqf
