#pragma once

// Real quadratic fields: continued fractions of sqrt D, the pool of small
// indecomposables, and a certified search for witness sets.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mqf/certifier.hpp"
#include "mqf/indecomposables.hpp"

namespace mqf {

struct CFExpansion {
  Integer D;
  Integer a0;
  std::vector<Integer> period;
};

/// sqrt D = [a0; period...] via the integer (P, Q) recurrence. The period
/// ends at the first partial quotient equal to 2 a0, which makes it minimal.
inline CFExpansion cf_expand(const Integer& D) {
  if (D < 2) throw Error(ErrorKind::Format, "D must be at least 2");
  if (is_perfect_square(D)) throw Error(ErrorKind::PerfectSquare, D.get_str());
  if (!is_squarefree(D)) throw Error(ErrorKind::NotSquarefree, D.get_str());
  CFExpansion cf{D, isqrt(D), {}};
  Integer P = 0, Q = 1, a = cf.a0;
  for (;;) {
    P = a * Q - P;
    Q = (D - P * P) / Q;
    a = (cf.a0 + P) / Q;
    cf.period.push_back(a);
    if (a == 2 * cf.a0) break;
  }
  return cf;
}

/// Partial quotient a_n (n >= 0).
inline const Integer& partial_quotient(const CFExpansion& cf, std::size_t n) {
  return n == 0 ? cf.a0 : cf.period[(n - 1) % cf.period.size()];
}

/// Convergents p_n / q_n, n = 0..count-1. Each one is checked against
/// p_n^2 - D q_n^2 = (-1)^{n+1} Q_{n+1}, with Q from the (P, Q) recurrence.
inline std::vector<std::pair<Integer, Integer>> convergents(const CFExpansion& cf, std::size_t count) {
  std::vector<std::pair<Integer, Integer>> out;
  Integer p_prev = 1, q_prev = 0, p = cf.a0, q = 1;
  Integer P = cf.a0, Q = cf.D - cf.a0 * cf.a0;  // P_1, Q_1
  for (std::size_t n = 0; n < count; ++n) {
    if (n > 0) {
      const Integer& a = partial_quotient(cf, n);
      Integer pn = a * p + p_prev, qn = a * q + q_prev;
      p_prev = p;
      q_prev = q;
      p = pn;
      q = qn;
      P = a * Q - P;
      Q = (cf.D - P * P) / Q;
    }
    Integer pell = p * p - cf.D * q * q;
    Integer expected = (n % 2 == 0) ? Integer(-Q) : Q;
    if (pell != expected) throw Error(ErrorKind::Internal, "Pell identity failed for convergent");
    out.emplace_back(p, q);
  }
  return out;
}

inline MultiquadField quadratic_field(const Integer& D) { return MultiquadField::make(std::vector<Integer>{D}); }

/// Every totally positive integer of Q(sqrt D) with trace <= trace_bound
/// that the exhaustive search proves indecomposable, ordered by trace and
/// then by coefficients.
inline std::vector<FieldElement> quadratic_candidates(const CFExpansion& cf, const Integer& trace_bound,
                                                      std::uint64_t budget = kDefaultDecompositionBudget) {
  std::vector<FieldElement> out;
  if (trace_bound <= 0) return out;
  const MultiquadField f = quadratic_field(cf.D);
  const Rational T(trace_bound);
  // Both embeddings are positive and sum to the trace, so each is < T.
  LatticeWalker walker(superset_lattice_box(f, {T, T}));
  const double Td = T.get_d();
  walker.set_window({0.0, 0.0}, {Td, Td});
  const FieldElement one = FieldElement::rational(f, 1);
  const Integer den = walker.box().denominator;
  walker.walk(
      [&](std::span<const std::int64_t> m) {
        if (m[0] <= 0) return Visit::Continue;
        FieldElement x = FieldElement::from_numerators(f, m, den);
        if (trace(x) > T || !is_totally_positive(x) || !is_algebraic_integer(x)) return Visit::Continue;
        if (succ(x, one)) return Visit::Continue;  // x = 1 + (x - 1)
        if (exhaustive_indecomposable(x, budget).indecomposable()) out.push_back(std::move(x));
        return Visit::Continue;
      },
      UINT64_MAX);
  return out;
}

enum class SearchStatus { Found, PoolExhausted, BudgetExceeded };

struct SearchOutcome {
  SearchStatus status = SearchStatus::PoolExhausted;
  std::optional<WitnessSet> witnesses;
  std::optional<Certificate> certificate;
  std::size_t pool_size = 0;
  std::size_t pairs_checked = 0;
};

/// Depth-first search over the candidate pool (increasing trace) for N
/// elements whose pairs all pass the certifier. A pair that runs out of
/// budget counts as failing; the outcome says so.
inline SearchOutcome search_witnesses(const Integer& D, std::size_t N, const Integer& trace_bound,
                                      std::uint64_t pair_budget = kDefaultPairBudget) {
  if (N < 1) throw Error(ErrorKind::Format, "N must be at least 1");
  CFExpansion cf = cf_expand(D);
  std::vector<FieldElement> pool = quadratic_candidates(cf, trace_bound);
  SearchOutcome out;
  out.pool_size = pool.size();
  bool budget_hit = false;
  std::map<std::pair<std::size_t, std::size_t>, bool> cache;
  auto good = [&](std::size_t i, std::size_t j) {
    auto key = std::make_pair(i, j);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    PairVerdict v = pair_condition_certify(pool[i], pool[j], pair_budget, i, j);
    ++out.pairs_checked;
    if (v.status == PairStatus::BudgetExceeded) budget_hit = true;
    return cache[key] = v.holds();
  };
  std::vector<std::size_t> chosen;
  auto dfs = [&](auto& self, std::size_t start) -> bool {
    if (chosen.size() == N) return true;
    for (std::size_t i = start; i + (N - chosen.size()) <= pool.size(); ++i) {
      bool ok = true;
      for (std::size_t c : chosen) {
        if (!good(c, i)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(i);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (!dfs(dfs, 0)) {
    out.status = budget_hit ? SearchStatus::BudgetExceeded : SearchStatus::PoolExhausted;
    return out;
  }
  WitnessSet w{quadratic_field(D), {}, false};
  for (std::size_t i : chosen) w.elements.push_back(pool[i]);
  Certificate cert = certify_witness_set(w, pair_budget);
  if (!cert.m_lower_bound) throw Error(ErrorKind::Internal, "search result failed re-certification");
  w.certified = true;
  out.status = SearchStatus::Found;
  out.witnesses = std::move(w);
  out.certificate = std::move(cert);
  return out;
}

/// First squarefree D in [d_min, d_max] admitting N certified witnesses.
inline std::optional<std::pair<Integer, SearchOutcome>> scan_for_witnesses(
    std::size_t N, const Integer& d_min, const Integer& d_max, const Integer& trace_bound,
    std::uint64_t pair_budget = kDefaultPairBudget) {
  for (Integer D = d_min < 2 ? Integer(2) : d_min; D <= d_max; ++D) {
    if (is_perfect_square(D) || !is_squarefree(D)) continue;
    SearchOutcome o = search_witnesses(D, N, trace_bound, pair_budget);
    if (o.status == SearchStatus::Found) return std::make_pair(D, std::move(o));
  }
  return std::nullopt;
}

}  // namespace mqf
