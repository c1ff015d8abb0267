#pragma once

// Induction step of the tower construction: from witnesses a_1..a_N in K of
// degree 2^k, pick a squarefree q with
//     sqrt q > 2^{k+1},   sqrt q > 8 max_{i<j} Tr_K(a_i a_j),   gcd(q, p_i) = 1,
// and carry the same elements over to L = K(sqrt q). Every inequality is
// checked on squares of integers.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mqf/cf_quadratic.hpp"
#include "mqf/certifier.hpp"
#include "mqf/sampling.hpp"

namespace mqf {

struct TowerStep {
  MultiquadField base_field;
  std::vector<FieldElement> witnesses;  // in base_field
  Integer q;
  std::size_t offset = 0;
  Integer max_pair_trace;   // max_{i<j} Tr_K(a_i a_j), 0 when N < 2
  Integer power_bound;      // 4^{k+1}; need q > power_bound
  Integer trace_bound;      // 64 max_pair_trace^2; need q > trace_bound
};

/// max over i < j of Tr_K(a_i a_j).
inline Integer max_pair_trace(const std::vector<FieldElement>& w) {
  Integer best = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      Rational t = trace(w[i] * w[j]);
      if (!is_integer(t)) throw Error(ErrorKind::NotIntegral, "pair trace is not an integer");
      if (t.get_num() > best) best = t.get_num();
    }
  }
  return best;
}

/// The three conditions on q for generators `primes`, integers only.
inline bool q_admissible(const std::vector<Integer>& primes, const Integer& q, const Integer& max_trace) {
  const unsigned k = static_cast<unsigned>(primes.size());
  if (q <= pow2(2 * (k + 1))) return false;
  if (q <= 64 * max_trace * max_trace) return false;
  for (const auto& p : primes) {
    if (gcd(p, q) != 1) return false;
  }
  return is_squarefree(q);
}

/// The (offset+1)-th smallest admissible q.
inline TowerStep select_next_q(const MultiquadField& field, const WitnessSet& w, std::size_t offset) {
  if (!(w.field == field)) throw Error(ErrorKind::FieldMismatch, "witnesses outside the field");
  TowerStep step;
  step.base_field = field;
  step.witnesses = w.elements;
  step.offset = offset;
  step.max_pair_trace = max_pair_trace(w.elements);
  step.power_bound = pow2(2 * (field.k() + 1));
  step.trace_bound = 64 * step.max_pair_trace * step.max_pair_trace;
  Integer q = (step.power_bound > step.trace_bound ? step.power_bound : step.trace_bound) + 1;
  std::size_t seen = 0;
  for (;; ++q) {
    if (!q_admissible(field.primes(), q, step.max_pair_trace)) continue;
    if (seen++ == offset) break;
  }
  step.q = q;
  return step;
}

/// Same elements, now in K(sqrt q). Not certified in L.
inline WitnessSet lift_witnesses(const TowerStep& step) {
  WitnessSet out{step.base_field.extend(step.q), {}, false};
  for (const auto& a : step.witnesses) {
    FieldElement lifted = lift(a, out.field);
    if (trace(lifted) != 2 * trace(a)) throw Error(ErrorKind::Internal, "lifting must double the trace");
    out.elements.push_back(std::move(lifted));
  }
  return out;
}

/// Splits c in L = K(sqrt q) as u + v sqrt q with u, v in K (q the last generator).
inline std::pair<FieldElement, FieldElement> split_top(const FieldElement& c, const MultiquadField& base) {
  const MultiquadField& top = c.field();
  const Mask bit = Mask{1} << (top.k() - 1);
  std::vector<Rational> u(base.degree()), v(base.degree());
  for (Mask J = 0; J < base.degree(); ++J) {
    u[J] = c[J];
    // sqrt p_{J|bit} = sqrt p_J sqrt q / m
    v[J] = c[J | bit] / top.multiplier(J, bit);
  }
  return {FieldElement(base, std::move(u)), FieldElement(base, std::move(v))};
}

/// Tr_L(c^2)^2 > q for integral c = u + v sqrt q with u, v both nonzero.
inline bool check_case_c_bound(const FieldElement& c) {
  const MultiquadField& top = c.field();
  if (top.k() < 1) throw Error(ErrorKind::WrongDegree, "need an extension");
  const Integer& q = top.primes().back();
  const Mask bit = Mask{1} << (top.k() - 1);
  bool u_zero = true, v_zero = true;
  for (Mask J = 0; J < top.degree(); ++J) {
    if (c[J] == 0) continue;
    ((J & bit) ? v_zero : u_zero) = false;
  }
  if (u_zero || v_zero) throw Error(ErrorKind::DegeneratePart, to_string(c));
  Rational tr = trace(c * c);
  return tr > 0 && tr * tr > q;
}

/// Case b on one sample v in K: Tr_L((v sqrt q)^2) = 2 q Tr_K(v^2),
/// 2 q Tr_K(v^2) >= q / 2^{k+1}, and (q / 2^{k+1})^2 > q.
inline bool check_case_b_chain(const FieldElement& v, const MultiquadField& extension) {
  if (v.is_zero()) throw Error(ErrorKind::DegeneratePart, "v = 0");
  const Integer& q = extension.primes().back();
  const unsigned k = v.field().k();
  const Mask bit = Mask{1} << k;
  FieldElement c = lift(v, extension) * FieldElement::basis(extension, bit);
  const Rational lhs = trace(c * c);
  const Rational rhs = 2 * Rational(q) * trace(v * v);
  if (lhs != rhs) return false;
  const Rational floor_value(q, pow2(k + 1));
  return rhs >= floor_value && floor_value * floor_value > q;
}

struct Tower {
  Integer D;
  std::size_t N = 0;
  WitnessSet base;
  Certificate base_certificate;
  std::vector<TowerStep> steps;
  WitnessSet top;  // witnesses expressed in the top field
};

/// Base witnesses by certified search in Q(sqrt D), then k - 1 lifting steps.
/// The base certificate is machine-enumerated; the upper levels rest on the
/// logged q constraints together with the lifting argument.
inline Tower build_tower(const Integer& D, std::size_t N, unsigned k, const std::vector<std::size_t>& offsets,
                         const Integer& trace_bound = 1000, std::uint64_t pair_budget = kDefaultPairBudget) {
  if (k < 1) throw Error(ErrorKind::Format, "k must be at least 1");
  SearchOutcome found = search_witnesses(D, N, trace_bound, pair_budget);
  if (found.status != SearchStatus::Found) {
    throw Error(ErrorKind::BaseWitnessNotFound, "no witness set for D = " + D.get_str());
  }
  Tower tower{D, N, *found.witnesses, *found.certificate, {}, *found.witnesses};
  for (unsigned level = 1; level < k; ++level) {
    const std::size_t offset = level - 1 < offsets.size() ? offsets[level - 1] : 0;
    TowerStep step = select_next_q(tower.top.field, tower.top, offset);
    tower.top = lift_witnesses(step);
    tower.steps.push_back(std::move(step));
  }
  return tower;
}

struct CaseSampleReport {
  std::size_t case_b_samples = 0;
  std::size_t case_b_violations = 0;
  std::size_t case_c_samples = 0;
  std::size_t case_c_violations = 0;
};

/// Samples case b with v in (1/2^{k+1}) Z[sqrt p_I] of K and case c with
/// random integral c = u + v sqrt q in L, for every step of the tower.
inline CaseSampleReport sample_case_checks(const Tower& tower, std::size_t samples_per_step, std::uint64_t seed) {
  CaseSampleReport rep;
  std::mt19937_64 rng(seed);
  for (const auto& step : tower.steps) {
    const MultiquadField L = step.base_field.extend(step.q);
    const MultiquadField& K = step.base_field;
    const Integer den = pow2(K.k() + 1);
    std::uniform_int_distribution<long> small(-40, 40);
    for (std::size_t s = 0; s < samples_per_step; ++s) {
      std::vector<Rational> coeffs(K.degree());
      bool zero = true;
      for (auto& c : coeffs) {
        c = Rational(small(rng), den);
        c.canonicalize();
        zero = zero && c == 0;
      }
      if (zero) coeffs[0] = Rational(1, den);
      ++rep.case_b_samples;
      if (!check_case_b_chain(FieldElement(K, coeffs), L)) ++rep.case_b_violations;
    }
    const Mask bit = Mask{1} << K.k();
    for (std::size_t s = 0; s < samples_per_step;) {
      FieldElement c = random_integral_element(L, rng, 6);
      bool u = false, v = false;
      for (Mask J = 0; J < L.degree(); ++J) {
        if (c[J] != 0) ((J & bit) ? v : u) = true;
      }
      if (!u || !v) continue;
      ++s;
      ++rep.case_c_samples;
      if (!check_case_c_bound(c)) ++rep.case_c_violations;
    }
  }
  return rep;
}

}  // namespace mqf
