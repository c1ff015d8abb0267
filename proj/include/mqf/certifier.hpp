#pragma once

// Exhaustive check of the pair condition behind the lower bound on the
// number of variables of universal forms:
//
//   for i < j:  c in O_K and 4 a_i a_j >= c^2 (totally)  implies  c = 0.
//
// A set of N elements passing it for every pair rules out universal
// (N-1)-ary forms, so m(K) >= N.

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <vector>

#include "mqf/indecomposables.hpp"
#include "mqf/integers.hpp"
#include "mqf/interval.hpp"
#include "mqf/lattice_walk.hpp"

namespace mqf {

inline constexpr std::uint64_t kDefaultPairBudget = 100'000'000;

struct WitnessSet {
  MultiquadField field;
  std::vector<FieldElement> elements;
  bool certified = false;
};

enum class PairStatus { Holds, Violated, BudgetExceeded };

struct PairVerdict {
  std::size_t i = 0;
  std::size_t j = 0;
  PairStatus status = PairStatus::BudgetExceeded;
  std::optional<FieldElement> violating_c;
  std::uint64_t points_scanned = 0;
  std::uint64_t near_misses = 0;  // non-integral lattice points c with 4ab >= c^2

  bool holds() const { return status == PairStatus::Holds; }
};

struct Certificate {
  MultiquadField field;
  std::vector<FieldElement> witnesses;
  std::vector<PairVerdict> pairs;
  Integer lattice_denominator;
  std::optional<std::size_t> m_lower_bound;  // present iff every pair holds
};

/// The region every violating c must lie in: the superset box from
/// |sigma_t(c)| <= sqrt(sigma_t(4ab)), and the trace ellipsoid
/// Tr(c^2) = 2^k sum c_I^2 p_I <= Tr(4ab), i.e. sum m_I^2 p_I <= 2^k Tr(4ab)
/// for c_I = m_I / 2^k.
struct PairRegion {
  FieldElement target;  // 4ab
  LatticeBox box;
  Integer ellipsoid_radius;
  std::vector<double> embedding_radius;  // sqrt(sigma_t(4ab)), approximate
};

inline PairRegion pair_region(const FieldElement& a, const FieldElement& b) {
  a.check_same(b);
  const MultiquadField& f = a.field();
  FieldElement target = a * b * Rational(4);
  std::vector<Rational> bounds;
  std::vector<double> radius;
  for (Mask t = 0; t < f.degree(); ++t) {
    Enclosure e = enclose(target, t);
    bounds.push_back(sqrt_upper(e.hi > 0 ? e.hi : Rational(0)));
    radius.push_back(std::sqrt(std::max(0.0, e.hi.get_d())));
  }
  LatticeBox box = superset_lattice_box(f, bounds);
  Integer radius_int = floor(Rational(trace(target) * box.denominator));
  return {std::move(target), std::move(box), std::move(radius_int), std::move(radius)};
}

namespace detail {

// Shell radii R_0 < R_1 < ... < R_last = R, each about twice the previous.
inline std::vector<Integer> shell_radii(const Integer& radius) {
  std::vector<Integer> out{radius};
  Integer r = radius;
  while (r > 1) {
    r /= 2;
    out.push_back(r);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// Classifies one lattice point c. 0: c^2 not below 4ab; 1: below but c not
// integral (near miss); 2: genuine violation.
inline int classify_candidate(const PairRegion& region, std::span<const std::int64_t> m, bool prefilter,
                              std::vector<double>& emb, std::optional<FieldElement>& c_out) {
  const MultiquadField& f = region.target.field();
  if (prefilter) {
    double mag = 0.0;
    lattice_point_embeddings(f, m, emb, &mag);
    for (std::size_t t = 0; t < emb.size(); ++t) {
      const double r = region.embedding_radius[t];
      if (std::abs(emb[t]) > r + 1e-9 * (1 + r) + 1e-12 * mag) return 0;
    }
  }
  FieldElement c = FieldElement::from_numerators(f, m, region.box.denominator);
  if (!succeq(region.target, c * c)) return 0;
  if (!is_algebraic_integer(c)) return 1;
  c_out = std::move(c);
  return 2;
}

}  // namespace detail

/// Decides the pair condition for (a, b) by enumerating the region above,
/// ellipsoid shells from the inside out so small violations surface first.
/// One representative of each {c, -c} is scanned.
inline PairVerdict pair_condition_certify(const FieldElement& a, const FieldElement& b,
                                          std::uint64_t budget = kDefaultPairBudget, std::size_t i = 0,
                                          std::size_t j = 1) {
  a.check_same(b);
  require_totally_positive_integer(a);
  require_totally_positive_integer(b);
  PairRegion region = pair_region(a, b);
  PairVerdict out;
  out.i = i;
  out.j = j;

  LatticeWalker walker(region.box);
  std::vector<double> lo(region.embedding_radius.size());
  for (std::size_t t = 0; t < lo.size(); ++t) lo[t] = -region.embedding_radius[t];
  walker.set_window(lo, region.embedding_radius);
  walker.set_half_space(true);

  std::vector<double> emb;
  std::optional<Integer> previous;
  for (const Integer& radius : detail::shell_radii(region.ellipsoid_radius)) {
    walker.set_ellipsoid(radius, previous);
    WalkResult r = walker.walk(
        [&](std::span<const std::int64_t> m) {
          int kind = detail::classify_candidate(region, m, true, emb, out.violating_c);
          if (kind == 1) ++out.near_misses;
          return kind == 2 ? Visit::Stop : Visit::Continue;
        },
        budget - out.points_scanned);
    out.points_scanned += r.visited;
    if (out.violating_c) {
      out.status = PairStatus::Violated;
      return out;
    }
    if (r.budget_exceeded) {
      out.status = PairStatus::BudgetExceeded;
      return out;
    }
    previous = radius;
  }
  out.status = PairStatus::Holds;
  return out;
}

/// Every lattice point c != 0 (one per sign pair) with 4ab >= c^2, split into
/// integral violations and non-integral near misses. `pruned` selects the
/// certifier's region; otherwise the whole superset box is scanned with
/// exact tests only. Used to cross-check the two enumerations.
struct ViolationScan {
  std::vector<FieldElement> violations;
  std::vector<FieldElement> near_misses;
  std::uint64_t scanned = 0;
  bool complete = false;
};

inline ViolationScan scan_violations(const FieldElement& a, const FieldElement& b, bool pruned,
                                     std::uint64_t budget = kDefaultPairBudget) {
  a.check_same(b);
  require_totally_positive_integer(a);
  require_totally_positive_integer(b);
  PairRegion region = pair_region(a, b);
  LatticeWalker walker(region.box);
  walker.set_half_space(true);
  if (pruned) {
    std::vector<double> lo(region.embedding_radius.size());
    for (std::size_t t = 0; t < lo.size(); ++t) lo[t] = -region.embedding_radius[t];
    walker.set_window(lo, region.embedding_radius);
    walker.set_ellipsoid(region.ellipsoid_radius);
  }
  ViolationScan out;
  std::vector<double> emb;
  const MultiquadField& f = a.field();
  WalkResult r = walker.walk(
      [&](std::span<const std::int64_t> m) {
        std::optional<FieldElement> c;
        int kind = detail::classify_candidate(region, m, pruned, emb, c);
        if (kind == 2) out.violations.push_back(std::move(*c));
        if (kind == 1) out.near_misses.push_back(FieldElement::from_numerators(f, m, region.box.denominator));
        return Visit::Continue;
      },
      budget);
  out.scanned = r.visited;
  out.complete = !r.budget_exceeded;
  return out;
}

/// Runs the pair check on every i < j. With jobs > 1 the pairs are farmed out
/// to threads; results are merged in pair order, so output does not depend
/// on scheduling.
inline Certificate certify_witness_set(const WitnessSet& w, std::uint64_t budget = kDefaultPairBudget,
                                       unsigned jobs = 1) {
  for (const auto& e : w.elements) {
    if (!(e.field() == w.field)) throw Error(ErrorKind::FieldMismatch, "witness outside the field");
    require_totally_positive_integer(e);
  }
  Certificate cert{w.field, w.elements, {}, pow2(w.field.k()), std::nullopt};
  std::vector<std::pair<std::size_t, std::size_t>> todo;
  for (std::size_t i = 0; i < w.elements.size(); ++i) {
    for (std::size_t j = i + 1; j < w.elements.size(); ++j) todo.emplace_back(i, j);
  }
  auto run = [&](std::size_t idx) {
    auto [i, j] = todo[idx];
    return pair_condition_certify(w.elements[i], w.elements[j], budget, i, j);
  };
  if (jobs <= 1) {
    for (std::size_t idx = 0; idx < todo.size(); ++idx) cert.pairs.push_back(run(idx));
  } else {
    cert.pairs.resize(todo.size());
    for (std::size_t start = 0; start < todo.size(); start += jobs) {
      std::vector<std::future<PairVerdict>> batch;
      for (std::size_t idx = start; idx < std::min(todo.size(), start + jobs); ++idx) {
        batch.push_back(std::async(std::launch::async, run, idx));
      }
      for (std::size_t b = 0; b < batch.size(); ++b) cert.pairs[start + b] = batch[b].get();
    }
  }
  if (std::all_of(cert.pairs.begin(), cert.pairs.end(), [](const PairVerdict& p) { return p.holds(); })) {
    cert.m_lower_bound = w.elements.size();
  }
  return cert;
}

}  // namespace mqf
