#pragma once

// Replays a serialized certificate, witness set or tower and reports every
// disagreement with the recomputed result.

#include <string>
#include <vector>

#include "mqf/json_io.hpp"

namespace mqf {

struct VerifyReport {
  std::string kind;
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
  void fail(std::string what) { problems.push_back(std::move(what)); }
};

namespace detail {

inline std::string pair_name(std::size_t i, std::size_t j) {
  return "pair (" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

inline bool integer_field_equals(const Json& j, const char* key, const Integer& want) {
  if (!j.contains(key)) return false;
  try {
    return integer_from_json(j.at(key)) == want;
  } catch (const Error&) {
    return false;
  }
}

inline void verify_certificate_into(const Json& j, std::uint64_t budget, unsigned jobs, VerifyReport& rep,
                                    const std::string& where) {
  const MultiquadField f = field_from_json(member(j, "field"));
  WitnessSet w{f, elements_from_json(f, member(j, "witnesses")), false};
  const std::size_t n = w.elements.size();

  if (!j.contains("pair_convention") || j.at("pair_convention") != "i<j") {
    rep.fail(where + "pair_convention must be \"i<j\"");
  }
  const Json* lattice = j.contains("lattice") ? &j.at("lattice") : nullptr;
  if (!lattice || !integer_field_equals(*lattice, "denominator", pow2(f.k()))) {
    rep.fail(where + "lattice denominator must be 2^k = " + pow2(f.k()).get_str());
  }

  const Json& pairs = member(j, "pairs");
  if (!pairs.is_array() || pairs.size() != n * (n - (n > 0)) / 2) {
    rep.fail(where + "expected one entry per pair i < j");
    return;
  }

  std::vector<bool> bad_witness(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_totally_positive(w.elements[i]) || !is_algebraic_integer(w.elements[i])) {
      bad_witness[i] = true;
      rep.fail(where + "witness " + std::to_string(i) + " is not a totally positive algebraic integer");
    }
  }

  std::size_t idx = 0;
  bool all_hold = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t jj = i + 1; jj < n; ++jj, ++idx) {
      const Json& p = pairs.at(idx);
      const std::string name = where + pair_name(i, jj);
      if (p.value("i", SIZE_MAX) != i || p.value("j", SIZE_MAX) != jj) {
        rep.fail(name + ": entry out of order");
        all_hold = false;
        continue;
      }
      if (bad_witness[i] || bad_witness[jj]) {
        rep.fail(name + ": involves an invalid witness");
        all_hold = false;
        continue;
      }
      PairVerdict v = pair_condition_certify(w.elements[i], w.elements[jj], budget, i, jj);
      const Json want = pair_to_json(v);
      all_hold = all_hold && v.holds();
      for (const char* key : {"status", "holds", "c", "scanned", "near_misses"}) {
        if (!p.contains(key) || p.at(key) != want.at(key)) {
          rep.fail(name + ": '" + key + "' is " + (p.contains(key) ? p.at(key).dump() : "missing") +
                   ", recomputed " + want.at(key).dump());
        }
      }
      if (v.violating_c) {
        // Soundness of the violation itself, independent of the replay.
        const FieldElement& c = *v.violating_c;
        if (c.is_zero() || !is_algebraic_integer(c) ||
            !succeq(w.elements[i] * w.elements[jj] * Rational(4), c * c)) {
          rep.fail(name + ": violating c does not re-verify");
        }
      }
    }
  }

  const Json& conclusion = member(j, "conclusion");
  const Json want = all_hold ? Json{{"m_lower_bound", n}} : Json(nullptr);
  if (conclusion != want) {
    rep.fail(where + "conclusion is " + conclusion.dump() + ", recomputed " + want.dump());
  }
  (void)jobs;
}

}  // namespace detail

inline VerifyReport verify_certificate(const Json& j, std::uint64_t budget = kDefaultPairBudget, unsigned jobs = 1) {
  VerifyReport rep{"certificate", {}};
  detail::verify_certificate_into(j, budget, jobs, rep, "");
  return rep;
}

inline VerifyReport verify_witness_set(const Json& j, std::uint64_t budget = kDefaultPairBudget, unsigned jobs = 1) {
  VerifyReport rep{"witness_set", {}};
  WitnessSet w = witness_set_from_json(j);
  if (j.contains("certificate") && !j.at("certificate").is_null()) {
    const Json& cert = j.at("certificate");
    if (field_from_json(member(cert, "field")) != w.field) {
      rep.fail("certificate field differs from the witness set");
      return rep;
    }
    const std::vector<FieldElement> certified = elements_from_json(w.field, member(cert, "witnesses"));
    if (certified.size() != w.elements.size()) rep.fail("certificate covers a different number of witnesses");
    for (std::size_t i = 0; i < std::min(certified.size(), w.elements.size()); ++i) {
      if (certified[i] == w.elements[i]) continue;
      std::string touched;
      for (std::size_t o = 0; o < w.elements.size(); ++o) {
        if (o != i) touched += (touched.empty() ? "" : ", ") + detail::pair_name(std::min(i, o), std::max(i, o));
      }
      rep.fail("witness " + std::to_string(i) + " differs from the certified one; uncertified: " + touched);
    }
    detail::verify_certificate_into(cert, budget, jobs, rep, "certificate: ");
  } else {
    for (std::size_t i = 0; i < w.elements.size(); ++i) {
      if (!is_totally_positive(w.elements[i]) || !is_algebraic_integer(w.elements[i])) {
        rep.fail("witness " + std::to_string(i) + " is not a totally positive algebraic integer");
      }
    }
    if (!rep.ok()) return rep;
    Certificate cert = certify_witness_set(w, budget, jobs);
    for (const auto& p : cert.pairs) {
      if (!p.holds()) rep.fail(detail::pair_name(p.i, p.j) + ": " + to_string(p.status));
    }
  }
  return rep;
}

/// Tower replay. Every q constraint is re-evaluated on integers, q is
/// re-derived as the offset-th admissible value, and the lifted witnesses
/// are recomputed level by level.
inline VerifyReport verify_tower(const Json& j, std::uint64_t budget = kDefaultPairBudget, unsigned jobs = 1) {
  VerifyReport rep{"tower", {}};
  const Integer D = integer_from_json(member(j, "D"));
  const std::size_t N = member(j, "N").get<std::size_t>();
  const Json& base_cert = member(j, "base_certificate");
  detail::verify_certificate_into(base_cert, budget, jobs, rep, "base certificate: ");

  MultiquadField field = field_from_json(member(base_cert, "field"));
  if (field.k() != 1 || field.primes()[0] != D) rep.fail("base field is not Q(sqrt D)");
  std::vector<FieldElement> current = elements_from_json(field, member(base_cert, "witnesses"));
  if (current.size() != N) rep.fail("base certificate has " + std::to_string(current.size()) + " witnesses, N = " +
                                    std::to_string(N));
  const Json& cert_conclusion = member(base_cert, "conclusion");
  const Json& claim = member(j, "claim");
  const Json want_claim = cert_conclusion.is_null() ? Json(nullptr) : cert_conclusion.at("m_lower_bound");
  if (!claim.contains("m_lower_bound") || claim.at("m_lower_bound") != want_claim) {
    rep.fail("claimed m_lower_bound does not follow from the base certificate");
  }

  const Json& steps = member(j, "steps");
  if (!steps.is_array()) throw Error(ErrorKind::Format, "steps must be an array");
  if (j.contains("k") && j.at("k") != steps.size() + 1) rep.fail("k does not match the number of steps");
  for (std::size_t s = 0; s < steps.size(); ++s) {
    const Json& js = steps[s];
    const std::string where = "step " + std::to_string(s + 1) + ": ";
    if (field_from_json(member(js, "base_field")) != field) {
      rep.fail(where + "base field is not the previous level");
    }
    if (elements_from_json(field, member(js, "witnesses")) != current) {
      rep.fail(where + "witnesses are not the lifted witnesses of the previous level");
    }
    const Integer q = integer_from_json(member(js, "q"));
    const Integer max_tr = max_pair_trace(current);
    const unsigned k = field.k();
    if (!detail::integer_field_equals(js, "max_pair_trace", max_tr)) {
      rep.fail(where + "max_pair_trace should be " + max_tr.get_str());
    }
    const Json& c = member(js, "constraints");
    const Integer power_bound = pow2(2 * (k + 1));
    const Integer trace_bound = 64 * max_tr * max_tr;
    if (!detail::integer_field_equals(member(c, "sqrt_q_gt_2_pow_k_plus_1"), "must_exceed", power_bound)) {
      rep.fail(where + "logged 4^{k+1} threshold should be " + power_bound.get_str());
    }
    if (!detail::integer_field_equals(member(c, "sqrt_q_gt_8_max_trace"), "must_exceed", trace_bound)) {
      rep.fail(where + "logged 64 T^2 threshold should be " + trace_bound.get_str());
    }
    if (!(q > power_bound)) rep.fail(where + "q <= 4^{k+1}");
    if (!(q > trace_bound)) rep.fail(where + "q <= 64 T^2");
    for (const auto& p : field.primes()) {
      if (gcd(p, q) != 1) rep.fail(where + "gcd(q, " + p.get_str() + ") != 1");
    }
    if (!is_squarefree(q)) rep.fail(where + "q is not squarefree");
    const std::size_t offset = member(js, "offset").get<std::size_t>();
    if (rep.ok()) {
      TowerStep again = select_next_q(field, WitnessSet{field, current, false}, offset);
      if (again.q != q) rep.fail(where + "q is not the admissible value at offset " + std::to_string(offset) +
                                 " (expected " + again.q.get_str() + ")");
    }
    if (!rep.ok()) return rep;
    MultiquadField next = field.extend(q);
    for (auto& a : current) a = lift(a, next);
    field = next;
  }
  if (field_from_json(member(j, "top_field")) != field) rep.fail("top field does not match the steps");
  else if (elements_from_json(field, member(j, "top_witnesses")) != current) {
    rep.fail("top witnesses are not the lifted base witnesses");
  }
  return rep;
}

/// Dispatches on the document shape.
inline VerifyReport verify_document(const Json& j, std::uint64_t budget = kDefaultPairBudget, unsigned jobs = 1) {
  if (!j.is_object()) throw Error(ErrorKind::Format, "expected a JSON object");
  if (j.contains("steps")) return verify_tower(j, budget, jobs);
  if (j.contains("pairs")) return verify_certificate(j, budget, jobs);
  if (j.contains("elements")) return verify_witness_set(j, budget, jobs);
  throw Error(ErrorKind::Format, "not a certificate, witness set or tower");
}

}  // namespace mqf
