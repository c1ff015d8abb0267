#pragma once

// JSON wire formats.
//   field       {"primes": [p_1, ...]}
//   element     {"coeffs": {"<mask>": "n/d", ...}}   zero coefficients omitted
//   witness set {"field", "elements", "certificate"?}
//   certificate {"field", "witnesses", "pairs", "lattice", "pair_convention", "conclusion"}
//   tower       {"D", "N", "base_certificate", "steps", "top_field", "top_witnesses", "claim"}
// Integers that may outgrow 64 bits are written as decimal strings.

#include <json.hpp>

#include <string>
#include <vector>

#include "mqf/certifier.hpp"
#include "mqf/indecomposables.hpp"
#include "mqf/integers.hpp"
#include "mqf/tower.hpp"

namespace mqf {

using Json = nlohmann::json;

inline Json integer_to_json(const Integer& z) {
  if (fits_int64(z)) return Json(to_int64(z));
  return Json(z.get_str());
}

inline Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
  if (j.is_string()) return parse_integer(j.get<std::string>());
  throw Error(ErrorKind::Format, "expected an integer, got " + j.dump());
}

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::Format, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline Json field_to_json(const MultiquadField& f) {
  Json primes = Json::array();
  for (const auto& p : f.primes()) primes.push_back(integer_to_json(p));
  return Json{{"primes", primes}};
}

inline MultiquadField field_from_json(const Json& j) {
  const Json& primes = member(j, "primes");
  if (!primes.is_array()) throw Error(ErrorKind::Format, "primes must be an array");
  std::vector<Integer> p;
  for (const auto& v : primes) p.push_back(integer_from_json(v));
  return MultiquadField::make(p);
}

inline Json element_to_json(const FieldElement& x) {
  Json coeffs = Json::object();
  for (Mask I = 0; I < x.coeffs().size(); ++I) {
    if (x[I] != 0) coeffs[std::to_string(I)] = to_fraction_string(x[I]);
  }
  return Json{{"coeffs", coeffs}};
}

inline FieldElement element_from_json(const MultiquadField& f, const Json& j) {
  const Json& coeffs = member(j, "coeffs");
  if (!coeffs.is_object()) throw Error(ErrorKind::Format, "coeffs must be an object");
  FieldElement x(f);
  for (const auto& [key, value] : coeffs.items()) {
    Integer mask = parse_integer(key);
    if (mask < 0 || mask >= Integer(static_cast<unsigned long>(f.degree()))) {
      throw Error(ErrorKind::Format, "mask out of range: " + key);
    }
    if (!value.is_string()) throw Error(ErrorKind::Format, "coefficient must be a string");
    x.set(static_cast<Mask>(mask.get_ui()), parse_rational(value.get<std::string>()));
  }
  return x;
}

inline Json elements_to_json(const std::vector<FieldElement>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(element_to_json(x));
  return a;
}

inline std::vector<FieldElement> elements_from_json(const MultiquadField& f, const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::Format, "expected an array of elements");
  std::vector<FieldElement> out;
  for (const auto& e : j) out.push_back(element_from_json(f, e));
  return out;
}

inline Json basis_to_json(const IntegralBasis& b) { return elements_to_json(b.basis); }

inline Json verdict_to_json(const IndecomposabilityVerdict& v) {
  Json j{{"element", element_to_json(v.element)},
         {"verdict", to_string(v.verdict)},
         {"budget_used", v.budget_used}};
  j["witness"] = v.witness ? element_to_json(*v.witness) : Json(nullptr);
  return j;
}

inline const char* to_string(PairStatus s) {
  switch (s) {
    case PairStatus::Holds: return "holds";
    case PairStatus::Violated: return "violated";
    case PairStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

inline Json pair_to_json(const PairVerdict& p) {
  Json j{{"i", p.i}, {"j", p.j}, {"status", to_string(p.status)}, {"scanned", p.points_scanned},
         {"near_misses", p.near_misses}};
  j["holds"] = p.status == PairStatus::BudgetExceeded ? Json(nullptr) : Json(p.holds());
  j["c"] = p.violating_c ? element_to_json(*p.violating_c) : Json(nullptr);
  return j;
}

inline Json certificate_to_json(const Certificate& c) {
  Json pairs = Json::array();
  for (const auto& p : c.pairs) pairs.push_back(pair_to_json(p));
  Json j{{"field", field_to_json(c.field)},
         {"witnesses", elements_to_json(c.witnesses)},
         {"pairs", pairs},
         {"lattice", {{"kind", "superset"}, {"denominator", integer_to_json(c.lattice_denominator)}}},
         {"pair_convention", "i<j"}};
  j["conclusion"] = c.m_lower_bound ? Json{{"m_lower_bound", *c.m_lower_bound}} : Json(nullptr);
  return j;
}

inline Json witness_set_to_json(const WitnessSet& w, const Certificate* cert = nullptr) {
  Json j{{"field", field_to_json(w.field)}, {"elements", elements_to_json(w.elements)}};
  j["certificate"] = cert ? certificate_to_json(*cert) : Json(nullptr);
  return j;
}

inline WitnessSet witness_set_from_json(const Json& j) {
  WitnessSet w;
  w.field = field_from_json(member(j, "field"));
  w.elements = elements_from_json(w.field, member(j, "elements"));
  return w;
}

inline Json step_to_json(const TowerStep& s) {
  Json gcds = Json::array();
  for (const auto& p : s.base_field.primes()) gcds.push_back(integer_to_json(gcd(p, s.q)));
  return Json{{"base_field", field_to_json(s.base_field)},
              {"witnesses", elements_to_json(s.witnesses)},
              {"q", s.q.get_str()},
              {"offset", s.offset},
              {"max_pair_trace", s.max_pair_trace.get_str()},
              {"constraints",
               {{"sqrt_q_gt_2_pow_k_plus_1", {{"q", s.q.get_str()}, {"must_exceed", s.power_bound.get_str()}}},
                {"sqrt_q_gt_8_max_trace", {{"q", s.q.get_str()}, {"must_exceed", s.trace_bound.get_str()}}},
                {"coprime", gcds},
                {"squarefree", is_squarefree(s.q)}}}};
}

inline Json tower_to_json(const Tower& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps) steps.push_back(step_to_json(s));
  Json j{{"D", t.D.get_str()},
         {"N", t.N},
         {"k", t.steps.size() + 1},
         {"base_certificate", certificate_to_json(t.base_certificate)},
         {"steps", steps},
         {"top_field", field_to_json(t.top.field)},
         {"top_witnesses", elements_to_json(t.top.elements)}};
  j["claim"] = {
      {"m_lower_bound", t.base_certificate.m_lower_bound ? Json(*t.base_certificate.m_lower_bound) : Json(nullptr)},
      {"base_level", "machine-enumerated certificate over Q(sqrt D)"},
      {"upper_levels", t.steps.empty() ? "none"
                                       : "machine-checked q constraints; the pair condition in each extension "
                                         "follows from the lifting argument, not from enumeration"}};
  return j;
}

}  // namespace mqf
