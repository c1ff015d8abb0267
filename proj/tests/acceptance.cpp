// End-to-end acceptance run: one PASS/FAIL line per criterion.
// MQF_SCAN_MAX and MQF_SCAN_TRACE override the D-scan bounds of criterion 5.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "mqf/mqf.hpp"

using namespace mqf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (secs > limit_s) {
    o.pass = false;
    o.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s limit";
  }
  if (!o.pass) ++failures;
  std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << " ("
            << std::fixed << std::setprecision(1) << secs << " s)" << std::endl;
}

FieldElement random_rational_element(const MultiquadField& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-30, 30);
  std::uniform_int_distribution<long> den(1, 6);
  FieldElement x(f);
  for (Mask I = 0; I < f.degree(); ++I) x.set(I, Rational(num(rng), den(rng)));
  return x;
}

// Integer combination of a Z-basis, shifted or squared into total positivity.
FieldElement random_tp_from_basis(const std::vector<FieldElement>& basis, std::mt19937_64& rng, long range) {
  const MultiquadField& f = basis.front().field();
  std::uniform_int_distribution<long> coef(-range, range);
  std::uniform_int_distribution<int> shape(0, 2);
  for (;;) {
    FieldElement y(f);
    for (const auto& b : basis) y = y + b * Rational(coef(rng));
    if (y.is_zero()) continue;
    if (shape(rng) == 2) return y * y;
    FieldElement x = y + Rational(positivity_shift(y) + shape(rng));
    if (!x.is_zero()) return x;
  }
}

std::vector<FieldElement> full_or_order_basis(const MultiquadField& f) {
  return f.k() == 2 ? biquadratic_basis(f).basis : product_order_basis(f);
}

std::pair<int, std::string> shell(const std::string& args) {
  std::string cmd = std::string(MQF_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Integer env_integer(const char* name, long fallback) {
  const char* v = std::getenv(name);
  return v && *v ? Integer(v) : Integer(fallback);
}

Outcome exact_arithmetic() {
  std::mt19937_64 rng(1001);
  const std::vector<std::vector<Integer>> fields{{2}, {5}, {3}, {13}, {2, 3}, {5, 13}, {6, 10}, {7, 11},
                                                 {2, 3, 5}, {3, 7, 11}, {5, 13, 17}};
  std::size_t elements = 0, mismatches = 0;
  for (const auto& primes : fields) {
    const auto f = MultiquadField::make(primes);
    const FieldElement one = FieldElement::rational(f, 1);
    for (int trial = 0; trial < 350; ++trial) {
      const FieldElement x = random_rational_element(f, rng);
      const FieldElement y = random_rational_element(f, rng);
      const FieldElement z = random_rational_element(f, rng);
      elements += 3;
      bool ok = (x * y) * z == x * (y * z) && x * y == y * x && x * (y + z) == x * y + x * z &&
                x * one == x && x + (y - x) == y;
      FieldElement conj_sum(f), conj_prod = one;
      for (Mask t = 0; t < f.degree(); ++t) {
        const FieldElement cx = conjugate(x, t);
        ok = ok && conjugate(x * y, t) == cx * conjugate(y, t) && conjugate(x + y, t) == cx + conjugate(y, t);
        conj_sum = conj_sum + cx;
        conj_prod = conj_prod * cx;
      }
      ok = ok && conj_sum == one * trace(x) && conj_prod == one * norm(x);
      ok = ok && norm(x * y) == norm(x) * norm(y) && trace(x + y) == trace(x) + trace(y);
      Rational sq = 0;
      for (Mask I = 0; I < f.degree(); ++I) sq += x[I] * x[I] * f.radicand(I);
      ok = ok && trace(x * x) == sq * Rational(pow2(f.k()));
      if (!x.is_zero()) ok = ok && x * inverse(x) == one;
      if (!ok) ++mismatches;
    }
  }
  return {mismatches == 0 && elements >= 10000,
          std::to_string(elements) + " random elements over " + std::to_string(fields.size()) + " fields, " +
              std::to_string(mismatches) + " identity failures"};
}

Outcome trace_bound_suite() {
  std::mt19937_64 rng(2002);
  const std::vector<std::vector<Integer>> fields{{2, 3},  {2, 5}, {3, 7},  {5, 13}, {6, 10},  {3, 10},
                                                 {7, 6},  {2, 7}, {5, 29}, {11, 2}, {2, 3, 5}, {2, 3, 7},
                                                 {3, 5, 7}, {5, 13, 17}, {2, 5, 11}};
  std::size_t samples = 0, violations = 0, nonrational = 0;
  for (const auto& primes : fields) {
    const auto f = MultiquadField::make(primes);
    const auto basis = full_or_order_basis(f);
    for (int i = 0; i < 1000; ++i) {
      const FieldElement x = random_tp_from_basis(basis, rng, 4);
      ++samples;
      if (!is_totally_positive(x) || !is_algebraic_integer(x)) {
        ++violations;
        continue;
      }
      if (!x.is_rational()) ++nonrational;
      if (!trace_bound_holds(x) || !trace_exceeds_min_radicand(x)) ++violations;
    }
  }

  // Sharpened bound in p = 3, q = r = 2 (mod 4), where 1, sqrt p, sqrt q, (sqrt q + sqrt r)/2
  // is an integral basis. Nonzero b, c, d force Tr > 4 sqrt p, 2 sqrt q, 2 sqrt r respectively, so
  // every non-rational element has Tr > min of the three.
  const std::vector<std::vector<Integer>> sharp{{3, 2}, {7, 6}, {3, 10}, {11, 2}, {7, 2}};
  std::size_t sharp_samples = 0, sharp_violations = 0;
  for (const auto& primes : sharp) {
    const auto f = MultiquadField::make(primes);
    const Integer p = f.radicand(1), q = f.radicand(2), r = f.radicand(3);
    if (p % 4 != 3 || q % 4 != 2 || r % 4 != 2) return {false, "bad sharpened class " + f.describe()};
    const auto basis = biquadratic_basis(f).basis;
    for (int i = 0; i < 1000; ++i) {
      const FieldElement x = random_tp_from_basis(basis, rng, 4);
      if (x.is_rational()) continue;
      ++sharp_samples;
      const Rational t = trace(x);
      const Rational t2 = t * t;
      bool ok = t > 0;
      if (x[1] != 0) ok = ok && t2 > Rational(16 * p);
      if (x[2] != 0) ok = ok && t2 > Rational(4 * q);
      if (x[3] != 0) ok = ok && t2 > Rational(4 * r);
      Integer floor_min = std::min({16 * p, 4 * q, 4 * r});
      ok = ok && t2 > Rational(floor_min);
      if (!ok) ++sharp_violations;
    }
  }
  return {violations == 0 && sharp_violations == 0 && samples >= 15000,
          std::to_string(samples) + " samples in 15 fields (" + std::to_string(nonrational) + " non-rational), " +
              std::to_string(violations) + " violations; sharpened bound: " + std::to_string(sharp_samples) +
              " samples, " + std::to_string(sharp_violations) + " violations"};
}

Outcome indecomposability_agreement() {
  const auto f = MultiquadField::make({2, 3});
  const long T = 40;
  // Totally positive x = a + b sqrt2 + c sqrt3 + d sqrt6 has a > |b| sqrt2, |c| sqrt3, |d| sqrt6,
  // with all coefficients in (1/4) Z and Tr = 4a.
  std::vector<FieldElement> all;
  for (long A = 1; A <= T; ++A) {
    const long B = static_cast<long>(std::floor(A / std::sqrt(2.0))) + 1;
    const long C = static_cast<long>(std::floor(A / std::sqrt(3.0))) + 1;
    const long D = static_cast<long>(std::floor(A / std::sqrt(6.0))) + 1;
    for (long b = -B; b <= B; ++b) {
      for (long c = -C; c <= C; ++c) {
        for (long d = -D; d <= D; ++d) {
          FieldElement x(f);
          x.set(0, Rational(A, 4));
          x.set(1, Rational(b, 4));
          x.set(2, Rational(c, 4));
          x.set(3, Rational(d, 4));
          if (is_algebraic_integer(x) && is_totally_positive(x)) all.push_back(std::move(x));
        }
      }
    }
  }
  std::size_t norm_positive = 0, unconfirmed = 0, indecomposable = 0, missed = 0, unknown = 0;
  for (const auto& x : all) {
    const bool by_norm = normab_criterion(x);
    const auto v = exhaustive_indecomposable(x);
    if (v.verdict == Indecomposability::Unknown) ++unknown;
    if (v.verdict == Indecomposability::ByExhaustion) ++indecomposable;
    if (by_norm) {
      ++norm_positive;
      if (v.verdict != Indecomposability::ByExhaustion) ++unconfirmed;
    } else if (v.verdict == Indecomposability::ByExhaustion) {
      ++missed;
    }
  }
  return {unconfirmed == 0 && unknown == 0 && !all.empty(),
          std::to_string(all.size()) + " totally positive integers with trace <= 40, " +
              std::to_string(indecomposable) + " indecomposable, " + std::to_string(norm_positive) +
              " flagged by the norm criterion (" + std::to_string(unconfirmed) + " unconfirmed), " +
              std::to_string(missed) + " missed by the criterion"};
}

Outcome certifier_soundness() {
  std::mt19937_64 rng(4004);
  const std::vector<long> Ds{2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 23};
  const std::vector<long> Ds_long{15, 35, 39, 42, 55, 66, 70, 78, 87, 91, 95};
  std::uniform_int_distribution<std::size_t> pick(0, Ds.size() - 1), pick_long(0, Ds_long.size() - 1);
  std::size_t pairs = 0, differing = 0, violated = 0, held = 0, unsound = 0, incomplete = 0;
  while (pairs < 100) {
    const long D = pairs % 2 == 0 ? Ds[pick(rng)] : Ds_long[pick_long(rng)];
    const auto f = MultiquadField::make({D});
    FieldElement a(f), b(f);
    if (pairs % 2 == 0) {
      a = random_totally_positive_integer(f, rng, 2);
      b = random_totally_positive_integer(f, rng, 2);
    } else {
      // indecomposables, where the condition often holds
      const auto pool = quadratic_candidates(cf_expand(D), 40);
      std::uniform_int_distribution<std::size_t> at(0, pool.size() - 1);
      a = pool[at(rng)];
      do b = pool[at(rng)];
      while (b == a);
    }
    ++pairs;
    const auto pruned = scan_violations(a, b, true);
    const auto full = scan_violations(a, b, false);
    if (!pruned.complete || !full.complete) {
      ++incomplete;
      continue;
    }
    std::set<std::string> ps, fs_;
    for (const auto& c : pruned.violations) ps.insert(to_string(c));
    for (const auto& c : full.violations) fs_.insert(to_string(c));
    if (ps != fs_) ++differing;
    const PairVerdict v = pair_condition_certify(a, b);
    if (v.holds() != ps.empty()) ++differing;
    if (v.holds()) ++held;
    if (v.status == PairStatus::Violated) {
      ++violated;
      const FieldElement& c = *v.violating_c;
      const bool listed = fs_.count(to_string(c)) || fs_.count(to_string(-c));
      if (c.is_zero() || !is_algebraic_integer(c) || !succeq(a * b * Rational(4), c * c) || !listed) {
        ++unsound;
      }
    }
  }
  return {differing == 0 && unsound == 0 && incomplete == 0 && violated + held == pairs,
          std::to_string(pairs) + " quadratic pairs, " + std::to_string(differing) + " differing enumerations, " +
              std::to_string(violated) + " violated and " + std::to_string(held) + " holding verdicts, " + std::to_string(unsound) + " failing re-verification"};
}

struct BaseCase {
  Integer D;
  Json witness_doc;
};

std::optional<BaseCase> base_case;

Outcome end_to_end_base() {
  const Integer scan_max = env_integer("MQF_SCAN_MAX", 100000);
  const Integer trace_bound = env_integer("MQF_SCAN_TRACE", 1000);
  auto found = scan_for_witnesses(3, 2, scan_max, trace_bound);
  if (!found) return {false, "no D <= " + scan_max.get_str() + " with 3 witnesses"};
  const auto& [D, o] = *found;
  const Json doc = witness_set_to_json(*o.witnesses, &*o.certificate);
  const Json reread = Json::parse(doc.dump(2));
  const VerifyReport rep = verify_witness_set(reread);
  std::string witnesses;
  for (const auto& x : o.witnesses->elements) witnesses += (witnesses.empty() ? "" : ", ") + to_string(x);
  base_case = BaseCase{D, reread};
  std::string detail = "D = " + D.get_str() + ", witnesses {" + witnesses + "}, certificate " +
                       (rep.ok() ? "re-verifies from JSON" : "FAILS re-verification: " + rep.problems.front());
  return {rep.ok() && o.certificate->m_lower_bound == std::optional<std::size_t>(3), detail};
}

Outcome tower_construction() {
  if (!base_case) return {false, "no base instance from criterion 5"};
  std::string detail;
  bool pass = true;
  for (unsigned k : {2u, 3u}) {
    Tower t = build_tower(base_case->D, 3, k, {}, 1000);
    const Json j = Json::parse(tower_to_json(t).dump());
    const VerifyReport rep = verify_tower(j);
    const CaseSampleReport s = sample_case_checks(t, 10000, 6000 + k);
    pass = pass && rep.ok() && s.case_b_violations == 0 && s.case_c_violations == 0 &&
           s.case_b_samples + s.case_c_samples >= 10000;
    std::string qs;
    for (const auto& step : t.steps) qs += (qs.empty() ? "" : ", ") + step.q.get_str();
    detail += (detail.empty() ? "" : "; ") + std::string("k = ") + std::to_string(k) + ": q = " + qs + ", logs " +
              (rep.ok() ? "re-verify" : "FAIL") + ", case b " + std::to_string(s.case_b_violations) + "/" +
              std::to_string(s.case_b_samples) + ", case c " + std::to_string(s.case_c_violations) + "/" +
              std::to_string(s.case_c_samples) + " violations";
  }
  return {pass, detail};
}

Outcome cli_determinism() {
  const std::string D = base_case ? base_case->D.get_str() : "55";
  const fs::path dir = fs::temp_directory_path() / ("mqf_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string witness_args = "--deterministic witness --D " + D + " --N 3 --trace-bound 1000";
  const auto a = shell(witness_args);
  const auto b = shell(witness_args);
  const auto t1 = shell("--deterministic tower --D " + D + " --N 3 --k 3 --samples 100 --seed 9");
  const auto t2 = shell("--deterministic tower --D " + D + " --N 3 --k 3 --samples 100 --seed 9");
  const bool identical = a.first == 0 && a.second == b.second && !a.second.empty() && t1.first == 0 &&
                         t1.second == t2.second;
  const fs::path good = dir / "good.json";
  std::ofstream(good) << a.second;
  const bool good_ok = shell("verify " + good.string()).first == 0;

  const Json doc = Json::parse(a.second);
  const std::vector<std::pair<std::string, std::function<void(Json&)>>> tamperings{
      {"witness coefficient", [](Json& j) { j["certificate"]["witnesses"][1]["coeffs"]["0"] = "1000/1"; }},
      {"holds flag", [](Json& j) { j["certificate"]["pairs"][0]["holds"] = false; }},
      {"conclusion", [](Json& j) { j["certificate"]["conclusion"]["m_lower_bound"] = 4; }},
      {"scanned count", [](Json& j) { j["certificate"]["pairs"][2]["scanned"] = 0; }},
      {"dropped pair", [](Json& j) { j["certificate"]["pairs"].erase(1); }},
  };
  std::size_t caught = 0;
  for (std::size_t i = 0; i < tamperings.size(); ++i) {
    Json j = doc;
    tamperings[i].second(j);
    const fs::path p = dir / ("tampered_" + std::to_string(i) + ".json");
    std::ofstream(p) << j.dump(2);
    if (shell("verify " + p.string()).first == 1) ++caught;
  }
  fs::remove_all(dir);
  return {identical && good_ok && caught == tamperings.size(),
          std::string("reruns ") + (identical ? "byte-identical" : "DIFFER") + ", valid certificate " +
              (good_ok ? "verifies" : "REJECTED") + ", " + std::to_string(caught) + "/" +
              std::to_string(tamperings.size()) + " tamperings rejected with exit 1"};
}

}  // namespace

int main() {
  report(1, "exact arithmetic", 60, exact_arithmetic);
  report(2, "trace bound", 120, trace_bound_suite);
  report(3, "indecomposability agreement", 600, indecomposability_agreement);
  report(4, "certifier soundness", 300, certifier_soundness);
  report(5, "end-to-end base case", 1800, end_to_end_base);
  report(6, "tower construction", 600, tower_construction);
  report(7, "CLI determinism and tamper detection", 60, cli_determinism);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
