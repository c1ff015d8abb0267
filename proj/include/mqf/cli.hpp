#pragma once

// Command-line front end. Exit codes: 0 ok / verified, 1 verified false,
// 2 budget exhausted, 3 input error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mqf/cf_quadratic.hpp"
#include "mqf/expr.hpp"
#include "mqf/json_io.hpp"
#include "mqf/tower.hpp"
#include "mqf/verify.hpp"

namespace mqf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitInput = 3;

struct RunConfig {
  std::string command;
  std::string field;
  std::string expr;
  std::string input;
  std::string output;
  std::vector<std::string> elems;
  std::string D = "0";
  std::string d_max;
  std::size_t N = 3;
  unsigned k = 2;
  std::vector<std::size_t> offsets;
  std::string trace_bound = "1000";
  std::size_t convergent_count = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> budget;
  unsigned jobs = 1;
  bool deterministic = false;
  bool deep_verify = false;
  bool json = false;
};

inline MultiquadField parse_field(const std::string& spec) {
  std::vector<Integer> primes;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part.erase(0, part.find_first_not_of(' '));
    part.erase(part.find_last_not_of(' ') + 1);
    primes.push_back(parse_integer(part));
  }
  return MultiquadField::make(primes);
}

inline std::uint64_t effective_budget(const RunConfig& cfg, std::uint64_t fallback) {
  if (cfg.budget) return *cfg.budget;
  if (const char* env = std::getenv("MQF_BUDGET")) {
    try {
      Integer b = parse_integer(env);
      if (b > 0 && b.fits_ulong_p()) return b.get_ui();
    } catch (const Error&) {
    }
    throw Error(ErrorKind::Format, std::string("MQF_BUDGET must be a positive integer, got '") + env + "'");
  }
  return fallback;
}

inline Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Format, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Format, path + ": " + e.what());
  }
}

inline void emit(const RunConfig& cfg, const Json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorKind::Format, "cannot write " + cfg.output);
  f << text;
}

inline int cmd_field(const RunConfig& cfg, std::ostream& out) {
  const MultiquadField f = parse_field(cfg.field);
  Json j = field_to_json(f);
  j["degree"] = f.degree();
  Json rad = Json::object();
  for (Mask I = 1; I < f.degree(); ++I) rad[std::to_string(I)] = integer_to_json(f.radicand(I));
  j["radicands"] = rad;
  if (f.k() == 2) j["integral_basis"] = basis_to_json(biquadratic_basis(f));
  if (cfg.json) {
    emit(cfg, j, out);
    return kExitOk;
  }
  out << f.describe() << "  degree " << f.degree() << "\n";
  out << std::left << std::setw(8) << "mask" << "p_I\n";
  for (Mask I = 1; I < f.degree(); ++I) {
    out << std::left << std::setw(8) << I << f.radicand(I).get_str() << "\n";
  }
  if (f.k() == 2) {
    out << "integral basis:";
    for (const auto& b : biquadratic_basis(f).basis) out << "  " << to_string(b);
    out << "\n";
  }
  return kExitOk;
}

inline int cmd_elem(const RunConfig& cfg, std::ostream& out) {
  const MultiquadField f = parse_field(cfg.field);
  ExprValue v = evaluate(f, cfg.expr);
  if (cfg.json) {
    Json j;
    if (const auto* x = std::get_if<FieldElement>(&v)) j = element_to_json(*x);
    else if (const auto* p = std::get_if<Polynomial>(&v)) {
      Json c = Json::array();
      for (const auto& r : p->coeffs) c.push_back(to_fraction_string(r));
      j = Json{{"charpoly_ascending", c}};
    } else {
      j = Json(std::get<bool>(v));
    }
    emit(cfg, j, out);
  } else {
    out << to_string(v) << "\n";
  }
  return kExitOk;
}

inline int cmd_indec(const RunConfig& cfg, std::ostream& out) {
  const MultiquadField f = parse_field(cfg.field);
  FieldElement x = parse_element(f, cfg.expr);
  const std::uint64_t budget = effective_budget(cfg, kDefaultDecompositionBudget);
  IndecomposabilityVerdict v = classify_indecomposable(x, budget);
  Json j = verdict_to_json(v);
  j["trace_bound_holds"] = trace_bound_holds(x);
  if (f.k() == 2) j["normab_criterion"] = normab_criterion(x);
  if (cfg.json) {
    emit(cfg, j, out);
  } else {
    out << to_string(x) << ": " << to_string(v.verdict);
    if (v.witness) out << "  (" << to_string(*v.witness) << " + " << to_string(x - *v.witness) << ")";
    out << "\n";
  }
  if (v.verdict == Indecomposability::Unknown) return kExitBudget;
  return v.indecomposable() ? kExitOk : kExitFalse;
}

inline int cmd_cf(const RunConfig& cfg, std::ostream& out) {
  CFExpansion cf = cf_expand(parse_integer(cfg.D));
  Json period = Json::array();
  for (const auto& a : cf.period) period.push_back(integer_to_json(a));
  Json j{{"D", integer_to_json(cf.D)}, {"a0", integer_to_json(cf.a0)}, {"period", period}};
  const std::size_t count = cfg.convergent_count ? cfg.convergent_count : cf.period.size();
  Json conv = Json::array();
  for (const auto& [p, q] : convergents(cf, count)) conv.push_back(p.get_str() + "/" + q.get_str());
  j["convergents"] = conv;
  const Integer T = parse_integer(cfg.trace_bound);
  std::vector<FieldElement> pool = quadratic_candidates(cf, T, effective_budget(cfg, kDefaultDecompositionBudget));
  j["indecomposables_trace_bound"] = T.get_str();
  j["indecomposables"] = elements_to_json(pool);
  if (cfg.json) {
    emit(cfg, j, out);
    return kExitOk;
  }
  out << "sqrt " << cf.D.get_str() << " = [" << cf.a0.get_str() << ";";
  for (std::size_t i = 0; i < cf.period.size(); ++i) out << (i ? "," : " ") << cf.period[i].get_str();
  out << "]\n";
  for (std::size_t n = 0; n < conv.size(); ++n) out << "p" << n << "/q" << n << " = " << conv[n].get<std::string>() << "\n";
  out << "indecomposables with trace <= " << T.get_str() << ":\n";
  for (const auto& x : pool) out << std::left << std::setw(8) << trace(x).get_str() << to_string(x) << "\n";
  return kExitOk;
}

inline int status_exit(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return kExitOk;
    case SearchStatus::PoolExhausted: return kExitFalse;
    case SearchStatus::BudgetExceeded: return kExitBudget;
  }
  return kExitInput;
}

inline int cmd_witness(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t budget = effective_budget(cfg, kDefaultPairBudget);
  const Integer T = parse_integer(cfg.trace_bound);
  Integer D = parse_integer(cfg.D);
  SearchOutcome o;
  if (!cfg.d_max.empty()) {
    auto found = scan_for_witnesses(cfg.N, D, parse_integer(cfg.d_max), T, budget);
    if (!found) {
      err << "no D in [" << D.get_str() << ", " << cfg.d_max << "] admits " << cfg.N << " witnesses\n";
      return kExitFalse;
    }
    D = found->first;
    o = std::move(found->second);
  } else {
    o = search_witnesses(D, cfg.N, T, budget);
  }
  if (o.status != SearchStatus::Found) {
    err << "D = " << D.get_str() << ": " << (o.status == SearchStatus::BudgetExceeded ? "budget exhausted" : "pool exhausted")
        << " (pool " << o.pool_size << ", pairs checked " << o.pairs_checked << ")\n";
    return status_exit(o.status);
  }
  emit(cfg, witness_set_to_json(*o.witnesses, &*o.certificate), out);
  return kExitOk;
}

inline int certificate_exit(const Certificate& c) {
  bool budget = false;
  for (const auto& p : c.pairs) {
    if (p.status == PairStatus::Violated) return kExitFalse;
    budget = budget || p.status == PairStatus::BudgetExceeded;
  }
  return budget ? kExitBudget : kExitOk;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& out) {
  WitnessSet w;
  if (!cfg.input.empty()) {
    w = witness_set_from_json(read_json(cfg.input));
  } else {
    if (cfg.field.empty() || cfg.elems.empty()) throw Error(ErrorKind::Format, "certify needs a file or --field and --elem");
    w.field = parse_field(cfg.field);
    for (const auto& e : cfg.elems) w.elements.push_back(parse_element(w.field, e));
  }
  Certificate c = certify_witness_set(w, effective_budget(cfg, kDefaultPairBudget), cfg.deterministic ? 1 : cfg.jobs);
  emit(cfg, certificate_to_json(c), out);
  return certificate_exit(c);
}

inline int cmd_tower(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::uint64_t budget = effective_budget(cfg, kDefaultPairBudget);
  Tower t = build_tower(parse_integer(cfg.D), cfg.N, cfg.k, cfg.offsets, parse_integer(cfg.trace_bound), budget);
  Json j = tower_to_json(t);
  int code = kExitOk;
  if (cfg.samples > 0) {
    CaseSampleReport r = sample_case_checks(t, cfg.samples, cfg.seed);
    j["case_samples"] = {{"seed", cfg.seed},
                         {"case_b", {{"samples", r.case_b_samples}, {"violations", r.case_b_violations}}},
                         {"case_c", {{"samples", r.case_c_samples}, {"violations", r.case_c_violations}}}};
    if (r.case_b_violations || r.case_c_violations) code = kExitFalse;
  }
  if (cfg.deep_verify) {
    Certificate deep = certify_witness_set(t.top, budget, cfg.deterministic ? 1 : cfg.jobs);
    j["deep_verify"] = certificate_to_json(deep);
    const int deep_code = certificate_exit(deep);
    if (deep_code != kExitOk) {
      err << "deep verification in " << t.top.field.describe() << ": "
          << (deep_code == kExitBudget ? "budget exhausted" : "violation found") << "\n";
      if (code == kExitOk) code = deep_code;
    }
  }
  emit(cfg, j, out);
  return code;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Json j = read_json(cfg.input);
  const std::uint64_t budget = effective_budget(cfg, kDefaultPairBudget);
  VerifyReport rep;
  // A readable document that fails to replay is a failed verification, not an input error.
  try {
    rep = verify_document(j, budget, cfg.deterministic ? 1 : cfg.jobs);
    if (rep.kind == "tower" && j.contains("deep_verify") && !j.at("deep_verify").is_null()) {
      VerifyReport deep = verify_certificate(j.at("deep_verify"), budget);
      for (auto& p : deep.problems) rep.fail("deep_verify: " + p);
    }
  } catch (const Error& e) {
    rep.fail(e.what());
  } catch (const Json::exception& e) {
    rep.fail(std::string("malformed document: ") + e.what());
  }
  if (rep.ok()) {
    out << rep.kind << " verified\n";
    return kExitOk;
  }
  for (const auto& p : rep.problems) err << "mismatch: " << p << "\n";
  return kExitFalse;
}

/// Parses argv and runs one subcommand; never throws.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Exact arithmetic in multiquadratic fields and certified lower bounds for universal forms"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t budget = 0;
  auto* budget_opt = app.add_option("--budget", budget, "lattice points per search (default 1e8 per pair)")
                         ->check(CLI::PositiveNumber);
  app.add_option("--jobs", cfg.jobs, "worker threads for pair certification")->check(CLI::PositiveNumber);
  app.add_flag("--deterministic", cfg.deterministic, "sequential, reproducible merges");
  app.add_option("-o,--out", cfg.output, "write JSON here instead of standard output");

  auto* field = app.add_subcommand("field", "inspect a field");
  field->add_option("--field,--primes", cfg.field, "comma-separated generators, e.g. 2,3")->required();
  field->add_flag("--json", cfg.json);

  auto* elem = app.add_subcommand("elem", "evaluate an element expression");
  elem->add_option("--field", cfg.field)->required();
  elem->add_option("--expr", cfg.expr)->required();
  elem->add_flag("--json", cfg.json);

  auto* indec = app.add_subcommand("indec", "decide indecomposability");
  indec->add_option("--field", cfg.field)->required();
  indec->add_option("--expr,--elem", cfg.expr)->required();
  indec->add_flag("--json", cfg.json);

  auto* cf = app.add_subcommand("cf", "continued fraction of sqrt D and small indecomposables");
  cf->add_option("--D", cfg.D)->required();
  cf->add_option("--convergents", cfg.convergent_count, "how many convergents (default one period)");
  cf->add_option("--trace-bound", cfg.trace_bound, "trace bound for the indecomposable pool")->default_str("1000");
  cf->add_flag("--json", cfg.json);

  auto* witness = app.add_subcommand("witness", "search for a certified witness set in Q(sqrt D)");
  witness->add_option("--D", cfg.D, "squarefree D > 1, or scan start with --scan-to")->required();
  witness->add_option("--scan-to", cfg.d_max, "scan D up to this bound");
  witness->add_option("--N", cfg.N, "number of witnesses")->check(CLI::PositiveNumber);
  witness->add_option("--trace-bound", cfg.trace_bound, "largest candidate trace");

  auto* certify = app.add_subcommand("certify", "certify a witness set");
  certify->add_option("file", cfg.input, "witness set JSON");
  certify->add_option("--field", cfg.field, "comma-separated generators");
  certify->add_option("--elem", cfg.elems, "witness expression (repeatable)");

  auto* tower = app.add_subcommand("tower", "build a multiquadratic tower over a certified base");
  tower->add_option("--D", cfg.D, "squarefree D of the base field")->required();
  tower->add_option("--N", cfg.N, "number of witnesses")->check(CLI::PositiveNumber);
  tower->add_option("--k", cfg.k, "degree 2^k of the top field")->check(CLI::PositiveNumber);
  tower->add_option("--offsets", cfg.offsets, "offset per step (default 0)")->delimiter(',');
  tower->add_option("--trace-bound", cfg.trace_bound, "largest candidate trace in the base search");
  tower->add_option("--samples", cfg.samples, "case b / case c samples per step");
  tower->add_option("--seed", cfg.seed, "sampling seed");
  tower->add_flag("--deep-verify", cfg.deep_verify, "also certify the pairs directly in the top field");

  auto* verify = app.add_subcommand("verify", "re-check a certificate, witness set or tower");
  verify->add_option("file", cfg.input, "certificate, witness set or tower JSON")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (*budget_opt) cfg.budget = budget;
  if (cfg.deterministic) cfg.jobs = 1;

  try {
    if (*field) return cmd_field(cfg, out);
    if (*elem) return cmd_elem(cfg, out);
    if (*indec) return cmd_indec(cfg, out);
    if (*cf) return cmd_cf(cfg, out);
    if (*witness) return cmd_witness(cfg, out, err);
    if (*certify) return cmd_certify(cfg, out);
    if (*tower) return cmd_tower(cfg, out, err);
    if (*verify) return cmd_verify(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::BaseWitnessNotFound ? kExitFalse : kExitInput;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace mqf::cli
