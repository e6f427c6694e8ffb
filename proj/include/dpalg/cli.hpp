/// @file cli.hpp
/// @brief The dpalg command-line front end and the named check suites.
///
/// Exit codes: 0 success or verified, 1 a check failed, 2 usage or parse
/// error.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpalg/axioms.hpp"
#include "dpalg/beck.hpp"
#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"
#include "dpalg/expr.hpp"
#include "dpalg/json_io.hpp"
#include "dpalg/kahler.hpp"
#include "dpalg/oracle.hpp"
#include "dpalg/report.hpp"

namespace dpalg::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"axioms", "congruence", "gcd", "inversion", "beck", "remark54"};
  return names;
}

inline Report suite_congruence(unsigned max_prime = 13, unsigned max_k = 40) {
  Report r;
  const char* law = "(kp)!/(k!(p!)^k) = 1 mod p";
  r.entry(law);
  for (unsigned p : primes_up_to(max_prime)) {
    for (unsigned k = 1; k <= max_k; ++k) {
      const Scalar v = cartan_congruence_residue(k, p);
      r.record(law, v.value() == 1, [&] {
        return "k = " + std::to_string(k) + ", p = " + std::to_string(p) + ": residue " + v.value().get_str();
      });
    }
  }
  return r;
}

inline Report suite_gcd(unsigned lo = 2, unsigned hi = 64) {
  Report r;
  const char* law = "gcd of C(n,1..n-1) = p for n = p^e, else 1";
  r.entry(law);
  for (unsigned n = lo; n <= hi; ++n) {
    const auto pe = prime_power(n);
    const Integer expected = pe ? Integer(pe->first) : Integer(1);
    const Integer got = gcd_middle_binomials(n);
    r.record(law, got == expected, [&] {
      return "n = " + std::to_string(n) + ": got " + got.get_str() + ", expected " + expected.get_str();
    });
  }
  return r;
}

/// phi_inversion(n, x_i) against 1 (x) phi_n (x) dx_i (zero when n is not a
/// prime power), for every generator of weight 1 and 2 <= n*w_i <= N.
inline Report suite_inversion(const AlgebraSpec& spec) {
  Report r;
  const char* law = "phi_inversion(n, x) = phi_n dx";
  r.entry(law);
  for (unsigned g = 0; g < spec.generator_count(); ++g) {
    const DPElement x = DPElement::gamma_gen(spec, g, 1);
    for (unsigned n = 2; n * spec.weight(g) <= spec.truncation(); ++n) {
      kahler::OmegaElement expected(spec);
      expected.add_term(g, EnvelopeElement::phi(spec, n));
      const kahler::OmegaElement got = kahler::phi_inversion(n, x);
      r.record(law, got == expected, [&] {
        return "n = " + std::to_string(n) + ", x" + std::to_string(g + 1) + ": got " + kahler::to_string(got);
      });
    }
  }
  return r;
}

inline Report suite_axioms(const AlgebraSpec& spec, std::size_t samples, std::uint64_t seed) {
  return check_dp_axioms(FreeAlgebraModel{spec}, samples, seed, spec.truncation());
}

inline Report suite_beck(const AlgebraSpec& spec, std::size_t samples, std::uint64_t seed) {
  Report r;
  r.merge(beck::verify_beck_axioms(kahler::omega_as_umodule(spec), samples, seed), "omega: ");
  r.merge(beck::verify_beck_axioms(beck::u0_tensor_module(spec, 2, spec.truncation()), samples, seed + 1), "U(0)^2: ");
  r.merge(beck::verify_beck_axioms(beck::zero_module(spec), samples, seed + 2), "zero: ");
  return r;
}

inline Report run_suite(const std::string& name, const AlgebraSpec& spec, std::size_t samples, std::uint64_t seed) {
  if (name == "axioms") return suite_axioms(spec, samples, seed);
  if (name == "congruence") return suite_congruence();
  if (name == "gcd") return suite_gcd();
  if (name == "inversion") return suite_inversion(spec);
  if (name == "beck") return suite_beck(spec, samples, seed);
  if (name == "remark54") return kahler::phi_derivation_identities(spec);
  throw Error("unknown suite '" + name + "'");
}

inline json report_to_json(const Report& r) {
  json laws = json::array();
  for (const auto& c : r.checks()) {
    json l{{"law", c.law}, {"passed", c.passed}, {"instances", c.instances}};
    if (c.counterexample) l["counterexample"] = *c.counterexample;
    laws.push_back(std::move(l));
  }
  return json{{"ok", r.ok()}, {"laws", std::move(laws)}};
}

inline void print_report(std::ostream& out, const Report& r, const std::string& indent = "") {
  for (const auto& c : r.checks()) {
    out << indent << (c.passed ? "PASS " : "FAIL ") << c.law << " (" << c.instances << " instances)";
    if (c.counterexample) out << ": " << *c.counterexample;
    out << "\n";
  }
}

inline json slices_to_json(const std::vector<oracle::SliceComparison>& slices) {
  json out = json::array();
  for (const auto& s : slices) {
    out.push_back({{"weight", s.weight},
                   {"oracle", json_io::to_json(s.oracle)},
                   {"closed_form", json_io::to_json(s.closed_form)},
                   {"equal", s.equal}});
  }
  return out;
}

inline void print_slices(std::ostream& out, const std::vector<oracle::SliceComparison>& slices) {
  for (const auto& s : slices) {
    out << "  weight " << s.weight << ": oracle " << oracle::to_string(s.oracle) << ", closed form "
        << oracle::to_string(s.closed_form) << (s.equal ? "  equal" : "  DIFFERENT") << "\n";
  }
}

inline RingSpec parse_ring(const std::string& text) {
  if (text == "z" || text == "Z") return RingSpec::integers();
  const std::string prefix = "zmod=";
  if (text.rfind(prefix, 0) == 0) {
    Integer m;
    if (m.set_str(text.substr(prefix.size()), 10) != 0) throw Error("bad modulus in --ring " + text);
    return RingSpec::integers_mod(m);
  }
  throw Error("--ring must be 'z' or 'zmod=M', got '" + text + "'");
}

namespace detail {

struct Options {
  std::string ring = "z";
  unsigned gens = 1;
  std::vector<unsigned> weights;
  unsigned trunc = 6;
  bool as_json = false;
  std::uint64_t seed = 1;
  std::size_t samples = 200;

  std::string expression;
  unsigned n = 0;
  std::string suite;
};

inline AlgebraSpec make_spec(const Options& o, bool gens_given) {
  const RingSpec ring = parse_ring(o.ring);
  if (!o.weights.empty()) {
    if (gens_given && o.weights.size() != o.gens) throw Error("--weights lists a different number of generators than --gens");
    return AlgebraSpec(ring, o.weights, o.trunc);
  }
  return AlgebraSpec(ring, o.gens, o.trunc);
}

inline void print_parse_error(std::ostream& err, const std::string& input, const expr::ParseError& e) {
  err << "parse error " << e.what() << "\n  " << input << "\n  " << std::string(e.offset(), ' ') << "^\n";
}

inline int cmd_omega_basis(const AlgebraSpec& spec, const Options& o, std::ostream& out) {
  const kahler::OmegaBasis basis(spec);
  if (o.as_json) {
    json slices = json::array();
    for (unsigned w = 1; w <= spec.truncation(); ++w) {
      json elems = json::array();
      for (const auto& e : basis.slice(w)) {
        elems.push_back({{"dx", e.generator + 1},
                         {"phi", json_io::phi_to_json(e.phi)},
                         {"coefficient", e.coefficient ? json_io::monomial_to_json(*e.coefficient) : json(nullptr)},
                         {"annihilator", e.annihilator.get_si()}});
      }
      slices.push_back({{"weight", w}, {"invariants", json_io::to_json(basis.slice_invariants(w))}, {"basis", elems}});
    }
    json j = json_io::spec_header(spec);
    j["slices"] = std::move(slices);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (unsigned w = 1; w <= spec.truncation(); ++w) {
    out << "weight " << w << ": " << oracle::to_string(basis.slice_invariants(w)) << "\n";
    for (const auto& e : basis.slice(w)) {
      out << "  " << kahler::to_string(e);
      if (e.annihilator != 0) out << "  (ann " << e.annihilator.get_str() << ")";
      out << "\n";
    }
  }
  return kExitOk;
}

inline int cmd_indec(const AlgebraSpec& spec, const Options& o, std::ostream& out) {
  const auto q = kahler::indecomposables(spec);
  auto name = [](const kahler::QSummand& s) {
    return s.divided_power == 1 ? "x" + std::to_string(s.generator + 1)
                                : "g" + std::to_string(s.divided_power) + "(x" + std::to_string(s.generator + 1) + ")";
  };
  if (o.as_json) {
    json slices = json::array();
    for (unsigned w = 1; w <= spec.truncation(); ++w) {
      json sums = json::array();
      for (const auto& s : q.summands) {
        if (s.weight == w) sums.push_back({{"class", name(s)}, {"annihilator", s.annihilator.get_si()}});
      }
      slices.push_back({{"weight", w}, {"invariants", json_io::to_json(q.slice_invariants(w))}, {"summands", sums}});
    }
    json j = json_io::spec_header(spec);
    j["slices"] = std::move(slices);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  for (unsigned w = 1; w <= spec.truncation(); ++w) {
    out << "weight " << w << ": " << oracle::to_string(q.slice_invariants(w));
    for (const auto& s : q.summands) {
      if (s.weight != w) continue;
      out << "  " << name(s);
      if (s.annihilator != 0) out << " (ann " << s.annihilator.get_str() << ")";
    }
    out << "\n";
  }
  return kExitOk;
}

inline int cmd_oracle(const AlgebraSpec& spec, const Options& o, std::ostream& out) {
  const auto main = oracle::verify_main_theorem(spec, 64, o.seed);
  const auto indec = oracle::verify_indecomposables(spec);
  const bool ok = main.ok() && indec.ok();
  if (o.as_json) {
    json j = json_io::spec_header(spec);
    json m = report_to_json(main.laws);
    m["slices"] = slices_to_json(main.slices);
    m["ok"] = main.ok();
    j["main_theorem"] = std::move(m);
    j["indecomposables"] = json{{"slices", slices_to_json(indec.slices)}, {"ok", indec.ok()}};
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << "I/I^2 against U(A) (x) V over " << spec.ring().name() << ", N = " << spec.truncation() << "\n";
    print_slices(out, main.slices);
    print_report(out, main.laws, "  ");
    out << "A/A^2 against U(0) (x) V\n";
    print_slices(out, indec.slices);
    out << (ok ? "verified" : "MISMATCH") << "\n";
  }
  return ok ? kExitOk : kExitCheckFailed;
}

inline int cmd_check(const AlgebraSpec& spec, const Options& o, std::ostream& out) {
  const Report r = run_suite(o.suite, spec, o.samples, o.seed);
  if (o.as_json) {
    json j = report_to_json(r);
    j["suite"] = o.suite;
    j["seed"] = o.seed;
    out << j.dump(2) << "\n";
  } else {
    out << "suite " << o.suite << " (seed " << o.seed << ")\n";
    print_report(out, r, "  ");
    out << (r.ok() ? "ok" : "FAILED") << "\n";
  }
  return r.ok() ? kExitOk : kExitCheckFailed;
}

}  // namespace detail

/// Runs one dpalg invocation; argv[0] is the program name.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  detail::Options o;
  CLI::App app{"Divided power algebras: normal forms, DP differentials and oracle checks", "dpalg"};
  app.require_subcommand(1);
  auto* ring_opt = app.add_option("--ring", o.ring, "base ring: z or zmod=M");
  auto* gens_opt = app.add_option("--gens", o.gens, "number of generators")->check(CLI::PositiveNumber);
  app.add_option("--weights", o.weights, "generator weights, comma separated")->delimiter(',');
  app.add_option("--trunc", o.trunc, "weight truncation N")->check(CLI::PositiveNumber);
  app.add_flag("--json", o.as_json, "JSON output");
  app.add_option("--seed", o.seed, "random seed for check suites");
  app.add_option("--samples", o.samples, "random samples per law");
  (void)ring_opt;

  auto* normalize = app.add_subcommand("normalize", "print the canonical form of EXPR")->fallthrough();
  normalize->add_option("expr", o.expression, "expression")->required();
  auto* gamma = app.add_subcommand("gamma", "print gamma_N(EXPR)")->fallthrough();
  gamma->add_option("n", o.n, "divided power")->required()->check(CLI::PositiveNumber);
  gamma->add_option("expr", o.expression, "expression")->required();
  auto* diff = app.add_subcommand("diff", "print the universal DP derivation of EXPR")->fallthrough();
  diff->add_option("expr", o.expression, "expression")->required();
  auto* omega = app.add_subcommand("omega-basis", "closed-form basis of the DP differentials")->fallthrough();
  auto* indec = app.add_subcommand("indec", "closed-form indecomposables A/A^2")->fallthrough();
  auto* orc = app.add_subcommand("oracle-omega", "compare I/I^2 and A/A^2 with the closed forms")->fallthrough();
  auto* check = app.add_subcommand("check", "run a named property suite")->fallthrough();
  check->add_option("suite", o.suite, "suite name")->required()->check(CLI::IsMember(suite_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::optional<AlgebraSpec> spec;
  try {
    spec = detail::make_spec(o, gens_opt->count() > 0);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (normalize->parsed() || gamma->parsed() || diff->parsed()) {
      DPElement a;
      try {
        a = expr::parse_element(o.expression, *spec);
      } catch (const expr::ParseError& e) {
        detail::print_parse_error(err, o.expression, e);
        return kExitUsage;
      }
      if (gamma->parsed()) a = divided_power(o.n, a);
      if (diff->parsed()) {
        const auto d = kahler::universal_derivation(a);
        out << (o.as_json ? json_io::to_json(d).dump(2) : kahler::to_string(d)) << "\n";
      } else {
        out << (o.as_json ? json_io::to_json(a).dump(2) : to_string(a)) << "\n";
      }
      return kExitOk;
    }
    if (omega->parsed()) return detail::cmd_omega_basis(*spec, o, out);
    if (indec->parsed()) return detail::cmd_indec(*spec, o, out);
    if (orc->parsed()) return detail::cmd_oracle(*spec, o, out);
    if (check->parsed()) return detail::cmd_check(*spec, o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

/// `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"dpalg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace dpalg::cli
