// Acceptance run: one PASS/FAIL line per criterion, each with its time limit.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "dpalg/cli.hpp"
#include "dpalg/dpalg.hpp"

using namespace dpalg;
using oracle::IntegerMatrix;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
  void require(const Report& r, const std::string& what) {
    if (r.ok()) return;
    for (const auto& c : r.checks()) {
      if (!c.passed) {
        require(false, what + ": " + c.law + (c.counterexample ? " [" + *c.counterexample + "]" : ""));
        return;
      }
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.ok && in_time;
  if (!pass) ++failures;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (pass ? "PASS" : "FAIL") << "  " << id << ". " << name << "  (" << secs << " s, limit " << limit_s << " s)";
  if (!o.ok) line << "  -- " << o.detail;
  if (!in_time) line << "  -- over time limit";
  std::cout << line.str() << std::endl;
}

std::string tag(const AlgebraSpec& s) {
  return s.ring().name() + " rank " + std::to_string(s.generator_count()) + " N " + std::to_string(s.truncation());
}

// (kp)!/(k!(p!)^k) mod p, straight from factorials.
mpz_class cartan_by_factorials(unsigned k, unsigned p) {
  mpz_class num, kf, pf;
  mpz_fac_ui(num.get_mpz_t(), static_cast<unsigned long>(k) * p);
  mpz_fac_ui(kf.get_mpz_t(), k);
  mpz_fac_ui(pf.get_mpz_t(), p);
  mpz_class den = kf;
  for (unsigned i = 0; i < k; ++i) den *= pf;
  const mpz_class q = num / den;
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), q.get_mpz_t(), p);
  return r;
}

// gcd_{0<i<n} C(n, i) by direct binomials.
mpz_class gcd_by_binomials(unsigned n) {
  mpz_class g = 0, b;
  for (unsigned i = 1; i < n; ++i) {
    mpz_bin_uiui(b.get_mpz_t(), n, i);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_mpz_t());
  }
  return g;
}

beck::UModule torsion_mix(const AlgebraSpec& spec) {
  beck::UModule m(spec, {0, 2, 3});
  IntegerMatrix p2(3, 3), p3(3, 3);
  p2(1, 0) = 1;
  p3(2, 0) = 1;
  m.set_phi_action(2, p2);
  m.set_phi_action(3, p3);
  return m;
}

beck::UModule regular_module(const AlgebraSpec& spec) {
  const auto basis = full_basis(spec);
  beck::UModule m(spec, std::vector<Integer>(basis.size(), 0));
  for (const auto& mu : basis) {
    IntegerMatrix t(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const DPElement prod = DPElement::monomial(spec, mu) * DPElement::monomial(spec, basis[j]);
      for (const auto& [nu, c] : prod.terms())
        for (std::size_t i = 0; i < basis.size(); ++i)
          if (basis[i] == nu) t(i, j) = c;
    }
    m.set_a_action(mu, std::move(t));
  }
  return m;
}

const std::vector<RingSpec> kAxiomRings{RingSpec::integers(), RingSpec::integers_mod(4), RingSpec::integers_mod(5),
                                        RingSpec::integers_mod(6)};
const std::vector<RingSpec> kTheoremRings{RingSpec::integers(), RingSpec::integers_mod(4), RingSpec::integers_mod(6)};

}  // namespace

int main() {
  criterion(1, "DP axiom suite on free algebras", 60, [] {
    Outcome o;
    std::uint64_t seed = 1;
    for (const auto& ring : kAxiomRings)
      for (unsigned rank : {1u, 2u})
        for (unsigned N : {6u, 10u}) {
          const AlgebraSpec s(ring, rank, N);
          const Report r = check_dp_axioms(FreeAlgebraModel{s}, 200, seed++, N);
          o.require(r, tag(s));
          for (const auto& c : r.checks()) o.require(c.instances >= 200, tag(s) + ": too few instances of " + c.law);
        }
    return o;
  });

  criterion(2, "Cartan congruence (kp)!/(k!(p!)^k) = 1 mod p, p <= 13, k <= 40", 5, [] {
    Outcome o;
    for (unsigned p : primes_up_to(13))
      for (unsigned k = 1; k <= 40; ++k) {
        const std::string at = "k = " + std::to_string(k) + ", p = " + std::to_string(p);
        o.require(cartan_congruence_residue(k, p).value() == 1, at);
        o.require(cartan_by_factorials(k, p) == 1, at + " (factorial oracle)");
      }
    return o;
  });

  criterion(3, "gcd of middle binomials, 2 <= n <= 64", 1, [] {
    Outcome o;
    for (unsigned n = 2; n <= 64; ++n) {
      const auto pe = prime_power(n);
      const Integer expected = pe ? Integer(pe->first) : Integer(1);
      o.require(gcd_middle_binomials(n) == expected, "n = " + std::to_string(n));
      o.require(gcd_by_binomials(n) == expected, "n = " + std::to_string(n) + " (binomial oracle)");
    }
    return o;
  });

  criterion(4, "I/I^2 equals U(A) (x) V with phi actions, rank {1,2} x N {2,4,6} x {Z, Z/4, Z/6}", 600, [] {
    Outcome o;
    for (const auto& ring : kTheoremRings)
      for (unsigned rank : {1u, 2u})
        for (unsigned N : {2u, 4u, 6u}) {
          const AlgebraSpec s(ring, rank, N);
          const auto r = oracle::verify_main_theorem(s, 64, N);
          o.require(r.slices_equal(), tag(s) + ": invariant factors differ");
          o.require(r.laws, tag(s));
          o.require(r.slices.size() == N, tag(s) + ": missing slices");
        }
    return o;
  });

  criterion(5, "phi_inversion(n, x) = phi_n dx for prime powers, 0 otherwise, N = 12 over Z", 10, [] {
    Outcome o;
    const AlgebraSpec s(RingSpec::integers(), 1, 12);
    const DPElement x = DPElement::gamma_gen(s, 0, 1);
    const kahler::OmegaElement dx = kahler::OmegaElement::generator(s, 0);
    for (unsigned n = 2; n <= 12; ++n) {
      const kahler::OmegaElement got = kahler::phi_inversion(n, x);
      const std::string at = "n = " + std::to_string(n) + ": " + kahler::to_string(got);
      if (prime_power(n)) {
        o.require(!got.is_zero() && got == dx.phi(n), at);
      } else {
        o.require(got.is_zero(), at);
      }
    }
    return o;
  });

  criterion(6, "A/A^2: rank 1 N = 12 table over Z; closed form for rank 2, N <= 6 over Z and Z/6", 60, [] {
    Outcome o;
    const AlgebraSpec s(RingSpec::integers(), 1, 12);
    const std::vector<std::string> table{"[0]", "[2]", "[3]", "[2]", "[5]", "[]", "[7]", "[2]", "[3]", "[]", "[11]", "[]"};
    for (unsigned w = 1; w <= 12; ++w) {
      const std::string got = oracle::to_string(oracle::indecomposable_slice(s, w));
      o.require(got == table[w - 1], "weight " + std::to_string(w) + ": " + got);
    }
    o.require(oracle::verify_indecomposables(s).ok(), "rank 1 N 12 closed form");
    for (auto ring : {RingSpec::integers(), RingSpec::integers_mod(6)})
      for (unsigned N = 1; N <= 6; ++N) {
        const AlgebraSpec t(ring, 2, N);
        o.require(oracle::verify_indecomposables(t).ok(), tag(t));
      }
    return o;
  });

  criterion(7, "semidirect A + M on 6 modules (incl. Z + Z/2 + Z/3), negative controls detected", 60, [] {
    Outcome o;
    const AlgebraSpec z6(RingSpec::integers(), 1, 6);
    const AlgebraSpec m6(RingSpec::integers_mod(6), 2, 6);
    const std::vector<std::pair<std::string, beck::UModule>> modules{
        {"zero", beck::zero_module(z6)},
        {"U(0) (x) Z", beck::u0_tensor_module(z6, 1, 6)},
        {"U(0) (x) (Z/6)^2", beck::u0_tensor_module(m6, 2, 6)},
        {"Z + Z/2 + Z/3", torsion_mix(z6)},
        {"A_+ regular", regular_module(AlgebraSpec(RingSpec::integers(), 2, 5))},
        {"Omega tables", kahler::omega_as_umodule(z6)},
    };
    std::uint64_t seed = 100;
    for (const auto& [name, m] : modules) o.require(beck::verify_beck_axioms(m, 200, seed++), name);

    beck::UModule wrong_torsion = torsion_mix(z6);
    IntegerMatrix p2(3, 3);
    p2(2, 0) = 1;
    wrong_torsion.set_phi_action(2, p2);
    o.require(!beck::verify_beck_axioms(wrong_torsion, 200, seed++).ok(), "phi_2 into Z/3 not detected");

    beck::UModule corrupted = kahler::omega_as_umodule(z6);
    const kahler::OmegaBasis b(z6);
    IntegerMatrix q2 = corrupted.phi_action().at(2);
    const std::size_t dx = *b.index_of(0, PhiMonomial::unit(), std::nullopt);
    q2(*b.index_of(0, PhiMonomial::phi(2, 1), std::nullopt), dx) = 0;
    q2(*b.index_of(0, PhiMonomial::phi(3, 1), std::nullopt), dx) = 1;
    corrupted.set_phi_action(2, q2);
    o.require(!beck::verify_beck_axioms(corrupted, 200, seed++).ok(), "corrupted Omega phi table not detected");

    beck::AbelianDPAlgebra g6(torsion_mix(AlgebraSpec(RingSpec::integers(), 1, 12)));
    IntegerMatrix over(3, 3);
    over(1, 0) = 1;
    g6.override_gamma(6, over);
    o.require(!beck::verify_abelian_structure(g6, 200, seed++).passed(beck::law::kPrimePowerSupport),
              "gamma_6 override not detected");
    return o;
  });

  criterion(8, "phi_p identities for d on rank 2, N = 8 over Z (all basis pairs)", 30, [] {
    Outcome o;
    const Report r = kahler::phi_derivation_identities(AlgebraSpec(RingSpec::integers(), 2, 8));
    o.require(r, "rank 2 N 8");
    for (const auto& c : r.checks()) o.require(c.instances > 0, "no instances of " + c.law);
    return o;
  });

  criterion(9, "presentation quotient = closed-form basis, rank 1, N <= 6 over Z; weight 3 separates the signs", 60, [] {
    Outcome o;
    for (unsigned N = 1; N <= 6; ++N) {
      const AlgebraSpec s(RingSpec::integers(), 1, N);
      const auto p = kahler::presentation_of_omega(s, kahler::RelationSign::kDerivationLaw);
      const kahler::OmegaBasis b(s);
      for (unsigned w = 1; w <= N; ++w) {
        o.require(p.slices[w - 1].quotient_invariants() == b.slice_invariants(w),
                  "N " + std::to_string(N) + " weight " + std::to_string(w));
      }
    }
    const AlgebraSpec s3(RingSpec::integers(), 1, 3);
    const auto flipped = kahler::presentation_of_omega(s3, kahler::RelationSign::kFlippedSum);
    o.require(flipped.slices[2].quotient_invariants() != kahler::OmegaBasis(s3).slice_invariants(3),
              "weight 3 does not distinguish the relation signs");
    return o;
  });

  criterion(10, "CLI: 200-element round trip, normalize, oracle-omega", 10, [] {
    Outcome o;
    std::mt19937_64 rng(7);
    const AlgebraSpec s(RingSpec::integers(), 2, 8);
    for (int t = 0; t < 200; ++t) {
      const DPElement a = random_element(s, rng, 5);
      const std::string text = to_string(a);
      const DPElement back = expr::parse_element(text, s);
      o.require(back == a && to_string(back) == text, "round trip of " + text);
    }
    std::ostringstream out, err;
    int code = cli::run({"normalize", "--ring", "z", "--gens", "1", "--trunc", "8", "g2(x1)*g3(x1)"}, out, err);
    o.require(code == 0 && out.str() == "10*g5(x1)\n", "normalize printed '" + out.str() + "'");
    std::ostringstream jout, jerr;
    code = cli::run({"oracle-omega", "--ring", "zmod=6", "--gens", "1", "--trunc", "4", "--json"}, jout, jerr);
    o.require(code == 0, "oracle-omega exit code " + std::to_string(code));
    const auto j = nlohmann::json::parse(jout.str());
    for (const char* part : {"main_theorem", "indecomposables"})
      for (const auto& sl : j.at(part).at("slices")) o.require(sl.at("equal").get<bool>(), std::string(part) + " slice differs");
    return o;
  });

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
