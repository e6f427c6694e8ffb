#include <gtest/gtest.h>

#include <gmpxx.h>

#include <map>
#include <random>

#include "dpalg/beck.hpp"
#include "dpalg/kahler.hpp"

using namespace dpalg;
using namespace dpalg::kahler;

namespace {

using QPoly = std::map<std::vector<unsigned>, mpq_class>;

mpz_class fact(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// gamma_e(x) -> x^e / e!
QPoly rational_image(const DPElement& a) {
  QPoly out;
  for (const auto& [m, c] : a.terms()) {
    mpz_class den = 1;
    for (unsigned e : m.exponents()) den *= fact(e);
    out[m.exponents()] += mpq_class(c, den);
  }
  return out;
}

QPoly partial(const QPoly& p, unsigned i) {
  QPoly out;
  for (const auto& [e, c] : p) {
    if (e[i] == 0) continue;
    auto f = e;
    --f[i];
    out[f] += c * e[i];
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

// unit-phi part of the dx_i coefficient, constants keyed by the zero exponent
QPoly unit_phi_part(const OmegaElement& w, unsigned i, unsigned k) {
  QPoly out;
  auto it = w.terms().find(i);
  if (it == w.terms().end()) return out;
  for (const auto& [phi, c] : it->second.terms()) {
    if (!phi.is_unit()) continue;
    if (c.scalar_part() != 0) out[std::vector<unsigned>(k, 0)] += mpq_class(c.scalar_part());
    for (const auto& [e, q] : rational_image(c.algebra_part())) out[e] += q;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

void expect_ok(const Report& r) {
  EXPECT_TRUE(r.ok()) << [&] {
    std::string s;
    for (const auto& c : r.checks())
      if (!c.passed) s += c.law + ": " + c.counterexample.value_or("") + "\n";
    return s;
  }();
}

// orders of the cyclic summands gamma_{w-n}(x) phi_n dx in weight w, rank 1
oracle::InvariantFactors expected_rank1_slice(const RingSpec& ring, unsigned w) {
  std::vector<Integer> orders;
  for (unsigned n = 1; n <= w; ++n) {
    Integer ord;
    if (n == 1) {
      ord = ring.is_integers() ? Integer(0) : ring.modulus();
    } else {
      auto pe = prime_power(n);
      if (!pe) continue;
      const Integer p = pe->first;
      if (ring.is_integers()) {
        ord = p;
      } else {
        mpz_gcd(ord.get_mpz_t(), p.get_mpz_t(), ring.modulus().get_mpz_t());
        if (ord == 1) continue;
      }
    }
    orders.push_back(ord);
  }
  return oracle::InvariantFactors::from_cyclic_orders(orders);
}

}  // namespace

TEST(UniversalDerivation, Generators) {
  const AlgebraSpec s(RingSpec::integers(), 2, 6);
  for (unsigned i = 0; i < 2; ++i) {
    EXPECT_EQ(universal_derivation(DPElement::gamma_gen(s, i, 1)), OmegaElement::generator(s, i));
  }
}

TEST(UniversalDerivation, GammaOfGenerator) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  const OmegaElement dx = OmegaElement::generator(s, 0);
  const OmegaElement expected = dx.acted(DPElement::gamma_gen(s, 0, 2)) +
                                dx.phi(2).acted(DPElement::gamma_gen(s, 0, 1)) + dx.phi(3);
  EXPECT_EQ(universal_derivation(DPElement::gamma_gen(s, 0, 3)), expected);
  EXPECT_EQ(to_string(universal_derivation(DPElement::gamma_gen(s, 0, 2))), "x1*dx1 + phi2*dx1");
}

TEST(UniversalDerivation, RationalShadowIsPartialDerivative) {
  const AlgebraSpec s(RingSpec::integers(), 2, 8);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    const DPElement a = random_element(s, rng, 4);
    const OmegaElement da = universal_derivation(a);
    const QPoly qa = rational_image(a);
    for (unsigned i = 0; i < 2; ++i) EXPECT_EQ(unit_phi_part(da, i, 2), partial(qa, i)) << to_string(a);
  }
}

TEST(UniversalDerivation, IsDPDerivation) {
  for (auto ring : {RingSpec::integers(), RingSpec::integers_mod(6), RingSpec::integers_mod(4)}) {
    const AlgebraSpec s(ring, 2, 6);
    const OmegaModule mod(s);
    expect_ok(is_dp_derivation(universal_derivation_table(s), mod, 200, 22));
  }
}

TEST(UniversalDerivation, ExtendDerivationRecoversD) {
  const AlgebraSpec s(RingSpec::integers(), 2, 6);
  const OmegaModule mod(s);
  const auto table = extend_derivation(mod, {OmegaElement::generator(s, 0), OmegaElement::generator(s, 1)});
  EXPECT_EQ(table, universal_derivation_table(s));
}

TEST(Universality, FactorsThroughOmega) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  std::vector<beck::UModule> modules{beck::u0_tensor_module(s, 2, 6), omega_as_umodule(s)};
  std::mt19937_64 rng(23);
  for (const auto& m : modules) {
    for (int t = 0; t < 5; ++t) {
      const auto table = extend_derivation(m, {m.random_vector(rng)});
      expect_ok(is_dp_derivation(table, m, 100, 24));
      const Factorization f = factor_through_omega(m, table);
      EXPECT_TRUE(f.exists);
      EXPECT_TRUE(f.unique);
    }
  }
}

TEST(Universality, NonDerivationDoesNotFactor) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  const beck::UModule m = beck::u0_tensor_module(s, 1, 6);
  auto table = extend_derivation(m, {m.basis_vector(0)});
  // s(gamma_2 x) should be phi_2 s(x); send it to 0 instead
  table[DPMonomial::single(1, 0, 2)] = m.zero();
  EXPECT_FALSE(is_dp_derivation(table, m, 100, 25).ok());
  EXPECT_FALSE(factor_through_omega(m, table).exists);
}

TEST(Inversion, PhiOfDxAtN12) {
  const AlgebraSpec s(RingSpec::integers(), 1, 12);
  const DPElement x = DPElement::gamma_gen(s, 0, 1);
  const OmegaElement dx = OmegaElement::generator(s, 0);
  for (unsigned n = 1; n <= 12; ++n) {
    const OmegaElement got = phi_inversion(n, x);
    if (n == 1 || prime_power(n)) {
      EXPECT_EQ(got, n == 1 ? dx : dx.phi(n)) << n;
      EXPECT_FALSE(got.is_zero());
    } else {
      EXPECT_TRUE(got.is_zero()) << n << ": " << to_string(got);
    }
  }
}

TEST(Inversion, GeneralElement) {
  // for a = x1 + x2 and prime n, the formula still gives phi_n(da)
  const AlgebraSpec s(RingSpec::integers(), 2, 8);
  const DPElement a = DPElement::gamma_gen(s, 0, 1) + DPElement::gamma_gen(s, 1, 1);
  const OmegaElement da = universal_derivation(a);
  for (unsigned p : {2u, 3u, 5u, 7u}) EXPECT_EQ(phi_inversion(p, a), da.phi(p)) << p;
}

TEST(PhiIdentities, Rank2N8) { expect_ok(phi_derivation_identities(AlgebraSpec(RingSpec::integers(), 2, 8))); }

TEST(OmegaBasisTest, Rank1Slices) {
  for (auto ring : {RingSpec::integers(), RingSpec::integers_mod(4), RingSpec::integers_mod(6)}) {
    const AlgebraSpec s(ring, 1, 10);
    const OmegaBasis b(s);
    for (unsigned w = 1; w <= 10; ++w) EXPECT_EQ(b.slice_invariants(w), expected_rank1_slice(ring, w)) << w;
  }
  EXPECT_EQ(oracle::to_string(OmegaBasis(AlgebraSpec(RingSpec::integers(), 1, 6)).slice_invariants(6)), "[2, 30, 0]");
}

TEST(OmegaBasisTest, CoordinatesRoundTrip) {
  const AlgebraSpec s(RingSpec::integers_mod(6), 2, 5);
  const OmegaBasis b(s);
  std::mt19937_64 rng(26);
  const OmegaModule mod(s);
  for (int t = 0; t < 50; ++t) {
    const OmegaElement w = mod.random_vector(rng);
    EXPECT_EQ(b.element(b.coordinates(w)), w);
  }
}

TEST(AbelianOrder, Rings) {
  EXPECT_EQ(abelian_order(RingSpec::integers(), 0), 0);
  EXPECT_EQ(abelian_order(RingSpec::integers(), 3), 3);
  EXPECT_EQ(abelian_order(RingSpec::integers_mod(6), 0), 6);
  EXPECT_EQ(abelian_order(RingSpec::integers_mod(6), 2), 2);
}

TEST(Presentation, DefaultSignMatchesBasis) {
  for (unsigned N = 1; N <= 6; ++N) {
    const AlgebraSpec s(RingSpec::integers(), 1, N);
    const OmegaPresentation p = presentation_of_omega(s, RelationSign::kDerivationLaw);
    const OmegaBasis b(s);
    for (unsigned w = 1; w <= N; ++w) EXPECT_EQ(p.slices[w - 1].quotient_invariants(), b.slice_invariants(w)) << N << " " << w;
  }
  const AlgebraSpec s(RingSpec::integers(), 2, 4);
  const OmegaPresentation p = presentation_of_omega(s);
  const OmegaBasis b(s);
  for (unsigned w = 1; w <= 4; ++w) EXPECT_EQ(p.slices[w - 1].quotient_invariants(), b.slice_invariants(w)) << w;
}

TEST(Presentation, PrintedSignDiffers) {
  const AlgebraSpec s(RingSpec::integers(), 1, 3);
  const OmegaPresentation p = presentation_of_omega(s, RelationSign::kFlippedSum);
  EXPECT_EQ(oracle::to_string(p.slices[0].quotient_invariants()), "[0]");
  EXPECT_EQ(oracle::to_string(p.slices[1].quotient_invariants()), "[2, 4]");
  EXPECT_EQ(oracle::to_string(p.slices[2].quotient_invariants()), "[2, 6]");
}
