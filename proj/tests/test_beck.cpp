#include <gtest/gtest.h>

#include <random>

#include "dpalg/beck.hpp"
#include "dpalg/kahler.hpp"

using namespace dpalg;
using beck::UModule;
using oracle::IntegerMatrix;

namespace {

// Z + Z/2 + Z/3 with A acting by zero, phi_2 e0 = e1, phi_3 e0 = e2.
UModule torsion_mix(const AlgebraSpec& spec) {
  UModule m(spec, {0, 2, 3});
  IntegerMatrix p2(3, 3), p3(3, 3);
  p2(1, 0) = 1;
  p3(2, 0) = 1;
  m.set_phi_action(2, p2);
  m.set_phi_action(3, p3);
  return m;
}

// A_+ acting on itself by multiplication, phi = 0.
UModule regular_module(const AlgebraSpec& spec) {
  const auto basis = full_basis(spec);
  UModule m(spec, std::vector<Integer>(basis.size(), 0));
  for (const auto& mu : basis) {
    IntegerMatrix t(basis.size(), basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const DPElement prod = DPElement::monomial(spec, mu) * DPElement::monomial(spec, basis[j]);
      for (const auto& [nu, c] : prod.terms()) {
        for (std::size_t i = 0; i < basis.size(); ++i)
          if (basis[i] == nu) t(i, j) = c;
      }
    }
    m.set_a_action(mu, std::move(t));
  }
  return m;
}

void expect_ok(const Report& r) {
  EXPECT_TRUE(r.ok()) << [&] {
    std::string s;
    for (const auto& c : r.checks())
      if (!c.passed) s += c.law + ": " + c.counterexample.value_or("") + "\n";
    return s;
  }();
}

}  // namespace

TEST(Beck, ZeroModule) { expect_ok(beck::verify_beck_axioms(beck::zero_module(AlgebraSpec(RingSpec::integers(), 1, 6)), 200, 1)); }

TEST(Beck, U0TensorFreeRank1) {
  const AlgebraSpec s(RingSpec::integers(), 1, 8);
  expect_ok(beck::verify_beck_axioms(beck::u0_tensor_module(s, 1, 8), 200, 2));
}

TEST(Beck, U0TensorRank2OverZ6) {
  const AlgebraSpec s(RingSpec::integers_mod(6), 2, 6);
  expect_ok(beck::verify_beck_axioms(beck::u0_tensor_module(s, 2, 6), 200, 3));
}

TEST(Beck, TorsionMixture) {
  for (auto ring : {RingSpec::integers(), RingSpec::integers_mod(6)}) {
    expect_ok(beck::verify_beck_axioms(torsion_mix(AlgebraSpec(ring, 1, 6)), 200, 4));
  }
}

TEST(Beck, RegularModule) {
  expect_ok(beck::verify_beck_axioms(regular_module(AlgebraSpec(RingSpec::integers(), 2, 5)), 200, 5));
}

TEST(Beck, OmegaTables) {
  expect_ok(beck::verify_beck_axioms(kahler::omega_as_umodule(AlgebraSpec(RingSpec::integers(), 1, 6)), 200, 6));
  expect_ok(beck::verify_beck_axioms(kahler::omega_as_umodule(AlgebraSpec(RingSpec::integers_mod(4), 1, 5)), 200, 7));
}

TEST(Beck, SemidirectProductRule) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  beck::SemidirectAlgebra<UModule> alg(torsion_mix(s));
  const beck::SemidirectElement<beck::ModuleVector> e{DPElement::zero(s), {1, 0, 0}};
  // (0, x)^2 = 0, gamma_2(0, x) = (0, phi_2 x), gamma_6(0, x) = 0
  EXPECT_TRUE(alg.equal(alg.mul(e, e), {DPElement::zero(s), {0, 0, 0}}));
  EXPECT_TRUE(alg.equal(alg.gamma(2, e), {DPElement::zero(s), {0, 1, 0}}));
  EXPECT_TRUE(alg.equal(alg.gamma(3, e), {DPElement::zero(s), {0, 0, 1}}));
  EXPECT_TRUE(alg.equal(alg.gamma(6, e), {DPElement::zero(s), {0, 0, 0}}));
}

TEST(BeckNegative, PhiIntoWrongTorsion) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  UModule m = torsion_mix(s);
  IntegerMatrix p2(3, 3);
  p2(2, 0) = 1;  // lands in Z/3: 2 phi_2 != 0
  m.set_phi_action(2, p2);
  const Report r = beck::verify_beck_axioms(m, 200, 8);
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.passed(std::string("module: ") + beck::law::kPTorsion));
}

TEST(BeckNegative, CorruptedOmegaPhiTable) {
  const AlgebraSpec s(RingSpec::integers(), 1, 6);
  UModule m = kahler::omega_as_umodule(s);
  IntegerMatrix p2 = m.phi_action().at(2);
  // send dx to phi3 dx instead of phi2 dx
  const kahler::OmegaBasis b(s);
  const std::size_t dx = *b.index_of(0, PhiMonomial::unit(), std::nullopt);
  const std::size_t phi2 = *b.index_of(0, PhiMonomial::phi(2, 1), std::nullopt);
  const std::size_t phi3 = *b.index_of(0, PhiMonomial::phi(3, 1), std::nullopt);
  p2(phi2, dx) = 0;
  p2(phi3, dx) = 1;
  m.set_phi_action(2, p2);
  EXPECT_FALSE(beck::verify_beck_axioms(m, 200, 9).ok());
}

TEST(BeckNegative, ScalarPhiOnZ6) {
  const AlgebraSpec s(RingSpec::integers_mod(6), 1, 6);
  UModule m(s, {6});
  IntegerMatrix p2(1, 1), p3(1, 1);
  p2(0, 0) = 3;
  p3(0, 0) = 2;
  m.set_phi_action(2, p2);
  m.set_phi_action(3, p3);
  // phi_2 = 3 Frob, phi_3 = 2 Frob on Z/6 is legal
  EXPECT_TRUE(beck::verify_beck_axioms(m, 200, 10).ok());
  UModule bad(s, {6});
  IntegerMatrix q2(1, 1);
  q2(0, 0) = 1;  // 2 phi_2 != 0
  bad.set_phi_action(2, q2);
  EXPECT_FALSE(beck::verify_beck_axioms(bad, 200, 10).ok());
}

TEST(Abelian, StructureOfTorsionMix) {
  const AlgebraSpec s(RingSpec::integers(), 1, 12);
  beck::AbelianDPAlgebra alg(torsion_mix(s));
  expect_ok(beck::verify_abelian_structure(alg, 200, 11));
  expect_ok(check_dp_axioms(alg, 200, 11, 12));
}

TEST(AbelianNegative, Gamma6Override) {
  const AlgebraSpec s(RingSpec::integers(), 1, 12);
  beck::AbelianDPAlgebra alg(torsion_mix(s));
  IntegerMatrix g6(3, 3);
  g6(1, 0) = 1;
  alg.override_gamma(6, g6);
  const Report r = beck::verify_abelian_structure(alg, 200, 12);
  EXPECT_FALSE(r.passed(beck::law::kPrimePowerSupport));
}
