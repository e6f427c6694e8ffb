#include <gtest/gtest.h>

#include <random>

#include "dpalg/envelope.hpp"

using namespace dpalg;

namespace {

const AlgebraSpec kZ(RingSpec::integers(), 1, 6);

EnvelopeElement random_envelope(const AlgebraSpec& s, std::mt19937_64& rng) {
  EnvelopeElement u(s);
  std::uniform_int_distribution<int> c(-3, 3);
  for (const auto& [mu, ann] : u0_basis_up_to(s.truncation(), s.ring())) {
    if (c(rng) > 0) u.add_term(mu, AugmentedElement(random_element(s, rng, 2, 3), c(rng)));
  }
  return u;
}

}  // namespace

TEST(U0, Basis) {
  const auto b = u0_basis_up_to(9, RingSpec::integers());
  std::vector<std::string> names;
  for (const auto& [mu, ann] : b) names.push_back(to_string(mu));
  EXPECT_EQ(names, (std::vector<std::string>{"1", "phi2", "phi3", "phi4", "phi5", "phi7", "phi8", "phi9"}));
  // over Z/6, phi5 and phi7 die
  EXPECT_EQ(u0_basis_up_to(9, RingSpec::integers_mod(6)).size(), 6u);
  EXPECT_EQ(u0_basis_up_to(9, RingSpec::integers_mod(2)).size(), 4u);
}

TEST(U0, PhiProducts) {
  EXPECT_EQ(multiply_phi(PhiMonomial::phi(2, 1), PhiMonomial::phi(2, 2)), PhiMonomial::phi(2, 3));
  EXPECT_FALSE(multiply_phi(PhiMonomial::phi(2, 1), PhiMonomial::phi(3, 1)));
  EXPECT_FALSE(phi_of(6));
  EXPECT_EQ(phi_of(1), PhiMonomial::unit());
  EXPECT_THROW(PhiMonomial::phi(4, 1), Error);
}

TEST(Envelope, TwistedCommutation) {
  // phi_2 * 3 = 9 phi_2 = phi_2 (mod 2); phi_3 * 2 = 8 phi_3 = 2 phi_3 (mod 3)
  const EnvelopeElement phi2 = EnvelopeElement::phi(kZ, 2), phi3 = EnvelopeElement::phi(kZ, 3);
  EXPECT_EQ(phi2 * EnvelopeElement::scalar(kZ, 3), phi2);
  EXPECT_EQ(phi3 * EnvelopeElement::scalar(kZ, 2), phi3.scaled(2));
  EXPECT_TRUE((phi2 * EnvelopeElement::scalar(kZ, 2)).is_zero());
  // phi kills A
  const EnvelopeElement x = EnvelopeElement::from_algebra(DPElement::gamma_gen(kZ, 0, 1));
  EXPECT_TRUE((phi2 * x).is_zero());
  EXPECT_FALSE((x * phi2).is_zero());
  EXPECT_TRUE((phi2 * phi3).is_zero());
  EXPECT_EQ(phi2 * phi2, EnvelopeElement::phi(kZ, 4));
  EXPECT_EQ(to_string(x * phi2), "x1*phi2");
}

TEST(Envelope, ReductionOverModulus) {
  const AlgebraSpec s(RingSpec::integers_mod(6), 1, 6);
  EXPECT_TRUE(EnvelopeElement::phi(s, 5).is_zero());
  EXPECT_EQ(EnvelopeElement::phi(s, 3).scaled(4), EnvelopeElement::phi(s, 3));
}

TEST(Envelope, Associative) {
  for (const RingSpec& r : {RingSpec::integers(), RingSpec::integers_mod(6)}) {
    const AlgebraSpec s(r, 2, 6);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
      const auto a = random_envelope(s, rng), b = random_envelope(s, rng), c = random_envelope(s, rng);
      EXPECT_EQ((a * b) * c, a * (b * c));
      EXPECT_EQ(a * (b + c), a * b + a * c);
    }
  }
}
