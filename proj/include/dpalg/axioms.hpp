/// @file axioms.hpp
/// @brief Randomized checker for the divided power axioms, generic over any
///        algebra model (free truncated algebras, semidirect products A + M,
///        trivial-product algebras, direct products).
#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <string>

#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"
#include "dpalg/report.hpp"

namespace dpalg {

template <class A>
concept DPAlgebraModel = requires(const A& alg, const typename A::Element& x, std::mt19937_64& rng,
                                  const Integer& r, unsigned n) {
  { alg.ring() } -> std::convertible_to<RingSpec>;
  { alg.random_element(rng) } -> std::same_as<typename A::Element>;
  { alg.add(x, x) } -> std::same_as<typename A::Element>;
  { alg.mul(x, x) } -> std::same_as<typename A::Element>;
  { alg.scale(r, x) } -> std::same_as<typename A::Element>;
  { alg.gamma(n, x) } -> std::same_as<typename A::Element>;
  { alg.equal(x, x) } -> std::convertible_to<bool>;
  { alg.describe(x) } -> std::convertible_to<std::string>;
};

namespace axiom {
inline constexpr const char* kIdentity = "gamma_1 = id";
inline constexpr const char* kAddition = "gamma_n(a+b) = sum gamma_i(a) gamma_j(b)";
inline constexpr const char* kProductPower = "gamma_n(ab) = a^n gamma_n(b)";
inline constexpr const char* kScalar = "gamma_n(rb) = r^n gamma_n(b)";
inline constexpr const char* kProductRule = "gamma_m gamma_n = C(m+n,m) gamma_{m+n}";
inline constexpr const char* kComposition = "gamma_m gamma_n = (mn)!/(m!(n!)^m) gamma_{mn}";
}  // namespace axiom

/// The free truncated DP algebra as an axiom-checker model.
struct FreeAlgebraModel {
  using Element = DPElement;

  AlgebraSpec spec;
  unsigned max_terms = 3;

  const RingSpec& ring() const { return spec.ring(); }
  Element random_element(std::mt19937_64& rng) const { return dpalg::random_element(spec, rng, max_terms); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element scale(const Integer& r, const Element& a) const { return a.scaled(r); }
  Element gamma(unsigned n, const Element& a) const { return divided_power(n, a); }
  bool equal(const Element& a, const Element& b) const { return a == b; }
  std::string describe(const Element& a) const { return to_string(a); }
};

template <DPAlgebraModel Alg>
typename Alg::Element model_power(const Alg& alg, const typename Alg::Element& a, unsigned n) {
  auto out = a;
  for (unsigned i = 1; i < n; ++i) out = alg.mul(out, a);
  return out;
}

/// Checks every divided power axiom on `samples` random instances with
/// exponents drawn from 1..max_exponent.
template <DPAlgebraModel Alg>
Report check_dp_axioms(const Alg& alg, std::size_t samples, std::uint64_t seed, unsigned max_exponent) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> ndist(1, max_exponent);
  std::uniform_int_distribution<int> rdist(-6, 6);
  Report report;
  for (const char* law : {axiom::kIdentity, axiom::kAddition, axiom::kProductPower, axiom::kScalar,
                          axiom::kProductRule, axiom::kComposition}) {
    report.entry(law);
  }

  for (std::size_t s = 0; s < samples; ++s) {
    const auto a = alg.random_element(rng);
    const auto b = alg.random_element(rng);
    const unsigned n = ndist(rng);
    const unsigned m = ndist(rng);
    const Integer r = rdist(rng);

    report.record(axiom::kIdentity, alg.equal(alg.gamma(1, a), a), [&] { return "a = " + alg.describe(a); });

    {
      auto lhs = alg.gamma(n, alg.add(a, b));
      auto rhs = alg.add(alg.gamma(n, a), alg.gamma(n, b));
      for (unsigned i = 1; i < n; ++i) rhs = alg.add(rhs, alg.mul(alg.gamma(i, a), alg.gamma(n - i, b)));
      report.record(axiom::kAddition, alg.equal(lhs, rhs), [&] {
        return "n = " + std::to_string(n) + ", a = " + alg.describe(a) + ", b = " + alg.describe(b);
      });
    }
    {
      auto lhs = alg.gamma(n, alg.mul(a, b));
      auto rhs = alg.mul(model_power(alg, a, n), alg.gamma(n, b));
      report.record(axiom::kProductPower, alg.equal(lhs, rhs), [&] {
        return "n = " + std::to_string(n) + ", a = " + alg.describe(a) + ", b = " + alg.describe(b);
      });
    }
    {
      const Scalar rs(r, alg.ring());
      auto lhs = alg.gamma(n, alg.scale(rs.value(), b));
      auto rhs = alg.scale(scalar_pow(rs, n).value(), alg.gamma(n, b));
      report.record(axiom::kScalar, alg.equal(lhs, rhs), [&] {
        return "n = " + std::to_string(n) + ", r = " + r.get_str() + ", b = " + alg.describe(b);
      });
    }
    {
      auto lhs = alg.mul(alg.gamma(m, a), alg.gamma(n, a));
      auto rhs = alg.scale(gamma_product_coeff(m, n), alg.gamma(m + n, a));
      report.record(axiom::kProductRule, alg.equal(lhs, rhs), [&] {
        return "m = " + std::to_string(m) + ", n = " + std::to_string(n) + ", a = " + alg.describe(a);
      });
    }
    {
      auto lhs = alg.gamma(m, alg.gamma(n, a));
      auto rhs = alg.scale(gamma_compose_coeff(m, n), alg.gamma(m * n, a));
      report.record(axiom::kComposition, alg.equal(lhs, rhs), [&] {
        return "m = " + std::to_string(m) + ", n = " + std::to_string(n) + ", a = " + alg.describe(a);
      });
    }
  }
  return report;
}

}  // namespace dpalg
