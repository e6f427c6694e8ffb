/// @file beck.hpp
/// @brief DP A-modules (Beck modules) as explicit action tables, the
///        semidirect product A + M, and abelian DP algebras.
#pragma once

#include <concepts>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dpalg/axioms.hpp"
#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"
#include "dpalg/envelope.hpp"
#include "dpalg/linalg.hpp"
#include "dpalg/report.hpp"

namespace dpalg::beck {

using oracle::IntegerMatrix;
using ModuleVector = std::vector<Integer>;

/// What the generic derivation and semidirect machinery needs from a module:
/// abelian group operations, the A-action and the operators phi_n.
template <class M>
concept BeckModuleModel = requires(const M& mod, const typename M::Vector& v, const DPElement& a,
                                   const Integer& r, unsigned n, std::mt19937_64& rng) {
  { mod.algebra() } -> std::convertible_to<AlgebraSpec>;
  { mod.zero() } -> std::same_as<typename M::Vector>;
  { mod.add(v, v) } -> std::same_as<typename M::Vector>;
  { mod.scale(r, v) } -> std::same_as<typename M::Vector>;
  { mod.act(a, v) } -> std::same_as<typename M::Vector>;
  { mod.phi(n, v) } -> std::same_as<typename M::Vector>;
  { mod.equal(v, v) } -> std::convertible_to<bool>;
  { mod.describe(v) } -> std::convertible_to<std::string>;
  { mod.random_vector(rng) } -> std::same_as<typename M::Vector>;
};

/// A finitely generated module: basis e_0..e_{k-1} with annihilators
/// (0 = free summand), matrices for the action of basis monomials of A and
/// for phi_p. Matrices act on column vectors; phi_p is applied
/// semilinearly, to the p-th powers of the coordinates.
class UModule {
 public:
  using Vector = ModuleVector;

  UModule() = default;
  UModule(AlgebraSpec spec, std::vector<Integer> annihilators)
      : spec_(std::move(spec)), annihilators_(std::move(annihilators)) {
    const RingSpec& ring = spec_.ring();
    for (const auto& d : annihilators_) {
      if (d < 0) throw Error("annihilators must be non-negative");
      if (!ring.is_integers() && d != 0 && !mpz_divisible_p(ring.modulus().get_mpz_t(), d.get_mpz_t())) {
        throw Error("annihilator " + d.get_str() + " does not divide the modulus " + ring.modulus().get_str());
      }
    }
  }

  const AlgebraSpec& algebra() const { return spec_; }
  std::size_t basis_count() const { return annihilators_.size(); }
  const std::vector<Integer>& annihilators() const { return annihilators_; }
  const std::map<DPMonomial, IntegerMatrix>& a_action() const { return a_action_; }
  const std::map<unsigned, IntegerMatrix>& phi_action() const { return phi_action_; }

  void set_a_action(const DPMonomial& mu, IntegerMatrix m) {
    check_square(m);
    a_action_[mu] = std::move(m);
  }
  void set_phi_action(unsigned p, IntegerMatrix m) {
    if (!is_prime(p)) throw Error("phi_action keys must be prime");
    check_square(m);
    phi_action_[p] = std::move(m);
  }

  /// Effective modulus of coordinate i (0 = none).
  Integer coordinate_modulus(std::size_t i) const {
    const Integer& d = annihilators_[i];
    if (spec_.ring().is_integers()) return d;
    return d == 0 ? spec_.ring().modulus() : d;
  }

  Vector reduce(Vector v) const {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Integer q = coordinate_modulus(i);
      if (q != 0) mpz_fdiv_r(v[i].get_mpz_t(), v[i].get_mpz_t(), q.get_mpz_t());
    }
    return v;
  }

  Vector zero() const { return Vector(basis_count(), 0); }
  Vector basis_vector(std::size_t i) const {
    Vector v = zero();
    v.at(i) = 1;
    return v;
  }

  Vector add(const Vector& x, const Vector& y) const {
    Vector out(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += y[i];
    return reduce(std::move(out));
  }
  Vector sub(const Vector& x, const Vector& y) const { return add(x, scale(-1, y)); }
  Vector scale(const Integer& r, const Vector& x) const {
    Vector out(x);
    for (auto& c : out) c *= r;
    return reduce(std::move(out));
  }
  bool equal(const Vector& x, const Vector& y) const { return reduce(x) == reduce(y); }
  bool is_zero(const Vector& x) const { return equal(x, zero()); }

  Vector apply(const IntegerMatrix& m, const Vector& x) const {
    Vector out = zero();
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0 && m(i, j) != 0) out[i] += m(i, j) * x[j];
    return reduce(std::move(out));
  }

  /// a . x for a in A.
  Vector act(const DPElement& a, const Vector& x) const {
    if (!(a.spec() == spec_)) throw Error("module and algebra element disagree on the algebra");
    Vector out = zero();
    for (const auto& [mu, c] : a.terms()) {
      auto it = a_action_.find(mu);
      if (it == a_action_.end()) continue;
      out = add(out, scale(c, apply(it->second, x)));
    }
    return out;
  }

  /// phi_p(x) = P_p (x_1^p, ..., x_k^p).
  Vector phi_prime(unsigned p, const Vector& x) const {
    auto it = phi_action_.find(p);
    if (it == phi_action_.end()) return zero();
    Vector powered(x);
    for (auto& c : powered) c = int_pow(c, p);
    return apply(it->second, powered);
  }

  /// phi_n: identity for n = 1, phi_p^e for n = p^e, zero otherwise.
  Vector phi(unsigned n, const Vector& x) const {
    if (n == 1) return reduce(x);
    auto pe = prime_power(n);
    if (!pe) return zero();
    Vector out = reduce(x);
    for (unsigned i = 0; i < pe->second; ++i) out = phi_prime(pe->first, out);
    return out;
  }

  /// u . x for u in U(A): (c (x) phi_mu) x = c . phi_mu(x).
  Vector act_envelope(const EnvelopeElement& u, const Vector& x) const {
    Vector out = zero();
    for (const auto& [mu, c] : u.terms()) {
      Vector y = mu.is_unit() ? reduce(x) : phi(static_cast<unsigned>(mu.degree()), x);
      out = add(out, add(act(c.algebra_part(), y), scale(c.scalar_part(), y)));
    }
    return out;
  }

  Vector random_vector(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> dist(-6, 6);
    Vector v = zero();
    for (auto& c : v) c = dist(rng);
    return reduce(std::move(v));
  }

  std::string describe(const Vector& x) const {
    std::string out = "(";
    for (std::size_t i = 0; i < x.size(); ++i) out += (i ? ", " : "") + x[i].get_str();
    return out + ")";
  }

  /// Checks the structural invariants of a U(A)-module presentation.
  Report validate() const;

 private:
  void check_square(const IntegerMatrix& m) const {
    if (m.row_count() != basis_count() || m.col_count() != basis_count()) {
      throw Error("action matrix must be " + std::to_string(basis_count()) + "x" + std::to_string(basis_count()));
    }
  }

  AlgebraSpec spec_;
  std::vector<Integer> annihilators_;
  std::map<DPMonomial, IntegerMatrix> a_action_;
  std::map<unsigned, IntegerMatrix> phi_action_;
};

namespace law {
inline constexpr const char* kWellDefined = "actions respect annihilators";
inline constexpr const char* kPTorsion = "p phi_p = 0";
inline constexpr const char* kPhiKillsA = "phi_p(a y) = 0";
inline constexpr const char* kMultiplicative = "a_action(mu) a_action(nu) = a_action(mu nu)";
inline constexpr const char* kDistinctPrimes = "phi_p phi_q = 0 for p != q";
inline constexpr const char* kPrimePowerIterate = "gamma_{p^e}(0, x) = gamma_p^e(0, x)";
}  // namespace law

inline Report UModule::validate() const {
  Report report;
  for (const char* l : {law::kWellDefined, law::kPTorsion, law::kPhiKillsA, law::kMultiplicative,
                        law::kDistinctPrimes}) {
    report.entry(l);
  }
  const std::size_t k = basis_count();
  for (std::size_t i = 0; i < k; ++i) {
    const Integer d = coordinate_modulus(i);
    if (d == 0) continue;
    Vector tor = zero();
    tor[i] = d;
    for (const auto& [mu, m] : a_action_) {
      Vector img = zero();
      for (std::size_t r = 0; r < k; ++r) img[r] = m(r, i) * d;
      report.record(law::kWellDefined, is_zero(img), [&] { return "a_action(" + monomial_to_string(mu) + ") on e" + std::to_string(i); });
    }
    for (const auto& [p, m] : phi_action_) {
      Vector img = zero();
      for (std::size_t r = 0; r < k; ++r) img[r] = m(r, i) * d;
      report.record(law::kWellDefined, is_zero(img), [&] { return "phi_" + std::to_string(p) + " on e" + std::to_string(i); });
    }
  }
  for (const auto& [p, m] : phi_action_) {
    for (std::size_t i = 0; i < k; ++i) {
      const Vector y = phi_prime(p, basis_vector(i));
      report.record(law::kPTorsion, is_zero(scale(p, y)), [&] {
        return "p = " + std::to_string(p) + ", phi_p(e" + std::to_string(i) + ") = " + describe(y);
      });
      for (const auto& [q, mq] : phi_action_) {
        if (q == p) continue;
        report.record(law::kDistinctPrimes, is_zero(phi_prime(q, y)), [&] {
          return "phi_" + std::to_string(q) + " phi_" + std::to_string(p) + " e" + std::to_string(i);
        });
      }
      for (const auto& [mu, am] : a_action_) {
        const Vector ay = apply(am, basis_vector(i));
        report.record(law::kPhiKillsA, is_zero(phi_prime(p, ay)), [&] {
          return "phi_" + std::to_string(p) + "(" + monomial_to_string(mu) + " e" + std::to_string(i) + ")";
        });
      }
    }
  }
  const auto basis = full_basis(spec_);
  for (const auto& mu : basis) {
    for (const auto& nu : basis) {
      const DPElement prod = DPElement::monomial(spec_, mu) * DPElement::monomial(spec_, nu);
      for (std::size_t i = 0; i < k; ++i) {
        const Vector lhs = act(DPElement::monomial(spec_, mu), act(DPElement::monomial(spec_, nu), basis_vector(i)));
        const Vector rhs = act(prod, basis_vector(i));
        report.record(law::kMultiplicative, equal(lhs, rhs), [&] {
          return monomial_to_string(mu) + " * " + monomial_to_string(nu) + " on e" + std::to_string(i);
        });
      }
    }
  }
  return report;
}

/// The zero module over A.
inline UModule zero_module(const AlgebraSpec& spec) { return UModule(spec, {}); }

/// U(0) (x) V with V free of rank `rank`, phi-degrees capped at `cap`;
/// A acts through the augmentation, i.e. by zero. Basis order: for each
/// generator of V, the U(0) basis in degree order.
inline UModule u0_tensor_module(const AlgebraSpec& spec, unsigned rank, unsigned cap) {
  const auto u0 = u0_basis_up_to(cap, spec.ring());
  std::vector<Integer> ann;
  for (unsigned v = 0; v < rank; ++v)
    for (const auto& [mu, d] : u0) ann.push_back(d);
  UModule m(spec, ann);
  const std::size_t k = ann.size();
  for (unsigned p : primes_up_to(cap)) {
    if (spec.ring().torsion_modulus(p) == 1) continue;
    IntegerMatrix pm(k, k);
    for (unsigned v = 0; v < rank; ++v) {
      for (std::size_t j = 0; j < u0.size(); ++j) {
        auto prod = multiply_phi(PhiMonomial::phi(p, 1), u0[j].first);
        if (!prod || prod->degree() > cap) continue;
        for (std::size_t i = 0; i < u0.size(); ++i) {
          if (u0[i].first == *prod) pm(v * u0.size() + i, v * u0.size() + j) = 1;
        }
      }
    }
    m.set_phi_action(p, std::move(pm));
  }
  return m;
}

template <class V>
struct SemidirectElement {
  DPElement a;
  V x;
};

/// A + M with (a, x)(b, y) = (ab, ay + bx) and
/// gamma_n(a, x) = (gamma_n a, phi_n x + sum_{i+j=n} gamma_i(a) phi_j(x)).
template <BeckModuleModel Module>
class SemidirectAlgebra {
 public:
  using Vector = typename Module::Vector;
  using Element = SemidirectElement<Vector>;

  explicit SemidirectAlgebra(Module m, unsigned max_terms = 3) : module_(std::move(m)), max_terms_(max_terms) {}

  const Module& module() const { return module_; }
  const RingSpec& ring() const { return spec().ring(); }
  const AlgebraSpec& spec() const { return module_.algebra(); }

  Element add(const Element& u, const Element& v) const { return {u.a + v.a, module_.add(u.x, v.x)}; }
  Element scale(const Integer& r, const Element& u) const { return {u.a.scaled(r), module_.scale(r, u.x)}; }
  Element mul(const Element& u, const Element& v) const {
    return {u.a * v.a, module_.add(module_.act(u.a, v.x), module_.act(v.a, u.x))};
  }
  Element gamma(unsigned n, const Element& u) const {
    if (n < 1) throw Error("divided power exponent must be at least 1");
    Vector x = module_.phi(n, u.x);
    for (unsigned i = 1; i < n; ++i) {
      const DPElement gi = divided_power(i, u.a);
      if (gi.is_zero()) continue;
      x = module_.add(x, module_.act(gi, module_.phi(n - i, u.x)));
    }
    return {divided_power(n, u.a), std::move(x)};
  }
  bool equal(const Element& u, const Element& v) const { return u.a == v.a && module_.equal(u.x, v.x); }
  std::string describe(const Element& u) const { return "(" + to_string(u.a) + ", " + module_.describe(u.x) + ")"; }

  Element random_element(std::mt19937_64& rng) const {
    std::uniform_int_distribution<int> kind(0, 3);
    const int k = kind(rng);
    DPElement a = k == 0 ? DPElement::zero(spec()) : dpalg::random_element(spec(), rng, max_terms_);
    Vector x = k == 1 ? module_.zero() : module_.random_vector(rng);
    return {std::move(a), std::move(x)};
  }

 private:
  Module module_;
  unsigned max_terms_;
};

template <BeckModuleModel Module>
SemidirectElement<typename Module::Vector> semidirect_mul(const Module& m,
                                                          const SemidirectElement<typename Module::Vector>& u,
                                                          const SemidirectElement<typename Module::Vector>& v) {
  return SemidirectAlgebra<Module>(m).mul(u, v);
}

template <BeckModuleModel Module>
SemidirectElement<typename Module::Vector> semidirect_gamma(const Module& m, unsigned n,
                                                            const SemidirectElement<typename Module::Vector>& u) {
  return SemidirectAlgebra<Module>(m).gamma(n, u);
}

/// Runs the DP axiom suite on A + M, plus the module-level laws that make
/// it an abelian object over A.
template <BeckModuleModel Module>
Report verify_beck_axioms(const Module& m, std::size_t samples, std::uint64_t seed, unsigned max_exponent = 8) {
  SemidirectAlgebra<Module> alg(m);
  Report report = check_dp_axioms(alg, samples, seed, max_exponent);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const AlgebraSpec& spec = m.algebra();
  for (std::size_t s = 0; s < samples; ++s) {
    const DPElement a = random_element(spec, rng);
    const auto y = m.random_vector(rng);
    for (unsigned p : primes_up_to(max_exponent)) {
      const auto z = m.phi(p, m.act(a, y));
      report.record(law::kPhiKillsA, m.equal(z, m.zero()), [&] {
        return "p = " + std::to_string(p) + ", a = " + to_string(a) + ", y = " + m.describe(y);
      });
      std::uint64_t q = p;
      for (unsigned e = 2; q * p <= max_exponent; ++e) {
        q *= p;
        auto iterated = SemidirectElement<typename Module::Vector>{DPElement::zero(spec), y};
        for (unsigned i = 0; i < e; ++i) iterated = alg.gamma(p, iterated);
        const auto direct = alg.gamma(static_cast<unsigned>(q), {DPElement::zero(spec), y});
        report.record(law::kPrimePowerIterate, alg.equal(iterated, direct), [&] {
          return "p^e = " + std::to_string(q) + ", x = " + m.describe(y);
        });
      }
    }
  }
  if constexpr (std::same_as<Module, UModule>) report.merge(m.validate(), "module: ");
  return report;
}

/// A DP algebra with trivial product whose divided powers come from a
/// U(0)-module, optionally overridden for chosen n by explicit semilinear
/// matrices (gamma_n(x) = G_n (x_1^n, ..., x_k^n)).
class AbelianDPAlgebra {
 public:
  using Element = ModuleVector;

  explicit AbelianDPAlgebra(UModule m) : module_(std::move(m)) {}

  void override_gamma(unsigned n, IntegerMatrix g) { overrides_[n] = std::move(g); }

  const UModule& module() const { return module_; }
  const RingSpec& ring() const { return module_.algebra().ring(); }

  Element random_element(std::mt19937_64& rng) const { return module_.random_vector(rng); }
  Element add(const Element& x, const Element& y) const { return module_.add(x, y); }
  Element mul(const Element&, const Element&) const { return module_.zero(); }
  Element scale(const Integer& r, const Element& x) const { return module_.scale(r, x); }
  Element gamma(unsigned n, const Element& x) const {
    auto it = overrides_.find(n);
    if (it == overrides_.end()) return module_.phi(n, x);
    Element powered(x);
    for (auto& c : powered) c = int_pow(c, n);
    return module_.apply(it->second, powered);
  }
  bool equal(const Element& x, const Element& y) const { return module_.equal(x, y); }
  std::string describe(const Element& x) const { return module_.describe(x); }

 private:
  UModule module_;
  std::map<unsigned, IntegerMatrix> overrides_;
};

namespace law {
inline constexpr const char* kPrimePowerSupport = "gamma_n = 0 unless n is a prime power";
inline constexpr const char* kAdditive = "gamma_p additive";
inline constexpr const char* kKilledByP = "p gamma_p = 0";
inline constexpr const char* kIterate = "gamma_{p^e} = gamma_p^e";
inline constexpr const char* kFrobenius = "gamma_p(r a) = r^p gamma_p(a)";
inline constexpr const char* kSumIsDPMap = "addition is a DP map";
}  // namespace law

/// Checks the structure theorem for abelian DP algebras on random elements.
inline Report verify_abelian_structure(const AbelianDPAlgebra& alg, std::size_t samples, std::uint64_t seed,
                                       unsigned max_exponent = 12) {
  Report report;
  for (const char* l : {law::kPrimePowerSupport, law::kAdditive, law::kKilledByP, law::kIterate, law::kFrobenius,
                        law::kSumIsDPMap}) {
    report.entry(l);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rdist(-6, 6);
  const auto primes = primes_up_to(max_exponent);
  for (std::size_t s = 0; s < samples; ++s) {
    const auto x = alg.random_element(rng);
    const auto y = alg.random_element(rng);
    const Scalar r(rdist(rng), alg.ring());
    for (unsigned n = 2; n <= max_exponent; ++n) {
      const auto gx = alg.gamma(n, x);
      if (!prime_power(n)) {
        report.record(law::kPrimePowerSupport, alg.equal(gx, alg.module().zero()), [&] {
          return "n = " + std::to_string(n) + ", x = " + alg.describe(x) + ", gamma_n(x) = " + alg.describe(gx);
        });
      }
      report.record(law::kSumIsDPMap, alg.equal(alg.gamma(n, alg.add(x, y)), alg.add(gx, alg.gamma(n, y))), [&] {
        return "n = " + std::to_string(n) + ", x = " + alg.describe(x) + ", y = " + alg.describe(y);
      });
    }
    for (unsigned p : primes) {
      const auto gx = alg.gamma(p, x);
      report.record(law::kAdditive, alg.equal(alg.gamma(p, alg.add(x, y)), alg.add(gx, alg.gamma(p, y))),
                    [&] { return "p = " + std::to_string(p) + ", x = " + alg.describe(x) + ", y = " + alg.describe(y); });
      report.record(law::kKilledByP, alg.equal(alg.scale(p, gx), alg.module().zero()),
                    [&] { return "p = " + std::to_string(p) + ", x = " + alg.describe(x); });
      report.record(law::kFrobenius,
                    alg.equal(alg.gamma(p, alg.scale(r.value(), x)), alg.scale(scalar_pow(r, p).value(), gx)),
                    [&] { return "p = " + std::to_string(p) + ", r = " + r.value().get_str() + ", x = " + alg.describe(x); });
      std::uint64_t q = p;
      auto iterated = gx;
      for (unsigned e = 2; q * p <= max_exponent; ++e) {
        q *= p;
        iterated = alg.gamma(p, iterated);
        report.record(law::kIterate, alg.equal(alg.gamma(static_cast<unsigned>(q), x), iterated),
                      [&] { return "p^e = " + std::to_string(q) + ", x = " + alg.describe(x); });
      }
    }
  }
  report.merge(check_dp_axioms(alg, samples, seed + 1, max_exponent), "dp: ");
  return report;
}

}  // namespace dpalg::beck
