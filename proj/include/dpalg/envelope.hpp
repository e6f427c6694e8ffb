/// @file envelope.hpp
/// @brief The enveloping bimodule-algebras U(0) = R[phi_p]/(p phi_p) and
///        U(A) = A_+ (x) U(0), in canonical form.
///
/// Elements are sums  c (x) mu  with c in A_+ = A + R written on the left and
/// mu a phi-monomial (Unit or phi_p^e). Multiplication is not R-central:
/// phi_p r = r^p phi_p and phi_p a = 0 for a in A.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"

namespace dpalg {

/// Unit (prime == 0) or phi_p^e, which stands for phi_{p^e}.
struct PhiMonomial {
  unsigned prime = 0;
  unsigned exponent = 0;

  static PhiMonomial unit() { return {}; }
  static PhiMonomial phi(unsigned p, unsigned e) {
    if (!is_prime(p)) throw Error("phi_p needs a prime, got " + std::to_string(p));
    if (e < 1) throw Error("phi exponent must be positive");
    return {p, e};
  }

  bool is_unit() const { return prime == 0; }

  /// 1 for Unit, p^e otherwise.
  std::uint64_t degree() const {
    std::uint64_t d = 1;
    for (unsigned i = 0; i < exponent; ++i) d *= prime;
    return d;
  }

  friend bool operator==(const PhiMonomial&, const PhiMonomial&) = default;
  friend bool operator<(const PhiMonomial& a, const PhiMonomial& b) {
    const auto da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.prime < b.prime;
  }
};

inline std::string to_string(const PhiMonomial& mu) {
  return mu.is_unit() ? "1" : "phi" + std::to_string(mu.degree());
}

/// phi_n: Unit for n = 1, phi_p^e for n = p^e, nullopt (zero) otherwise.
inline std::optional<PhiMonomial> phi_of(unsigned n) {
  if (n < 1) throw Error("phi_n needs n >= 1");
  if (n == 1) return PhiMonomial::unit();
  if (auto pe = prime_power(n)) return PhiMonomial::phi(pe->first, pe->second);
  return std::nullopt;
}

/// Product in U(0) on phi-monomials; nullopt when phi_p phi_q with p != q.
inline std::optional<PhiMonomial> multiply_phi(const PhiMonomial& a, const PhiMonomial& b) {
  if (a.is_unit()) return b;
  if (b.is_unit()) return a;
  if (a.prime != b.prime) return std::nullopt;
  return PhiMonomial{a.prime, a.exponent + b.exponent};
}

/// Basis of U(0) up to degree `cap`, with annihilators (0 = free).
inline std::vector<std::pair<PhiMonomial, Integer>> u0_basis_up_to(unsigned cap, const RingSpec& ring) {
  if (cap < 1) throw Error("u0_basis_up_to: cap must be positive");
  std::vector<std::pair<PhiMonomial, Integer>> out{{PhiMonomial::unit(), 0}};
  for (unsigned n = 2; n <= cap; ++n) {
    auto pe = prime_power(n);
    if (!pe) continue;
    if (ring.torsion_modulus(pe->first) == 1) continue;
    out.emplace_back(PhiMonomial::phi(pe->first, pe->second), pe->first);
  }
  return out;
}

/// (algebra part, scalar part) in A_+ = A + R.
class AugmentedElement {
 public:
  AugmentedElement() = default;
  explicit AugmentedElement(const AlgebraSpec& spec, Integer scalar = 0)
      : scalar_(spec.ring().reduce(std::move(scalar))), algebra_(spec) {}
  AugmentedElement(DPElement algebra, Integer scalar)
      : scalar_(algebra.ring().reduce(std::move(scalar))), algebra_(std::move(algebra)) {}

  const Integer& scalar_part() const { return scalar_; }
  const DPElement& algebra_part() const { return algebra_; }
  const AlgebraSpec& spec() const { return algebra_.spec(); }
  bool is_zero() const { return scalar_ == 0 && algebra_.is_zero(); }

  AugmentedElement& operator+=(const AugmentedElement& o) {
    algebra_ += o.algebra_;
    scalar_ = algebra_.ring().reduce(scalar_ + o.scalar_);
    return *this;
  }
  AugmentedElement& operator-=(const AugmentedElement& o) {
    algebra_ -= o.algebra_;
    scalar_ = algebra_.ring().reduce(scalar_ - o.scalar_);
    return *this;
  }
  friend AugmentedElement operator+(AugmentedElement a, const AugmentedElement& b) { return a += b; }
  friend AugmentedElement operator-(AugmentedElement a, const AugmentedElement& b) { return a -= b; }

  AugmentedElement scaled(const Integer& r) const { return {algebra_.scaled(r), scalar_ * r}; }

  /// (a, r)(b, s) = (ab + rb + sa, rs).
  friend AugmentedElement operator*(const AugmentedElement& x, const AugmentedElement& y) {
    DPElement a = x.algebra_ * y.algebra_;
    a += y.algebra_.scaled(x.scalar_);
    a += x.algebra_.scaled(y.scalar_);
    return {std::move(a), x.scalar_ * y.scalar_};
  }

  /// Every coefficient reduced into [0, g).
  AugmentedElement reduced_mod(const Integer& g) const {
    AugmentedElement out(spec());
    out.scalar_ = mod_floor(scalar_, g);
    for (const auto& [m, c] : algebra_.terms()) out.algebra_.add_term(m, mod_floor(c, g));
    return out;
  }

  /// Drops scalar and algebra terms whose weight plus `offset` exceeds `limit`.
  AugmentedElement truncated(std::uint64_t offset, unsigned limit) const {
    AugmentedElement out(spec());
    if (offset > limit) return out;
    out.scalar_ = scalar_;
    for (const auto& [m, c] : algebra_.terms()) {
      if (m.weight(spec()) + offset <= limit) out.algebra_.add_term(m, c);
    }
    return out;
  }

  friend bool operator==(const AugmentedElement&, const AugmentedElement&) = default;

 private:
  static Integer mod_floor(const Integer& v, const Integer& g) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return r;
  }

  Integer scalar_ = 0;
  DPElement algebra_;
};

inline std::string to_string(const AugmentedElement& c) {
  std::string out = c.algebra_part().is_zero() ? std::string{} : to_string(c.algebra_part());
  if (c.scalar_part() != 0) {
    Integer s = c.scalar_part();
    if (out.empty()) return s.get_str();
    out += s < 0 ? " - " + Integer(-s).get_str() : " + " + s.get_str();
  }
  return out.empty() ? "0" : out;
}

class EnvelopeElement {
 public:
  using Terms = std::map<PhiMonomial, AugmentedElement>;

  EnvelopeElement() = default;
  explicit EnvelopeElement(AlgebraSpec spec) : spec_(std::move(spec)) {}

  static EnvelopeElement unit(const AlgebraSpec& spec) { return scalar(spec, 1); }
  static EnvelopeElement scalar(const AlgebraSpec& spec, const Integer& r) {
    EnvelopeElement out(spec);
    out.add_term(PhiMonomial::unit(), AugmentedElement(spec, r));
    return out;
  }
  /// a (x) Unit.
  static EnvelopeElement from_algebra(const DPElement& a) {
    EnvelopeElement out(a.spec());
    out.add_term(PhiMonomial::unit(), AugmentedElement(a, 0));
    return out;
  }
  /// 1 (x) phi_n; zero when n is not 1 or a prime power.
  static EnvelopeElement phi(const AlgebraSpec& spec, unsigned n) {
    EnvelopeElement out(spec);
    if (auto mu = phi_of(n)) out.add_term(*mu, AugmentedElement(spec, 1));
    return out;
  }

  const AlgebraSpec& spec() const { return spec_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c (x) mu, reducing phi_p-coefficients mod p (mod gcd(p, m) over Z/m).
  void add_term(const PhiMonomial& mu, const AugmentedElement& c) {
    auto [it, inserted] = terms_.try_emplace(mu, spec_);
    it->second += c;
    if (!mu.is_unit()) {
      const Integer g = spec_.ring().torsion_modulus(mu.prime);
      it->second = g == 1 ? AugmentedElement(spec_) : it->second.reduced_mod(g);
    }
    if (it->second.is_zero()) terms_.erase(it);
  }

  EnvelopeElement& operator+=(const EnvelopeElement& o) {
    check_same_spec(o);
    for (const auto& [mu, c] : o.terms_) add_term(mu, c);
    return *this;
  }
  EnvelopeElement& operator-=(const EnvelopeElement& o) {
    check_same_spec(o);
    for (const auto& [mu, c] : o.terms_) add_term(mu, c.scaled(-1));
    return *this;
  }
  friend EnvelopeElement operator+(EnvelopeElement a, const EnvelopeElement& b) { return a += b; }
  friend EnvelopeElement operator-(EnvelopeElement a, const EnvelopeElement& b) { return a -= b; }

  /// Left multiplication by a scalar: r (c (x) mu) = (rc) (x) mu.
  EnvelopeElement scaled(const Integer& r) const {
    EnvelopeElement out(spec_);
    for (const auto& [mu, c] : terms_) out.add_term(mu, c.scaled(r));
    return out;
  }

  /// Keeps the part of weight <= limit, where c (x) phi_n contributes
  /// weight(c) + n * unit_weight.
  EnvelopeElement truncated(unsigned unit_weight, unsigned limit) const {
    EnvelopeElement out(spec_);
    for (const auto& [mu, c] : terms_) out.add_term(mu, c.truncated(mu.degree() * unit_weight, limit));
    return out;
  }

  friend bool operator==(const EnvelopeElement& a, const EnvelopeElement& b) {
    return a.spec_ == b.spec_ && a.terms_ == b.terms_;
  }

  void check_same_spec(const EnvelopeElement& o) const {
    if (!(spec_ == o.spec_)) throw Error("envelope elements belong to different algebras");
  }

 private:
  AlgebraSpec spec_;
  Terms terms_;
};

/// (c (x) mu)((b, s) (x) nu) = c (b, s) (x) nu         if mu = Unit,
///                           = c s^{deg mu} (x) mu nu  otherwise (phi kills b).
inline EnvelopeElement envelope_mul(const EnvelopeElement& u, const EnvelopeElement& v) {
  u.check_same_spec(v);
  const AlgebraSpec& spec = u.spec();
  EnvelopeElement out(spec);
  for (const auto& [mu, c] : u.terms()) {
    for (const auto& [nu, d] : v.terms()) {
      auto prod = multiply_phi(mu, nu);
      if (!prod) continue;
      if (mu.is_unit()) {
        out.add_term(*prod, c * d);
      } else {
        if (d.scalar_part() == 0) continue;
        const Scalar twisted = scalar_pow(Scalar(d.scalar_part(), spec.ring()), mu.degree());
        out.add_term(*prod, c.scaled(twisted.value()));
      }
    }
  }
  return out;
}

inline EnvelopeElement operator*(const EnvelopeElement& u, const EnvelopeElement& v) { return envelope_mul(u, v); }

inline std::string to_string(const EnvelopeElement& u) {
  if (u.is_zero()) return "0";
  std::string out;
  for (const auto& [mu, c] : u.terms()) {
    if (!out.empty()) out += " + ";
    const std::string cs = to_string(c);
    if (mu.is_unit()) {
      out += c.algebra_part().is_zero() ? cs : "(" + cs + ")";
    } else if (c.algebra_part().is_zero() && c.scalar_part() == 1) {
      out += to_string(mu);
    } else {
      out += (c.algebra_part().term_count() + (c.scalar_part() != 0) > 1 ? "(" + cs + ")" : cs) + "*" + to_string(mu);
    }
  }
  return out;
}

}  // namespace dpalg
