/// @file coeff.hpp
/// @brief Coefficient rings Z and Z/m, and the integer coefficients that
///        appear in the divided power identities.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpalg {

using Integer = mpz_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base ring: Z (modulus 0) or Z/m with m >= 2.
class RingSpec {
 public:
  enum class Kind { kIntegers, kIntegersMod };

  RingSpec() = default;

  static RingSpec integers() { return RingSpec{}; }
  static RingSpec integers_mod(const Integer& m) {
    if (m < 2) throw Error("modulus must be at least 2, got " + m.get_str());
    RingSpec r;
    r.modulus_ = m;
    return r;
  }

  Kind kind() const { return modulus_ == 0 ? Kind::kIntegers : Kind::kIntegersMod; }
  bool is_integers() const { return modulus_ == 0; }
  /// 0 for Z.
  const Integer& modulus() const { return modulus_; }

  /// Canonical representative: identity over Z, residue in [0, m) over Z/m.
  Integer reduce(Integer v) const {
    if (modulus_ != 0) {
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), modulus_.get_mpz_t());
    }
    return v;
  }

  /// The characteristic-aware modulus for coefficients killed by `p`:
  /// p over Z, gcd(p, m) over Z/m.
  Integer torsion_modulus(const Integer& p) const {
    if (modulus_ == 0) return p;
    Integer g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), modulus_.get_mpz_t());
    return g;
  }

  std::string name() const { return modulus_ == 0 ? "Z" : "Z/" + modulus_.get_str(); }

  friend bool operator==(const RingSpec& a, const RingSpec& b) { return a.modulus_ == b.modulus_; }

 private:
  Integer modulus_ = 0;
};

/// An element of a coefficient ring, always stored canonically.
class Scalar {
 public:
  Scalar() = default;
  Scalar(Integer value, RingSpec ring) : ring_(std::move(ring)) { value_ = ring_.reduce(std::move(value)); }

  static Scalar one(const RingSpec& ring) { return Scalar(1, ring); }
  static Scalar zero(const RingSpec& ring) { return Scalar(0, ring); }

  const Integer& value() const { return value_; }
  const RingSpec& ring() const { return ring_; }
  bool is_zero() const { return value_ == 0; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return {a.value_ + b.value_, a.ring_}; }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return {a.value_ - b.value_, a.ring_}; }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return {a.value_ * b.value_, a.ring_}; }
  Scalar operator-() const { return {-value_, ring_}; }
  friend bool operator==(const Scalar& a, const Scalar& b) { return a.ring_ == b.ring_ && a.value_ == b.value_; }

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.value_.get_str(); }

 private:
  Integer value_ = 0;
  RingSpec ring_;
};

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline Integer binomial(unsigned long n, unsigned long k) {
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Integer int_pow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// Decomposes n = p^e with p prime and e >= 1; nullopt when n is not a prime power.
inline std::optional<std::pair<unsigned, unsigned>> prime_power(unsigned n) {
  if (n < 2) return std::nullopt;
  unsigned p = 2;
  while (n % p != 0) ++p;
  unsigned e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  if (n != 1) return std::nullopt;
  return std::make_pair(p, e);
}

inline std::vector<unsigned> primes_up_to(unsigned bound) {
  std::vector<unsigned> out;
  for (unsigned p = 2; p <= bound; ++p) {
    if (is_prime(p)) out.push_back(p);
  }
  return out;
}

/// (m+n)! / (m! n!), the coefficient in gamma_m(a) gamma_n(a) = c gamma_{m+n}(a).
inline Integer gamma_product_coeff(unsigned m, unsigned n) {
  if (m < 1 || n < 1) throw Error("gamma_product_coeff: arguments must be positive");
  return binomial(m + n, m);
}

/// (mn)! / (m! (n!)^m), the coefficient in gamma_m(gamma_n(a)) = c gamma_{mn}(a).
inline Integer gamma_compose_coeff(unsigned m, unsigned n) {
  if (m < 1 || n < 1) throw Error("gamma_compose_coeff: arguments must be positive");
  Integer num = factorial(static_cast<unsigned long>(m) * n);
  Integer den = factorial(m) * int_pow(factorial(n), m);
  Integer q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

/// gcd of the middle binomial coefficients C(n, 1), ..., C(n, n-1).
inline Integer gcd_middle_binomials(unsigned n) {
  if (n < 2) throw Error("gcd_middle_binomials: n must be at least 2");
  Integer g = 0;
  for (unsigned i = 1; i < n; ++i) g = gcd(g, binomial(n, i));
  return g;
}

/// (kp)! / (k! (p!)^k) computed exactly, then reduced mod p.
inline Scalar cartan_congruence_residue(unsigned k, unsigned p) {
  if (!is_prime(p)) throw Error("cartan_congruence_residue: " + std::to_string(p) + " is not prime");
  if (k < 1) throw Error("cartan_congruence_residue: k must be positive");
  return Scalar(gamma_compose_coeff(k, p), RingSpec::integers_mod(p));
}

inline Scalar scalar_pow(const Scalar& r, unsigned long n) {
  const RingSpec& ring = r.ring();
  if (ring.is_integers()) return Scalar(int_pow(r.value(), n), ring);
  Integer out;
  mpz_powm_ui(out.get_mpz_t(), r.value().get_mpz_t(), n, ring.modulus().get_mpz_t());
  return Scalar(out, ring);
}

}  // namespace dpalg
