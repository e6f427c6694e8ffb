/// @file dpcore.hpp
/// @brief Weight-truncated free divided power algebras: monomial basis,
///        canonical elements, multiplication and the divided power operators.
///
/// An element of the free DP algebra on generators x_1..x_k is a finite
/// combination of monomials gamma_{e_1}(x_1) ... gamma_{e_k}(x_k). Monomials
/// whose weight sum(e_i * w_i) exceeds the truncation N are identified with
/// zero; that set spans a DP ideal, so every operation here is computed in the
/// quotient algebra.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dpalg/coeff.hpp"

namespace dpalg {

class AlgebraSpec {
 public:
  AlgebraSpec() = default;
  AlgebraSpec(RingSpec ring, unsigned generator_count, unsigned truncation)
      : AlgebraSpec(std::move(ring), std::vector<unsigned>(generator_count, 1u), truncation) {}
  AlgebraSpec(RingSpec ring, std::vector<unsigned> weights, unsigned truncation)
      : ring_(std::move(ring)), weights_(std::move(weights)), truncation_(truncation) {
    if (weights_.empty()) throw Error("an algebra needs at least one generator");
    if (truncation_ < 1) throw Error("truncation must be positive");
    for (unsigned w : weights_) {
      if (w < 1) throw Error("generator weights must be positive");
      if (w > truncation_) throw Error("generator weight " + std::to_string(w) + " exceeds truncation");
    }
  }

  const RingSpec& ring() const { return ring_; }
  unsigned generator_count() const { return static_cast<unsigned>(weights_.size()); }
  const std::vector<unsigned>& weights() const { return weights_; }
  unsigned weight(unsigned generator) const { return weights_.at(generator); }
  unsigned truncation() const { return truncation_; }

  AlgebraSpec with_truncation(unsigned n) const { return AlgebraSpec(ring_, weights_, n); }

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;

 private:
  RingSpec ring_;
  std::vector<unsigned> weights_{1};
  unsigned truncation_ = 1;
};

/// gamma_{e_0}(x_0) * ... * gamma_{e_{k-1}}(x_{k-1}), stored as a dense
/// exponent vector. Ordered so that a larger exponent on an earlier generator
/// sorts first: gamma_2(x_1) < x_1 x_2 < gamma_2(x_2).
class DPMonomial {
 public:
  DPMonomial() = default;
  explicit DPMonomial(std::vector<unsigned> exponents) : exps_(std::move(exponents)) {}

  static DPMonomial single(unsigned generator_count, unsigned generator, unsigned exponent) {
    std::vector<unsigned> e(generator_count, 0);
    e.at(generator) = exponent;
    return DPMonomial(std::move(e));
  }

  const std::vector<unsigned>& exponents() const { return exps_; }
  unsigned exponent(unsigned generator) const { return exps_.at(generator); }
  std::size_t size() const { return exps_.size(); }

  /// (generator_index, exponent) pairs with exponent >= 1, indices increasing.
  std::vector<std::pair<unsigned, unsigned>> factors() const {
    std::vector<std::pair<unsigned, unsigned>> out;
    for (unsigned i = 0; i < exps_.size(); ++i) {
      if (exps_[i] > 0) out.emplace_back(i, exps_[i]);
    }
    return out;
  }

  bool is_unit() const {
    return std::all_of(exps_.begin(), exps_.end(), [](unsigned e) { return e == 0; });
  }

  unsigned weight(const AlgebraSpec& spec) const {
    unsigned w = 0;
    for (unsigned i = 0; i < exps_.size(); ++i) w += exps_[i] * spec.weight(i);
    return w;
  }

  friend bool operator==(const DPMonomial&, const DPMonomial&) = default;
  friend bool operator<(const DPMonomial& a, const DPMonomial& b) {
    return std::lexicographical_compare(a.exps_.begin(), a.exps_.end(), b.exps_.begin(), b.exps_.end(),
                                        std::greater<unsigned>());
  }

 private:
  std::vector<unsigned> exps_;
};

inline std::string monomial_to_string(const DPMonomial& m) {
  std::string out;
  for (auto [gen, e] : m.factors()) {
    if (!out.empty()) out += "*";
    if (e == 1) {
      out += "x" + std::to_string(gen + 1);
    } else {
      out += "g" + std::to_string(e) + "(x" + std::to_string(gen + 1) + ")";
    }
  }
  return out;
}

/// Product of two monomials in the free DP algebra: coefficient
/// prod_i C(a_i + b_i, a_i) on the merged monomial. The caller truncates.
inline std::pair<Integer, DPMonomial> multiply_monomials(const DPMonomial& a, const DPMonomial& b) {
  std::vector<unsigned> e(a.size());
  Integer c = 1;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = a.exponent(i) + b.exponent(i);
    if (a.exponent(i) > 0 && b.exponent(i) > 0) c *= gamma_product_coeff(a.exponent(i), b.exponent(i));
  }
  return {c, DPMonomial(std::move(e))};
}

class DPElement {
 public:
  using Terms = std::map<DPMonomial, Integer>;

  DPElement() = default;
  explicit DPElement(AlgebraSpec spec) : spec_(std::move(spec)) {}

  static DPElement zero(const AlgebraSpec& spec) { return DPElement(spec); }

  static DPElement monomial(const AlgebraSpec& spec, const DPMonomial& m, const Integer& coeff = 1) {
    DPElement out(spec);
    out.add_term(m, coeff);
    return out;
  }

  /// gamma_n(x_i); zero when n * w_i exceeds the truncation.
  static DPElement gamma_gen(const AlgebraSpec& spec, unsigned generator, unsigned n) {
    if (generator >= spec.generator_count()) throw Error("generator index out of range");
    if (n < 1) throw Error("divided power exponent must be at least 1");
    return monomial(spec, DPMonomial::single(spec.generator_count(), generator, n));
  }

  const AlgebraSpec& spec() const { return spec_; }
  const RingSpec& ring() const { return spec_.ring(); }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  Scalar coefficient(const DPMonomial& m) const {
    auto it = terms_.find(m);
    return Scalar(it == terms_.end() ? Integer(0) : it->second, ring());
  }

  /// Adds c * m in place; ignores monomials beyond the truncation.
  void add_term(const DPMonomial& m, const Integer& c) {
    if (m.size() != spec_.generator_count()) throw Error("monomial arity does not match the algebra");
    if (m.is_unit()) throw Error("the empty monomial is not an element of a non-unital algebra");
    if (m.weight(spec_) > spec_.truncation()) return;
    auto [it, inserted] = terms_.try_emplace(m, 0);
    it->second = ring().reduce(it->second + c);
    if (it->second == 0) terms_.erase(it);
  }

  DPElement& operator+=(const DPElement& other) {
    check_same_spec(other);
    for (const auto& [m, c] : other.terms_) add_term(m, c);
    return *this;
  }
  DPElement& operator-=(const DPElement& other) {
    check_same_spec(other);
    for (const auto& [m, c] : other.terms_) add_term(m, -c);
    return *this;
  }
  friend DPElement operator+(DPElement a, const DPElement& b) { return a += b; }
  friend DPElement operator-(DPElement a, const DPElement& b) { return a -= b; }
  DPElement operator-() const { return scaled(-1); }

  DPElement scaled(const Integer& r) const {
    DPElement out(spec_);
    for (const auto& [m, c] : terms_) out.add_term(m, c * r);
    return out;
  }
  friend DPElement operator*(const Scalar& r, const DPElement& a) { return a.scaled(r.value()); }

  friend DPElement operator*(const DPElement& a, const DPElement& b) {
    a.check_same_spec(b);
    DPElement out(a.spec_);
    const unsigned n = a.spec_.truncation();
    for (const auto& [ma, ca] : a.terms_) {
      const unsigned wa = ma.weight(a.spec_);
      for (const auto& [mb, cb] : b.terms_) {
        if (wa + mb.weight(a.spec_) > n) continue;
        auto [c, m] = multiply_monomials(ma, mb);
        out.add_term(m, c * ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const DPElement& a, const DPElement& b) {
    return a.spec_ == b.spec_ && a.terms_ == b.terms_;
  }

  /// The same element read in an algebra differing only in truncation;
  /// terms beyond the new truncation are dropped.
  DPElement retruncated(const AlgebraSpec& target) const {
    if (target.ring() != spec_.ring() || target.weights() != spec_.weights()) {
      throw Error("retruncation requires the same ring and generators");
    }
    DPElement out(target);
    for (const auto& [m, c] : terms_) out.add_term(m, c);
    return out;
  }

  void check_same_spec(const DPElement& other) const {
    if (!(spec_ == other.spec_)) throw Error("elements belong to different algebras");
  }

 private:
  AlgebraSpec spec_;
  Terms terms_;
};

/// a^n by repeated multiplication, n >= 1.
inline DPElement power(const DPElement& a, unsigned n) {
  if (n < 1) throw Error("power exponent must be positive in a non-unital algebra");
  DPElement out = a;
  for (unsigned i = 1; i < n && !out.is_zero(); ++i) out = out * a;
  return out;
}

namespace detail {

// gamma_j(mu) for a single basis monomial. A single factor uses the
// composition coefficient; otherwise the first factor is peeled off:
// gamma_j(gamma_e(x_i) mu') = gamma_e(x_i)^j gamma_j(mu').
inline DPElement gamma_of_monomial(const AlgebraSpec& spec, unsigned j, const DPMonomial& mu) {
  if (j == 1) return DPElement::monomial(spec, mu);
  if (static_cast<std::uint64_t>(j) * mu.weight(spec) > spec.truncation()) return DPElement::zero(spec);
  auto factors = mu.factors();
  const auto [gen, e] = factors.front();
  if (factors.size() == 1) {
    return DPElement::monomial(spec, DPMonomial::single(spec.generator_count(), gen, j * e),
                               gamma_compose_coeff(j, e));
  }
  std::vector<unsigned> rest = mu.exponents();
  rest[gen] = 0;
  DPElement head = power(DPElement::gamma_gen(spec, gen, e), j);
  return head * gamma_of_monomial(spec, j, DPMonomial(std::move(rest)));
}

}  // namespace detail

/// gamma_n(a) by multinomial expansion over the terms of a:
/// gamma_n(sum c_k mu_k) = sum over compositions of n of prod c_k^{n_k} gamma_{n_k}(mu_k).
inline DPElement divided_power(unsigned n, const DPElement& a) {
  if (n < 1) throw Error("divided power exponent must be at least 1");
  const AlgebraSpec& spec = a.spec();
  if (n == 1) return a;
  // partial[j] = gamma_j(sum of the terms processed so far), j = 1..n;
  // gamma_0 is the (absent) unit and is handled by the explicit cross terms.
  std::vector<DPElement> partial(n + 1, DPElement::zero(spec));
  bool first = true;
  for (const auto& [mu, c] : a.terms()) {
    const unsigned wt = mu.weight(spec);
    std::vector<DPElement> own(n + 1, DPElement::zero(spec));
    for (unsigned j = 1; j <= n && static_cast<std::uint64_t>(j) * wt <= spec.truncation(); ++j) {
      own[j] = detail::gamma_of_monomial(spec, j, mu).scaled(scalar_pow(Scalar(c, spec.ring()), j).value());
    }
    if (first) {
      partial = std::move(own);
      first = false;
      continue;
    }
    std::vector<DPElement> next(n + 1, DPElement::zero(spec));
    for (unsigned j = 1; j <= n; ++j) {
      DPElement acc = partial[j] + own[j];
      for (unsigned i = 1; i < j; ++i) {
        if (partial[i].is_zero() || own[j - i].is_zero()) continue;
        acc += partial[i] * own[j - i];
      }
      next[j] = std::move(acc);
    }
    partial = std::move(next);
  }
  return partial[n];
}

inline std::map<unsigned, DPElement> weight_components(const DPElement& a) {
  std::map<unsigned, DPElement> out;
  for (const auto& [m, c] : a.terms()) {
    auto [it, inserted] = out.try_emplace(m.weight(a.spec()), a.spec());
    it->second.add_term(m, c);
  }
  return out;
}

namespace detail {

inline void enumerate_weight(const AlgebraSpec& spec, unsigned gen, unsigned remaining, std::vector<unsigned>& exps,
                             std::vector<DPMonomial>& out) {
  if (gen == spec.generator_count()) {
    if (remaining == 0) out.emplace_back(exps);
    return;
  }
  const unsigned w = spec.weight(gen);
  for (unsigned e = remaining / w + 1; e-- > 0;) {
    exps[gen] = e;
    enumerate_weight(spec, gen + 1, remaining - e * w, exps, out);
  }
  exps[gen] = 0;
}

}  // namespace detail

/// All basis monomials of weight exactly w, in monomial order.
inline std::vector<DPMonomial> basis_of_weight(const AlgebraSpec& spec, unsigned w) {
  if (w < 1 || w > spec.truncation()) {
    throw Error("weight " + std::to_string(w) + " is outside 1.." + std::to_string(spec.truncation()));
  }
  std::vector<DPMonomial> out;
  std::vector<unsigned> exps(spec.generator_count(), 0);
  detail::enumerate_weight(spec, 0, w, exps, out);
  return out;
}

/// Every basis monomial of weight 1..N, grouped by weight.
inline std::vector<DPMonomial> full_basis(const AlgebraSpec& spec) {
  std::vector<DPMonomial> out;
  for (unsigned w = 1; w <= spec.truncation(); ++w) {
    auto b = basis_of_weight(spec, w);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

/// Applies the DP map out of a free algebra determined by generator images.
inline DPElement dp_map_apply(const std::vector<DPElement>& images, const DPElement& a) {
  if (images.size() != a.spec().generator_count()) {
    throw Error("dp_map_apply: expected " + std::to_string(a.spec().generator_count()) + " generator images, got " +
                std::to_string(images.size()));
  }
  const AlgebraSpec& target = images.front().spec();
  for (const auto& img : images) {
    if (!(img.spec() == target)) throw Error("dp_map_apply: images live in different algebras");
  }
  if (!(target.ring() == a.ring())) throw Error("dp_map_apply: source and target rings differ");
  DPElement out(target);
  for (const auto& [m, c] : a.terms()) {
    std::optional<DPElement> prod;
    for (auto [gen, e] : m.factors()) {
      DPElement f = divided_power(e, images[gen]);
      prod = prod ? *prod * f : std::move(f);
      if (prod->is_zero()) break;
    }
    out += prod->scaled(c);
  }
  return out;
}

/// Canonical text: terms by (weight, monomial order), coefficient omitted when 1.
inline std::string to_string(const DPElement& a) {
  if (a.is_zero()) return "0";
  std::vector<std::pair<unsigned, const DPMonomial*>> order;
  for (const auto& [m, c] : a.terms()) order.emplace_back(m.weight(a.spec()), &m);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  std::string out;
  for (const auto& [w, m] : order) {
    Integer c = a.terms().at(*m);
    const bool negative = c < 0;
    if (negative) c = -c;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    if (c != 1) out += c.get_str() + "*";
    out += monomial_to_string(*m);
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const DPElement& a) { return os << to_string(a); }

/// Uniformly chosen basis monomial of weight <= N.
inline DPMonomial random_monomial(const AlgebraSpec& spec, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> wdist(1, spec.truncation());
  for (;;) {
    const unsigned w = wdist(rng);
    std::vector<unsigned> exps(spec.generator_count(), 0);
    // Greedy random split of w among the generators; retry on misfit.
    unsigned remaining = w;
    for (unsigned g = 0; g < spec.generator_count(); ++g) {
      const unsigned cap = remaining / spec.weight(g);
      const unsigned e =
          g + 1 == spec.generator_count() ? cap : std::uniform_int_distribution<unsigned>(0, cap)(rng);
      exps[g] = e;
      remaining -= e * spec.weight(g);
    }
    DPMonomial m(std::move(exps));
    if (!m.is_unit()) return m;
  }
}

/// A random element with up to `max_terms` terms and coefficients in [-bound, bound].
inline DPElement random_element(const AlgebraSpec& spec, std::mt19937_64& rng, unsigned max_terms = 3,
                                int bound = 5) {
  DPElement out(spec);
  const unsigned k = std::uniform_int_distribution<unsigned>(1, max_terms)(rng);
  std::uniform_int_distribution<int> cdist(-bound, bound);
  for (unsigned i = 0; i < k; ++i) out.add_term(random_monomial(spec, rng), cdist(rng));
  return out;
}

}  // namespace dpalg
