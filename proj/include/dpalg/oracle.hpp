/// @file oracle.hpp
/// @brief Brute-force constructions used as ground truth: the coproduct A u A,
///        the fold kernel I, the quotient I/I^2 with its induced divided
///        powers, the indecomposables A/A^2, and direct products.
///
/// Everything here is computed from scratch with exact integer linear
/// algebra and compared against the closed forms in kahler.hpp.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dpalg/axioms.hpp"
#include "dpalg/coeff.hpp"
#include "dpalg/dpcore.hpp"
#include "dpalg/kahler.hpp"
#include "dpalg/linalg.hpp"
#include "dpalg/report.hpp"

namespace dpalg::oracle {

enum class CoproductComponent { kLeft, kMixed, kRight };

/// Free realization of A u B: generators of A first, then those of B.
struct Coproduct {
  AlgebraSpec spec;
  unsigned left_count = 0;
  std::vector<DPElement> in1;  // images of the generators of A
  std::vector<DPElement> in2;  // images of the generators of B

  /// Which of (A (x) R), (A (x) B), (R (x) B) a monomial belongs to.
  CoproductComponent component(const DPMonomial& m) const {
    bool left = false, right = false;
    for (const auto& [gen, e] : m.factors()) (gen < left_count ? left : right) = true;
    if (left && right) return CoproductComponent::kMixed;
    return left ? CoproductComponent::kLeft : CoproductComponent::kRight;
  }

  DPElement embed_left(const DPElement& a) const { return dp_map_apply(in1, a); }
  DPElement embed_right(const DPElement& b) const { return dp_map_apply(in2, b); }
};

inline Coproduct coproduct(const AlgebraSpec& a, const AlgebraSpec& b) {
  if (!(a.ring() == b.ring())) throw Error("coproduct: algebras over different rings");
  std::vector<unsigned> weights = a.weights();
  weights.insert(weights.end(), b.weights().begin(), b.weights().end());
  Coproduct out{AlgebraSpec(a.ring(), weights, std::min(a.truncation(), b.truncation())), a.generator_count(), {}, {}};
  for (unsigned i = 0; i < a.generator_count(); ++i) out.in1.push_back(DPElement::gamma_gen(out.spec, i, 1));
  for (unsigned i = 0; i < b.generator_count(); ++i) {
    out.in2.push_back(DPElement::gamma_gen(out.spec, a.generator_count() + i, 1));
  }
  return out;
}

inline Row coordinates_in(const std::vector<DPMonomial>& basis, const DPElement& a) {
  Row out(basis.size(), 0);
  for (const auto& [m, c] : a.terms()) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m);
    if (it == basis.end() || !(*it == m)) throw Error("coordinates_in: monomial outside the basis slice");
    out[static_cast<std::size_t>(it - basis.begin())] = c;
  }
  return out;
}

inline DPElement element_of(const AlgebraSpec& spec, const std::vector<DPMonomial>& basis, const Row& coords) {
  DPElement out(spec);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (coords[i] != 0) out.add_term(basis[i], coords[i]);
  }
  return out;
}

struct FoldKernelSlice {
  unsigned weight = 0;
  std::vector<DPMonomial> coproduct_basis;  // column labels, sorted
  IntegerMatrix fold;                       // A_w basis x coproduct_basis
  IntegerMatrix kernel;                     // rows: a Z-basis of the (lifted) kernel
};

struct FoldKernel {
  AlgebraSpec spec;
  Coproduct cp;
  std::vector<FoldKernelSlice> slices;  // weights 1..N
};

/// Kernel of the fold map A u A -> A, weight by weight. Over Z/m the lattice
/// returned is the preimage in Z^n, so it contains m Z^n.
inline FoldKernel fold_kernel(const AlgebraSpec& spec) {
  FoldKernel out{spec, coproduct(spec, spec), {}};
  std::vector<DPElement> fold_images;
  for (unsigned r = 0; r < 2; ++r) {
    for (unsigned i = 0; i < spec.generator_count(); ++i) fold_images.push_back(DPElement::gamma_gen(spec, i, 1));
  }
  for (unsigned w = 1; w <= spec.truncation(); ++w) {
    FoldKernelSlice s;
    s.weight = w;
    s.coproduct_basis = basis_of_weight(out.cp.spec, w);
    std::sort(s.coproduct_basis.begin(), s.coproduct_basis.end());
    std::vector<DPMonomial> target = basis_of_weight(spec, w);
    std::sort(target.begin(), target.end());
    const std::size_t n = s.coproduct_basis.size(), r = target.size();
    s.fold = IntegerMatrix(r, n);
    for (std::size_t j = 0; j < n; ++j) {
      const Row col = coordinates_in(target, dp_map_apply(fold_images, DPElement::monomial(out.cp.spec, s.coproduct_basis[j])));
      for (std::size_t i = 0; i < r; ++i) s.fold(i, j) = col[i];
    }
    if (spec.ring().is_integers()) {
      s.kernel = integer_kernel(s.fold);
    } else {
      IntegerMatrix lifted(r, n + r);
      for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < n; ++j) lifted(i, j) = s.fold(i, j);
        lifted(i, n + i) = spec.ring().modulus();
      }
      std::vector<Row> proj;
      const IntegerMatrix lifted_kernel = integer_kernel(lifted);
      for (const auto& row : lifted_kernel.rows()) proj.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
      Lattice l(proj, n);
      s.kernel = IntegerMatrix(l.basis(), n);
    }
    out.slices.push_back(std::move(s));
  }
  return out;
}

/// I/I^2 in one weight: the lattices I_w and (I^2)_w inside the coproduct
/// slice, and the quotient's invariant factors.
struct QuotientSlice {
  unsigned weight = 0;
  Lattice ideal;
  Lattice square;
  InvariantFactors invariants;
  /// Induced gamma_p on the kernel basis: image of each kernel basis row
  /// (in weight p*w coordinates), for each prime p with p*w <= N.
  std::map<unsigned, std::vector<Row>> phi_images;
};

struct IdealQuotient {
  FoldKernel kernel;
  std::vector<QuotientSlice> slices;

  const std::vector<DPMonomial>& basis(unsigned w) const { return kernel.slices[w - 1].coproduct_basis; }
  const AlgebraSpec& coproduct_spec() const { return kernel.cp.spec; }

  Row coordinates(const DPElement& a, unsigned w) const { return coordinates_in(basis(w), a); }

  /// Whether an element of weight w lies in I^2 (over Z/m: in I^2 + m C).
  bool in_square(const DPElement& a, unsigned w) const { return slices[w - 1].square.contains(coordinates(a, w)); }
  bool in_ideal(const DPElement& a, unsigned w) const { return slices[w - 1].ideal.contains(coordinates(a, w)); }
};

inline IdealQuotient i_mod_i_squared(const AlgebraSpec& spec) {
  IdealQuotient out{fold_kernel(spec), {}};
  const AlgebraSpec& cs = out.kernel.cp.spec;
  const unsigned N = spec.truncation();
  std::vector<std::vector<DPElement>> kernel_elems(N + 1);
  for (const auto& s : out.kernel.slices) {
    for (const auto& row : s.kernel.rows()) kernel_elems[s.weight].push_back(element_of(cs, s.coproduct_basis, row));
  }
  for (unsigned w = 1; w <= N; ++w) {
    const auto& ks = out.kernel.slices[w - 1];
    const std::size_t n = ks.coproduct_basis.size();
    QuotientSlice q;
    q.weight = w;
    q.ideal = Lattice(ks.kernel.rows(), n);
    std::vector<Row> sq;
    for (unsigned w1 = 1; 2 * w1 <= w; ++w1) {
      const unsigned w2 = w - w1;
      for (std::size_t i = 0; i < kernel_elems[w1].size(); ++i) {
        for (std::size_t j = (w1 == w2 ? i : 0); j < kernel_elems[w2].size(); ++j) {
          const DPElement prod = kernel_elems[w1][i] * kernel_elems[w2][j];
          if (!prod.is_zero()) sq.push_back(coordinates_in(ks.coproduct_basis, prod));
        }
      }
    }
    if (!spec.ring().is_integers()) {
      for (std::size_t j = 0; j < n; ++j) {
        Row r(n, 0);
        r[j] = spec.ring().modulus();
        sq.push_back(std::move(r));
      }
    }
    q.square = Lattice(sq, n);
    IntegerMatrix rel(q.ideal.rank());
    for (const auto& v : q.square.basis()) {
      auto c = q.ideal.coordinates(v);
      if (!c) throw Error("i_mod_i_squared: I^2 not contained in I");
      rel.add_row(std::move(*c));
    }
    q.invariants = cokernel(rel);
    for (unsigned p : primes_up_to(N)) {
      if (static_cast<std::uint64_t>(p) * w > N) break;
      auto& images = q.phi_images[p];
      for (const auto& k : kernel_elems[w]) {
        images.push_back(coordinates_in(out.kernel.slices[p * w - 1].coproduct_basis, divided_power(p, k)));
      }
    }
    out.slices.push_back(std::move(q));
  }
  return out;
}

struct SliceComparison {
  unsigned weight = 0;
  InvariantFactors oracle;
  InvariantFactors closed_form;
  bool equal = false;
};

struct MainTheoremReport {
  AlgebraSpec spec;
  std::vector<SliceComparison> slices;
  Report laws;

  bool slices_equal() const {
    return std::all_of(slices.begin(), slices.end(), [](const SliceComparison& s) { return s.equal; });
  }
  bool ok() const { return slices_equal() && laws.ok(); }
};

namespace law {
inline constexpr const char* kSlicesEqual = "I/I^2 invariant factors = closed form";
inline constexpr const char* kComparisonInIdeal = "comparison map lands in I";
inline constexpr const char* kComparisonAnnihilators = "comparison map respects annihilators";
inline constexpr const char* kComparisonSurjective = "comparison map onto I/I^2";
inline constexpr const char* kComparisonALinear = "comparison map is A-linear mod I^2";
inline constexpr const char* kComparisonPhi = "comparison map: phi_p corresponds to gamma_p mod I^2";
inline constexpr const char* kDerivationMatches = "comparison of da = in2(a) - in1(a) mod I^2";
inline constexpr const char* kDeltaLeibniz = "delta(ab) = a delta(b) + b delta(a) mod I^2";
inline constexpr const char* kDeltaGamma = "delta(gamma_n a) = gamma_n(delta a) + sum gamma_i(a) gamma_j(delta a) mod I^2";
}  // namespace law

/// Compares I/I^2 with the closed-form U(A) (x) V weight by weight.
///
/// Beyond equal invariant factors, the explicit comparison map
/// b phi_n dx_i -> in1(b) gamma_n(x_i'' - x_i') is checked to be well defined,
/// onto, A-linear and to carry phi_p to the induced gamma_p; a surjection
/// between isomorphic finitely generated abelian groups is an isomorphism, so
/// together these pin down I/I^2 as a DP A-module.
inline MainTheoremReport verify_main_theorem(const AlgebraSpec& spec, std::size_t samples = 64, std::uint64_t seed = 1) {
  MainTheoremReport out{spec, {}, {}};
  const IdealQuotient q = i_mod_i_squared(spec);
  const kahler::OmegaBasis omega(spec);
  const Coproduct& cp = q.kernel.cp;
  const AlgebraSpec& cs = cp.spec;
  const unsigned N = spec.truncation();
  const unsigned k = spec.generator_count();

  for (const char* l : {law::kSlicesEqual, law::kComparisonInIdeal, law::kComparisonAnnihilators,
                        law::kComparisonSurjective, law::kComparisonALinear, law::kComparisonPhi,
                        law::kDerivationMatches, law::kDeltaLeibniz, law::kDeltaGamma}) {
    out.laws.entry(l);
  }

  std::vector<DPElement> diff;  // x_i'' - x_i'
  for (unsigned i = 0; i < k; ++i) diff.push_back(cp.in2[i] - cp.in1[i]);

  auto psi = [&](const kahler::OmegaBasisElement& e) {
    DPElement v = divided_power(static_cast<unsigned>(e.phi.degree()), diff[e.generator]);
    if (e.coefficient) v = cp.embed_left(DPElement::monomial(spec, *e.coefficient)) * v;
    return v;
  };
  auto psi_of = [&](const kahler::OmegaElement& w) {
    DPElement v(cs);
    const auto coords = omega.coordinates(w);
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (coords[j] != 0) v += psi(omega.elements()[j]).scaled(coords[j]);
    }
    return v;
  };
  auto congruent = [&](const DPElement& a, const DPElement& b) {
    for (const auto& [w, part] : weight_components(a - b)) {
      if (!q.in_square(part, w)) return false;
    }
    return true;
  };
  auto in_ideal = [&](const DPElement& a) {
    for (const auto& [w, part] : weight_components(a)) {
      if (!q.in_ideal(part, w)) return false;
    }
    return true;
  };
  auto phi_n = [&](unsigned n, const DPElement& a) { return n == 1 ? a : divided_power(n, a); };

  for (unsigned w = 1; w <= N; ++w) {
    const auto& qs = q.slices[w - 1];
    SliceComparison c{w, qs.invariants, omega.slice_invariants(w), false};
    c.equal = c.oracle == c.closed_form;
    out.laws.record(law::kSlicesEqual, c.equal, [&] {
      return "weight " + std::to_string(w) + ": oracle " + to_string(c.oracle) + ", closed form " + to_string(c.closed_form);
    });
    out.slices.push_back(c);

    std::vector<Row> gens = qs.square.basis();
    for (const auto& e : omega.slice(w)) {
      const DPElement v = psi(e);
      const Row coords = q.coordinates(v, w);
      out.laws.record(law::kComparisonInIdeal, qs.ideal.contains(coords), [&] { return kahler::to_string(e); });
      const Integer d = kahler::abelian_order(spec.ring(), e.annihilator);
      if (d != 0) {
        out.laws.record(law::kComparisonAnnihilators, q.in_square(v.scaled(d), w), [&] { return kahler::to_string(e); });
      }
      gens.push_back(coords);
    }
    IntegerMatrix rel(qs.ideal.rank());
    bool inside = true;
    for (const auto& g : gens) {
      auto cc = qs.ideal.coordinates(g);
      if (!cc) {
        inside = false;
        break;
      }
      rel.add_row(std::move(*cc));
    }
    out.laws.record(law::kComparisonSurjective, inside && cokernel(rel).is_trivial(),
                    [&] { return "weight " + std::to_string(w); });
  }

  const auto a_basis = full_basis(spec);
  for (const auto& e : omega.elements()) {
    const kahler::OmegaElement ew = e.element(spec);
    const DPElement pe = psi(e);
    for (const auto& mu : a_basis) {
      if (e.weight + mu.weight(spec) > N) continue;
      const DPElement a = DPElement::monomial(spec, mu);
      out.laws.record(law::kComparisonALinear, congruent(psi_of(ew.acted(a)), cp.embed_left(a) * pe),
                      [&] { return monomial_to_string(mu) + " . " + kahler::to_string(e); });
    }
    for (unsigned p : primes_up_to(N)) {
      if (static_cast<std::uint64_t>(p) * e.weight > N) break;
      out.laws.record(law::kComparisonPhi, congruent(psi_of(ew.phi(p)), divided_power(p, pe)),
                      [&] { return "p = " + std::to_string(p) + ", " + kahler::to_string(e); });
    }
  }

  auto delta = [&](const DPElement& a) { return cp.embed_right(a) - cp.embed_left(a); };
  for (const auto& mu : a_basis) {
    const DPElement a = DPElement::monomial(spec, mu);
    out.laws.record(law::kDerivationMatches, congruent(psi_of(kahler::universal_derivation(a)), delta(a)),
                    [&] { return monomial_to_string(mu); });
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> ndist(1, N);
  for (std::size_t t = 0; t < samples; ++t) {
    const DPElement a = random_element(spec, rng);
    const DPElement b = random_element(spec, rng);
    const unsigned n = ndist(rng);
    const DPElement da = delta(a);
    out.laws.record(law::kDeltaLeibniz,
                    congruent(delta(a * b), cp.embed_left(a) * delta(b) + cp.embed_left(b) * da),
                    [&] { return "a = " + to_string(a) + ", b = " + to_string(b); });
    DPElement rhs = phi_n(n, da);
    for (unsigned i = 1; i < n; ++i) rhs += cp.embed_left(divided_power(i, a)) * phi_n(n - i, da);
    out.laws.record(law::kDeltaGamma, in_ideal(da) && congruent(delta(divided_power(n, a)), rhs),
                    [&] { return "n = " + std::to_string(n) + ", a = " + to_string(a); });
  }
  return out;
}

struct IndecomposablesReport {
  AlgebraSpec spec;
  std::vector<SliceComparison> slices;
  bool ok() const {
    return std::all_of(slices.begin(), slices.end(), [](const SliceComparison& s) { return s.equal; });
  }
};

/// A_w / (A^2)_w by Smith normal form of the product span, against the
/// closed form.
inline InvariantFactors indecomposable_slice(const AlgebraSpec& spec, unsigned w) {
  std::vector<DPMonomial> basis = basis_of_weight(spec, w);
  std::sort(basis.begin(), basis.end());
  IntegerMatrix rel(basis.size());
  for (unsigned w1 = 1; 2 * w1 <= w; ++w1) {
    const auto left = basis_of_weight(spec, w1);
    const auto right = basis_of_weight(spec, w - w1);
    for (const auto& a : left) {
      for (const auto& b : right) {
        const DPElement p = DPElement::monomial(spec, a) * DPElement::monomial(spec, b);
        if (!p.is_zero()) rel.add_row(coordinates_in(basis, p));
      }
    }
  }
  return cokernel(rel, spec.ring());
}

inline IndecomposablesReport verify_indecomposables(const AlgebraSpec& spec) {
  IndecomposablesReport out{spec, {}};
  const auto closed = kahler::indecomposables(spec);
  for (unsigned w = 1; w <= spec.truncation(); ++w) {
    SliceComparison c{w, indecomposable_slice(spec, w), closed.slice_invariants(w), false};
    c.equal = c.oracle == c.closed_form;
    out.slices.push_back(std::move(c));
  }
  return out;
}

/// Componentwise DP structure on a product of two algebra models.
template <DPAlgebraModel A, DPAlgebraModel B>
struct DirectProduct {
  using Element = std::pair<typename A::Element, typename B::Element>;

  A first;
  B second;

  DirectProduct(A a, B b) : first(std::move(a)), second(std::move(b)) {
    if (!(RingSpec(first.ring()) == RingSpec(second.ring()))) throw Error("direct_product: algebras over different rings");
  }

  const RingSpec& ring() const { return first.ring(); }
  Element random_element(std::mt19937_64& rng) const {
    auto x = first.random_element(rng);
    return {std::move(x), second.random_element(rng)};
  }
  Element add(const Element& u, const Element& v) const {
    return {first.add(u.first, v.first), second.add(u.second, v.second)};
  }
  Element mul(const Element& u, const Element& v) const {
    return {first.mul(u.first, v.first), second.mul(u.second, v.second)};
  }
  Element scale(const Integer& r, const Element& u) const { return {first.scale(r, u.first), second.scale(r, u.second)}; }
  Element gamma(unsigned n, const Element& u) const { return {first.gamma(n, u.first), second.gamma(n, u.second)}; }
  bool equal(const Element& u, const Element& v) const {
    return first.equal(u.first, v.first) && second.equal(u.second, v.second);
  }
  std::string describe(const Element& u) const {
    return "(" + first.describe(u.first) + ", " + second.describe(u.second) + ")";
  }

  const typename A::Element& project1(const Element& u) const { return u.first; }
  const typename B::Element& project2(const Element& u) const { return u.second; }
};

template <DPAlgebraModel A, DPAlgebraModel B>
DirectProduct<A, B> direct_product(A a, B b) {
  return DirectProduct<A, B>(std::move(a), std::move(b));
}

namespace law {
inline constexpr const char* kUnitalLeft = "mu(a, 0) = a";
inline constexpr const char* kUnitalRight = "mu(0, b) = b";
inline constexpr const char* kMuIsSum = "mu(a, b) = a + b";
inline constexpr const char* kMuMultiplicative = "mu is multiplicative";
inline constexpr const char* kMuDP = "mu commutes with gamma_n";
}  // namespace law

/// For a trivial-product DP algebra M, checks that a candidate binary
/// operation mu: M x M -> M which is unital on both sides and additive is
/// forced to be the sum, and that the sum is a morphism of DP algebras.
template <DPAlgebraModel M, class Mu>
Report check_unital_product_collapse(const M& alg, Mu&& mu, std::size_t samples, std::uint64_t seed,
                                     unsigned max_exponent) {
  Report report;
  for (const char* l : {law::kUnitalLeft, law::kUnitalRight, law::kMuIsSum, law::kMuMultiplicative, law::kMuDP}) {
    report.entry(l);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> ndist(1, max_exponent);
  const auto zero = alg.scale(0, alg.random_element(rng));
  for (std::size_t s = 0; s < samples; ++s) {
    const auto a = alg.random_element(rng);
    const auto b = alg.random_element(rng);
    const auto c = alg.random_element(rng);
    const auto d = alg.random_element(rng);
    const unsigned n = ndist(rng);
    report.record(law::kUnitalLeft, alg.equal(mu(a, zero), a), [&] { return alg.describe(a); });
    report.record(law::kUnitalRight, alg.equal(mu(zero, b), b), [&] { return alg.describe(b); });
    report.record(law::kMuIsSum, alg.equal(mu(a, b), alg.add(a, b)),
                  [&] { return alg.describe(a) + ", " + alg.describe(b); });
    report.record(law::kMuMultiplicative, alg.equal(mu(alg.mul(a, c), alg.mul(b, d)), alg.mul(mu(a, b), mu(c, d))),
                  [&] { return alg.describe(a) + ", " + alg.describe(b); });
    report.record(law::kMuDP, alg.equal(mu(alg.gamma(n, a), alg.gamma(n, b)), alg.gamma(n, mu(a, b))),
                  [&] { return "n = " + std::to_string(n) + ", " + alg.describe(a) + ", " + alg.describe(b); });
  }
  return report;
}

}  // namespace dpalg::oracle
