#include <gtest/gtest.h>

#include <random>

#include "dpalg/linalg.hpp"

using namespace dpalg;
using namespace dpalg::oracle;

namespace {

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

Integer product(const std::vector<Integer>& v) {
  Integer p = 1;
  for (const auto& x : v) p *= x;
  return p;
}

}  // namespace

TEST(Snf, SmallExamples) {
  EXPECT_EQ(smith_normal_form(IntegerMatrix::from_rows({{2, -2}})), (std::vector<Integer>{2}));
  EXPECT_EQ(smith_normal_form(IntegerMatrix::identity(3)), (std::vector<Integer>{1, 1, 1}));
  EXPECT_EQ(smith_normal_form(IntegerMatrix::from_rows({{2, 0}, {0, 3}})), (std::vector<Integer>{1, 6}));
  EXPECT_EQ(cokernel(IntegerMatrix::from_rows({{2, 0}, {0, 3}})).factors, (std::vector<Integer>{6}));
  EXPECT_EQ(cokernel(IntegerMatrix(2)).factors, (std::vector<Integer>{0, 0}));
}

TEST(Snf, ProductEqualsDeterminant) {
  std::mt19937_64 rng(42);
  int nonsingular = 0;
  for (int t = 0; t < 200; ++t) {
    const IntegerMatrix m = random_matrix(rng, 4, 4, 9);
    const Integer det = determinant(m);
    const auto d = smith_normal_form(m);
    if (det == 0) {
      EXPECT_EQ(d.back(), 0);
      continue;
    }
    ++nonsingular;
    EXPECT_EQ(product(d), abs(det));
    for (std::size_t i = 1; i < d.size(); ++i) EXPECT_TRUE(d[i] % d[i - 1] == 0);
  }
  EXPECT_GT(nonsingular, 150);
}

TEST(Snf, RectangularDivisibility) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto d = smith_normal_form(random_matrix(rng, 3, 5, 6));
    for (std::size_t i = 1; i < d.size(); ++i) {
      if (d[i - 1] != 0) {
        EXPECT_TRUE(d[i] % d[i - 1] == 0);
      } else {
        EXPECT_EQ(d[i], 0);
      }
    }
  }
}

TEST(Kernel, IsExactAndSaturated) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const IntegerMatrix f = random_matrix(rng, 2, 5, 4);
    const IntegerMatrix k = integer_kernel(f);
    for (const auto& v : k.rows()) {
      for (std::size_t i = 0; i < 2; ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < 5; ++j) s += f(i, j) * v[j];
        EXPECT_EQ(s, 0);
      }
    }
    // rank-nullity and saturation: Z^5 / ker is torsion-free
    const auto d = smith_normal_form(f);
    std::size_t rank = 0;
    for (const auto& x : d) rank += x != 0;
    EXPECT_EQ(k.row_count(), 5 - rank);
    for (const auto& x : cokernel(k).factors) EXPECT_EQ(x, 0);
  }
}

TEST(Lattice, Membership) {
  const Lattice l({{2, 0, 0}, {0, 3, 3}}, 3);
  EXPECT_TRUE(l.contains({4, 6, 6}));
  EXPECT_FALSE(l.contains({1, 0, 0}));
  EXPECT_FALSE(l.contains({0, 3, 0}));
  EXPECT_EQ(l.rank(), 2u);
}

TEST(InvariantFactorsTest, FromOrders) {
  const auto f = InvariantFactors::from_cyclic_orders({2, 3, 0, 1});
  EXPECT_EQ(f.factors, (std::vector<Integer>{6, 0}));
  EXPECT_EQ(f.free_rank(), 1u);
  EXPECT_EQ(to_string(f), "[6, 0]");
  const auto g = cokernel(IntegerMatrix::from_rows({{2, 0}}), RingSpec::integers_mod(4));
  EXPECT_EQ(g.factors, (std::vector<Integer>{2, 4}));
}
