/// @file linalg.hpp
/// @brief Exact integer linear algebra: Hermite and Smith normal forms,
///        integer kernels, lattice membership and cokernel invariants.
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dpalg/coeff.hpp"

namespace dpalg::oracle {

using Row = std::vector<Integer>;

/// Dense integer matrix stored by rows, with optional labels.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  explicit IntegerMatrix(std::size_t cols) : cols_(cols) {}
  IntegerMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, Row(cols, 0)) {}
  IntegerMatrix(std::vector<Row> rows, std::size_t cols) : cols_(cols), rows_(std::move(rows)) {
    for (const auto& r : rows_) {
      if (r.size() != cols_) throw Error("IntegerMatrix: ragged rows");
    }
  }
  static IntegerMatrix from_rows(std::vector<Row> rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    return IntegerMatrix(std::move(rows), c);
  }
  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t col_count() const { return cols_; }
  Integer& operator()(std::size_t i, std::size_t j) { return rows_[i][j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<Row>& rows() const { return rows_; }

  friend bool operator==(const IntegerMatrix&, const IntegerMatrix&) = default;
  const Row& row(std::size_t i) const { return rows_[i]; }

  void add_row(Row r) {
    if (r.size() != cols_) throw Error("IntegerMatrix: row length mismatch");
    rows_.push_back(std::move(r));
  }

  IntegerMatrix transposed() const {
    IntegerMatrix t(cols_, rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = rows_[i][j];
    return t;
  }

  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

 private:
  std::size_t cols_ = 0;
  std::vector<Row> rows_;
};

namespace detail {

inline bool is_zero_row(const Row& r) {
  return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

inline void axpy(Row& y, const Integer& a, const Row& x) {
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (x[k] != 0) y[k] += a * x[k];
  }
}

/// Replaces (r, s) by a unimodular combination so that r[col] becomes
/// gcd(r[col], s[col]) and s[col] becomes 0.
inline void gcd_combine_rows(Row& r, Row& s, std::size_t col) {
  const Integer a = r[col], b = s[col];
  if (b == 0) return;
  // Plain elimination when a | b; gcdext would swap the rows when |a| = |b|.
  if (a != 0 && mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
    axpy(s, -(b / a), r);
    return;
  }
  Integer g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  const Integer ag = a / g, bg = b / g;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const Integer rk = r[k], sk = s[k];
    r[k] = x * rk + y * sk;
    s[k] = ag * sk - bg * rk;
  }
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

/// Row-echelon elimination over the first `limit` columns; returns the
/// number of pivot rows, which are moved to the front. Rows past the
/// returned index are zero in those columns.
inline std::size_t echelonize(std::vector<Row>& rows, std::size_t limit, std::vector<std::size_t>* pivots) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < limit && r < rows.size(); ++col) {
    std::size_t piv = rows.size();
    for (std::size_t i = r; i < rows.size(); ++i) {
      if (rows[i][col] != 0 && (piv == rows.size() || abs(rows[i][col]) < abs(rows[piv][col]))) piv = i;
    }
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) gcd_combine_rows(rows[r], rows[i], col);
    if (rows[r][col] < 0) {
      for (auto& x : rows[r]) x = -x;
    }
    for (std::size_t k = 0; k < r; ++k) {
      if (rows[k][col] != 0) axpy(rows[k], -floor_div(rows[k][col], rows[r][col]), rows[r]);
    }
    if (pivots) pivots->push_back(col);
    ++r;
  }
  return r;
}

}  // namespace detail

/// Hermite normal form of the row span: echelon rows with positive pivots and
/// entries above each pivot reduced into [0, pivot). Zero rows are dropped.
inline IntegerMatrix hermite_normal_form(const IntegerMatrix& m) {
  std::vector<Row> rows = m.rows();
  const std::size_t r = detail::echelonize(rows, m.col_count(), nullptr);
  rows.resize(r);
  return IntegerMatrix(std::move(rows), m.col_count());
}

/// Basis (in Hermite form) of { v in Z^n : F v = 0 } for F with n columns.
inline IntegerMatrix integer_kernel(const IntegerMatrix& f) {
  const std::size_t k = f.row_count(), n = f.col_count();
  std::vector<Row> aug(n, Row(k + n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) aug[j][i] = f(i, j);
    aug[j][k + j] = 1;
  }
  const std::size_t r = detail::echelonize(aug, k, nullptr);
  std::vector<Row> kernel;
  for (std::size_t j = r; j < n; ++j) kernel.emplace_back(aug[j].begin() + static_cast<std::ptrdiff_t>(k), aug[j].end());
  return hermite_normal_form(IntegerMatrix(std::move(kernel), n));
}

/// A sublattice of Z^n held in Hermite normal form.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::size_t dim) : dim_(dim) {}
  Lattice(const std::vector<Row>& generators, std::size_t dim) : dim_(dim) {
    rows_ = generators;
    detail::echelonize(rows_, dim_, &pivots_);
    rows_.resize(pivots_.size());
  }

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Row>& basis() const { return rows_; }

  /// Coordinates of v in the Hermite basis, or nullopt when v is outside.
  std::optional<Row> coordinates(Row v) const {
    if (v.size() != dim_) throw Error("Lattice: vector dimension mismatch");
    Row coords(rows_.size(), 0);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Integer& p = rows_[i][pivots_[i]];
      const Integer& x = v[pivots_[i]];
      if (x == 0) continue;
      if (!mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) return std::nullopt;
      coords[i] = x / p;
      detail::axpy(v, -coords[i], rows_[i]);
    }
    if (!detail::is_zero_row(v)) return std::nullopt;
    return coords;
  }

  bool contains(const Row& v) const { return coordinates(v).has_value(); }

 private:
  std::size_t dim_ = 0;
  std::vector<Row> rows_;
  std::vector<std::size_t> pivots_;
};

/// Turns any diagonal into the divisibility chain d_1 | d_2 | ... via
/// (a, b) -> (gcd, lcm); zeros (free summands) end up last.
inline std::vector<Integer> normalize_diagonal(std::vector<Integer> d) {
  for (auto& x : d) x = abs(x);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i] == 0 && d[j] == 0) continue;
      const Integer g = gcd(d[i], d[j]);
      Integer l = 0;
      if (d[i] != 0 && d[j] != 0) l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  return d;
}

/// Diagonal of the Smith normal form: min(rows, cols) entries forming a
/// divisibility chain, zeros last.
inline std::vector<Integer> smith_normal_form(const IntegerMatrix& m) {
  std::vector<Row> a = m.rows();
  const std::size_t nr = a.size(), nc = m.col_count();
  const std::size_t n = std::min(nr, nc);
  std::vector<Integer> diag;
  for (std::size_t t = 0; t < n; ++t) {
    // pivot: smallest nonzero magnitude in the remaining block
    std::size_t pi = nr, pj = nc;
    for (std::size_t i = t; i < nr; ++i)
      for (std::size_t j = t; j < nc; ++j)
        if (a[i][j] != 0 && (pi == nr || abs(a[i][j]) < abs(a[pi][pj]))) {
          pi = i;
          pj = j;
        }
    if (pi == nr) break;
    std::swap(a[t], a[pi]);
    for (auto& row : a) std::swap(row[t], row[pj]);
    for (;;) {
      for (std::size_t i = t + 1; i < nr; ++i) detail::gcd_combine_rows(a[t], a[i], t);
      bool row_clear = true;
      for (std::size_t j = t + 1; j < nc; ++j) {
        if (a[t][j] == 0) continue;
        // column combination, done on the transposed pair of entries
        const Integer x0 = a[t][t], y0 = a[t][j];
        if (mpz_divisible_p(y0.get_mpz_t(), x0.get_mpz_t())) {
          const Integer q = y0 / x0;
          for (std::size_t i = t; i < nr; ++i) a[i][j] -= q * a[i][t];
          continue;
        }
        Integer g, x, y;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), x0.get_mpz_t(), y0.get_mpz_t());
        const Integer ag = x0 / g, bg = y0 / g;
        for (std::size_t i = t; i < nr; ++i) {
          const Integer ct = a[i][t], cj = a[i][j];
          a[i][t] = x * ct + y * cj;
          a[i][j] = ag * cj - bg * ct;
        }
        row_clear = false;
      }
      if (row_clear) break;
      bool col_clear = true;
      for (std::size_t i = t + 1; i < nr; ++i) {
        if (a[i][t] != 0) {
          col_clear = false;
          break;
        }
      }
      if (col_clear) break;
    }
    diag.push_back(a[t][t]);
  }
  diag.resize(n, 0);
  return normalize_diagonal(std::move(diag));
}

/// Cyclic decomposition of a finitely generated abelian group as an invariant
/// factor chain; 0 stands for a free summand Z and sorts last. Unit factors
/// are omitted.
struct InvariantFactors {
  std::vector<Integer> factors;

  static InvariantFactors from_cyclic_orders(std::vector<Integer> orders) {
    InvariantFactors out;
    for (auto& d : normalize_diagonal(std::move(orders))) {
      if (d != 1) out.factors.push_back(d);
    }
    return out;
  }

  std::size_t free_rank() const {
    return static_cast<std::size_t>(std::count(factors.begin(), factors.end(), Integer(0)));
  }
  bool is_trivial() const { return factors.empty(); }

  friend bool operator==(const InvariantFactors&, const InvariantFactors&) = default;
};

inline std::string to_string(const InvariantFactors& f) {
  std::string out = "[";
  for (std::size_t i = 0; i < f.factors.size(); ++i) out += (i ? ", " : "") + f.factors[i].get_str();
  return out + "]";
}

/// Z^cols / (row span of `relations`).
inline InvariantFactors cokernel(const IntegerMatrix& relations) {
  auto d = smith_normal_form(relations);
  d.resize(relations.col_count(), 0);
  InvariantFactors out;
  for (auto& x : d) {
    if (x != 1) out.factors.push_back(x);
  }
  return out;
}

/// The same quotient read over Z/m: m * identity rows are adjoined first.
inline InvariantFactors cokernel(IntegerMatrix relations, const RingSpec& ring) {
  if (!ring.is_integers()) {
    for (std::size_t j = 0; j < relations.col_count(); ++j) {
      Row r(relations.col_count(), 0);
      r[j] = ring.modulus();
      relations.add_row(std::move(r));
    }
  }
  return cokernel(relations);
}

/// Fraction-free (Bareiss) determinant of a square matrix.
inline Integer determinant(const IntegerMatrix& m) {
  const std::size_t n = m.row_count();
  if (n != m.col_count()) throw Error("determinant of a non-square matrix");
  if (n == 0) return 1;
  std::vector<Row> a = m.rows();
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
    }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace dpalg::oracle
