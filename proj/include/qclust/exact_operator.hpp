#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/rational.hpp"

namespace qclust {

/// Dense square matrix of exact rationals acting on (C^d)^{\otimes N} in the
/// computational basis. All operators in this library are real, so Hermitian
/// and symmetric coincide.
class ExactOperator {
 public:
  ExactOperator() = default;
  explicit ExactOperator(std::size_t dim) : dim_(dim), a_(dim * dim) {}

  static ExactOperator identity(std::size_t dim) {
    ExactOperator m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t dim() const { return dim_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& q) { return sgn(q) == 0; });
  }

  std::size_t nonzeros() const {
    return static_cast<std::size_t>(
        std::count_if(a_.begin(), a_.end(), [](const Rational& q) { return sgn(q) != 0; }));
  }

  bool is_hermitian() const {
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = i + 1; j < dim_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  Rational trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  ExactOperator transpose() const {
    ExactOperator t(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  ExactOperator& operator+=(const ExactOperator& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k)
      if (sgn(o.a_[k]) != 0) a_[k] += o.a_[k];
    return *this;
  }

  ExactOperator& operator-=(const ExactOperator& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k)
      if (sgn(o.a_[k]) != 0) a_[k] -= o.a_[k];
    return *this;
  }

  ExactOperator& operator*=(const Rational& s) {
    for (auto& q : a_)
      if (sgn(q) != 0) q *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(const Rational& s, const ExactOperator& o) {
    check_same(o);
    if (sgn(s) == 0) return;
    Rational tmp;
    for (std::size_t k = 0; k < a_.size(); ++k) {
      if (sgn(o.a_[k]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), s.get_mpq_t(), o.a_[k].get_mpq_t());
      a_[k] += tmp;
    }
  }

  friend ExactOperator operator+(ExactOperator a, const ExactOperator& b) { return a += b; }
  friend ExactOperator operator-(ExactOperator a, const ExactOperator& b) { return a -= b; }
  friend ExactOperator operator*(ExactOperator a, const Rational& s) { return a *= s; }
  friend ExactOperator operator*(const Rational& s, ExactOperator a) { return a *= s; }

  /// Product that skips structural zeros; cost scales with the block
  /// structure rather than dim^3.
  friend ExactOperator operator*(const ExactOperator& a, const ExactOperator& b) {
    a.check_same(b);
    const std::size_t n = a.dim_;
    auto rows_b = b.row_nonzeros();
    ExactOperator c(n);
    Rational tmp;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Rational& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j : rows_b[k]) {
          mpq_mul(tmp.get_mpq_t(), aik.get_mpq_t(), b(k, j).get_mpq_t());
          mpq_add(c(i, j).get_mpq_t(), c(i, j).get_mpq_t(), tmp.get_mpq_t());
        }
      }
    }
    return c;
  }

  friend bool operator==(const ExactOperator& a, const ExactOperator& b) {
    return a.dim_ == b.dim_ && a.a_ == b.a_;
  }

  /// Returns U A U^T for the basis permutation U|i> = |image[i]>.
  ExactOperator conjugated(std::span<const std::size_t> image) const {
    require(image.size() == dim_, "basis permutation has wrong length");
    ExactOperator r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) {
        const Rational& q = (*this)(i, j);
        if (sgn(q) != 0) r(image[i], image[j]) = q;
      }
    return r;
  }

  /// Column indices of nonzero entries, per row.
  std::vector<std::vector<std::size_t>> row_nonzeros() const {
    std::vector<std::vector<std::size_t>> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if (sgn((*this)(i, j)) != 0) rows[i].push_back(j);
    return rows;
  }

  Eigen::MatrixXd to_eigen() const {
    Eigen::MatrixXd m(dim_, dim_);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j).get_d();
    return m;
  }

  /// Index blocks on which the operator is block diagonal: i and j share a
  /// block whenever entry (i,j) is nonzero. Indices whose row and column are
  /// zero are dropped.
  std::vector<std::vector<std::size_t>> connected_blocks() const {
    std::vector<std::size_t> parent(dim_);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::vector<bool> used(dim_, false);
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        if (sgn((*this)(i, j)) != 0) {
          used[i] = used[j] = true;
          parent[find(i)] = find(j);
        }
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<long> slot(dim_, -1);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (!used[i]) continue;
      std::size_t r = find(i);
      if (slot[r] < 0) {
        slot[r] = static_cast<long>(blocks.size());
        blocks.emplace_back();
      }
      blocks[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return blocks;
  }

 private:
  void check_same(const ExactOperator& o) const {
    require(o.dim_ == dim_, "operator dimension mismatch");
  }

  std::size_t dim_ = 0;
  std::vector<Rational> a_;
};

/// tr(AB) without forming the product.
inline Rational trace_product(const ExactOperator& a, const ExactOperator& b) {
  require(a.dim() == b.dim(), "operator dimension mismatch");
  Rational t = 0, tmp;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Rational& x = a(i, j);
      if (sgn(x) == 0) continue;
      const Rational& y = b(j, i);
      if (sgn(y) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), x.get_mpq_t(), y.get_mpq_t());
      t += tmp;
    }
  return t;
}

namespace detail {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Row-reduces m in place; returns pivot column indices.
inline std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  Rational f, tmp;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && sgn(m[p][c]) == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (sgn(m[i][c]) == 0) continue;
      f = m[i][c] / m[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        if (sgn(m[r][j]) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), m[r][j].get_mpq_t());
        m[i][j] -= tmp;
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Exact inverse of a nonsingular square matrix (Gauss-Jordan).
inline RationalMatrix invert(RationalMatrix m) {
  const std::size_t n = m.size();
  RationalMatrix inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m[p][c]) == 0) ++p;
    if (p == n) throw NumericError("singular matrix in exact inverse");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = m[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      m[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

inline RationalMatrix extract(const ExactOperator& a, const std::vector<std::size_t>& idx) {
  RationalMatrix m(idx.size(), std::vector<Rational>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m[i][j] = a(idx[i], idx[j]);
  return m;
}

}  // namespace detail

/// Exact rank by Gaussian elimination on each diagonal block.
inline std::size_t exact_rank(const ExactOperator& a) {
  std::size_t rank = 0;
  for (const auto& block : a.connected_blocks()) {
    auto m = detail::extract(a, block);
    rank += detail::row_reduce(m).size();
  }
  return rank;
}

/// Exact orthogonal projector onto the column space of a.
inline ExactOperator column_space_projector(const ExactOperator& a) {
  ExactOperator p(a.dim());
  for (const auto& block : a.connected_blocks()) {
    auto m = detail::extract(a, block);
    auto reduced = m;
    auto pivots = detail::row_reduce(reduced);
    if (pivots.empty()) continue;
    const std::size_t n = block.size(), r = pivots.size();
    // B = columns of m at pivot positions (n x r); P = B (B^T B)^{-1} B^T.
    detail::RationalMatrix gram(r, std::vector<Rational>(r));
    for (std::size_t x = 0; x < r; ++x)
      for (std::size_t y = x; y < r; ++y) {
        Rational s = 0;
        for (std::size_t k = 0; k < n; ++k) s += m[k][pivots[x]] * m[k][pivots[y]];
        gram[x][y] = s;
        gram[y][x] = s;
      }
    auto ginv = detail::invert(gram);
    // C = B * ginv (n x r)
    detail::RationalMatrix c(n, std::vector<Rational>(r));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t y = 0; y < r; ++y) {
        Rational s = 0;
        for (std::size_t x = 0; x < r; ++x) s += m[k][pivots[x]] * ginv[x][y];
        c[k][y] = s;
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Rational s = 0;
        for (std::size_t y = 0; y < r; ++y) s += c[i][y] * m[j][pivots[y]];
        p(block[i], block[j]) = s;
      }
  }
  return p;
}

}  // namespace qclust
