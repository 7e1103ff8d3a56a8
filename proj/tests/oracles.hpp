#pragma once

// Independent reference computations used by the unit and acceptance tests.
// They share only value types (Rational, ClusterString, Partition) with the
// library and recompute everything else from first principles.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qclust/qclust.hpp"

namespace oracle {

using qclust::BigInt;
using qclust::ExactOperator;
using qclust::Rational;

inline BigInt fact(int n) {
  BigInt r = 1;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

inline BigInt choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  return fact(n) / (fact(k) * fact(n - k));
}

inline BigInt power(int b, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

inline std::vector<int> digits_of(std::size_t index, int N, int d) {
  std::vector<int> dg(static_cast<std::size_t>(N));
  for (int k = N - 1; k >= 0; --k) {
    dg[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(d));
    index /= static_cast<std::size_t>(d);
  }
  return dg;
}

inline std::size_t index_of(const std::vector<int>& dg, int d) {
  std::size_t i = 0;
  for (int v : dg) i = i * static_cast<std::size_t>(d) + static_cast<std::size_t>(v);
  return i;
}

/// (1/k!) sum over all permutations of the sites, by explicit enumeration.
inline ExactOperator symmetrizer(int k, int d) {
  const std::size_t dim = static_cast<std::size_t>(power(d, k).get_ui());
  std::vector<std::vector<long>> count(dim, std::vector<long>(dim, 0));
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (std::size_t i = 0; i < dim; ++i) {
      const auto a = digits_of(i, k, d);
      std::vector<int> b(a.size());
      for (int s = 0; s < k; ++s) b[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] = a[static_cast<std::size_t>(s)];
      ++count[index_of(b, d)][i];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  ExactOperator p(dim);
  const BigInt kf = fact(k);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (count[i][j]) p(i, j) = Rational(BigInt(count[i][j]), kf);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) p(i, j).canonicalize();
  return p;
}

/// Effective state of labeling x: the normalized product of the symmetrizers
/// on the 0-labeled and the 1-labeled sites, by explicit permutation sums.
inline ExactOperator effective_state(const qclust::ClusterString& x, int d) {
  const int N = x.size();
  std::vector<int> zeros, ones;
  for (int k = 0; k < N; ++k) (x.bits[static_cast<std::size_t>(k)] ? ones : zeros).push_back(k);
  const std::size_t dim = static_cast<std::size_t>(power(d, N).get_ui());
  std::vector<std::vector<long>> count(dim, std::vector<long>(dim, 0));
  std::vector<int> pa(zeros.size()), pb(ones.size());
  std::iota(pa.begin(), pa.end(), 0);
  do {
    std::iota(pb.begin(), pb.end(), 0);
    do {
      for (std::size_t i = 0; i < dim; ++i) {
        const auto a = digits_of(i, N, d);
        auto b = a;
        for (std::size_t s = 0; s < zeros.size(); ++s) b[static_cast<std::size_t>(zeros[static_cast<std::size_t>(pa[s])])] = a[static_cast<std::size_t>(zeros[s])];
        for (std::size_t s = 0; s < ones.size(); ++s) b[static_cast<std::size_t>(ones[static_cast<std::size_t>(pb[s])])] = a[static_cast<std::size_t>(ones[s])];
        ++count[index_of(b, d)][i];
      }
    } while (std::next_permutation(pb.begin(), pb.end()));
  } while (std::next_permutation(pa.begin(), pa.end()));
  const int n0 = static_cast<int>(zeros.size()), n1 = static_cast<int>(ones.size());
  // trace of each symmetrizer is the number of multisets C(k+d-1, d-1)
  const BigInt norm = fact(n0) * fact(n1) * choose(n0 + d - 1, d - 1) * choose(n1 + d - 1, d - 1);
  ExactOperator rho(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (count[i][j]) {
        rho(i, j) = Rational(BigInt(count[i][j]), norm);
        rho(i, j).canonicalize();
      }
  return rho;
}

/// P_s = 2^{1-N} sum_x tr(rho_x E_x) with states built by the oracle.
inline Rational quantum_success(const qclust::Povm& p) {
  Rational s = 0;
  for (const auto& c : p.clusterings()) s += qclust::trace_product(effective_state(c.canonical, p.d()), p.element(c));
  return s / Rational(power(2, p.N() - 1));
}

/// Number of standard Young tableaux by removing corners recursively.
inline BigInt syt_count(std::vector<int> shape) {
  while (!shape.empty() && shape.back() == 0) shape.pop_back();
  if (shape.empty()) return 1;
  BigInt total = 0;
  for (std::size_t r = 0; r < shape.size(); ++r) {
    const bool corner = r + 1 == shape.size() || shape[r + 1] < shape[r];
    if (!corner) continue;
    auto s = shape;
    --s[r];
    total += syt_count(s);
  }
  return total;
}

/// Number of semistandard tableaux of the shape with entries 0..d-1, by
/// filling boxes row by row.
inline BigInt ssyt_count(const std::vector<int>& shape, int d) {
  std::vector<std::vector<int>> t;
  for (int len : shape) t.emplace_back(static_cast<std::size_t>(len), -1);
  BigInt count = 0;
  auto rec = [&](auto&& self, std::size_t r, std::size_t c) -> void {
    if (r == t.size()) {
      ++count;
      return;
    }
    if (c == t[r].size()) {
      self(self, r + 1, 0);
      return;
    }
    const int lo = std::max(c > 0 ? t[r][c - 1] : 0, r > 0 ? t[r - 1][c] + 1 : 0);
    for (int v = lo; v < d; ++v) {
      t[r][c] = v;
      self(self, r, c + 1);
    }
    t[r][c] = -1;
  };
  rec(rec, 0, 0);
  return count;
}

/// Partitions of N into at most r parts by direct recursion.
inline BigInt partition_count(int N, int r, int max_part = -1) {
  if (max_part < 0) max_part = N;
  if (N == 0) return 1;
  if (r == 0) return 0;
  BigInt total = 0;
  for (int p = std::min(N, max_part); p >= 1; --p) total += partition_count(N - p, r - 1, p);
  return total;
}

// ---------------------------------------------------------------------------
// Classical protocols

/// Pr(r, x) = 2^{-N} int dP dQ prod_i (x_i ? Q : P)(r_i), computed from the
/// Dirichlet integral int prod_s p_s^{a_s} = (d-1)! prod a_s! / (d-1+sum a)!.
inline Rational joint_probability(const std::vector<int>& r, const std::vector<int>& x, int d) {
  std::vector<int> a(static_cast<std::size_t>(d), 0), b(static_cast<std::size_t>(d), 0);
  for (std::size_t i = 0; i < r.size(); ++i) ++(x[i] ? b : a)[static_cast<std::size_t>(r[i])];
  auto dirichlet = [&](const std::vector<int>& e) {
    BigInt num = fact(d - 1);
    int tot = 0;
    for (int v : e) {
      num *= fact(v);
      tot += v;
    }
    return Rational(num, fact(d - 1 + tot));
  };
  Rational p = dirichlet(a) * dirichlet(b) / Rational(power(2, static_cast<int>(r.size())));
  p.canonicalize();
  return p;
}

/// 2 sum_r max_x Pr(r, x) over all d^N strings and 2^N labelings.
inline Rational classical_bruteforce(int N, int d) {
  const std::size_t strings = static_cast<std::size_t>(power(d, N).get_ui());
  Rational total = 0;
  std::vector<int> x(static_cast<std::size_t>(N));
  for (std::size_t code = 0; code < strings; ++code) {
    const auto r = digits_of(code, N, d);
    Rational best = 0;
    for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
      for (int k = 0; k < N; ++k) x[static_cast<std::size_t>(k)] = static_cast<int>(mask >> k & 1u);
      const Rational p = joint_probability(r, x, d);
      if (p > best) best = p;
    }
    total += best;
  }
  return 2 * total;
}

/// (8 - 2^{2-N}) / ((N+2)(N+1)).
inline Rational classical_d2(int N) {
  Rational v = (Rational(8) - Rational(4, 1) / Rational(power(2, N))) / Rational((N + 2) * (N + 1));
  v.canonicalize();
  return v;
}

/// Known distributions, d = 2: with t = |p - q| of density 2(1-t),
/// 2^{-N} int_0^1 2(1-t)[(1+t)^N + (1-t)^N] dt expanded term by term.
inline Rational known_classical_d2(int N) {
  Rational s = 0;
  for (int k = 0; k <= N; ++k) {
    const Rational c(choose(N, k));
    // int_0^1 2(1-t) t^k dt = 2/((k+1)(k+2))
    const Rational m(2, (k + 1) * (k + 2));
    s += c * m * (1 + (k % 2 == 0 ? 1 : -1));
  }
  s /= Rational(power(2, N));
  s.canonicalize();
  return s;
}

// ---------------------------------------------------------------------------
// Known quantum states: Beta-function integrals in u

/// int_0^1 (d-1)(1-u)^{d-2} ((1 +- sqrt(1-u))/2)^N du
///   = 2^{-N} sum_k C(N,k) (+-1)^k (d-1) / (d-1+k/2).
inline Rational known_average(int N, int d, bool clustering) {
  Rational s = 0;
  for (int k = 0; k <= N; ++k) {
    const Rational term = Rational(choose(N, k)) * Rational(2 * (d - 1), 2 * (d - 1) + k);
    s += term;
    if (clustering) s += (k % 2 == 0 ? 1 : -1) * term;
  }
  s /= Rational(power(2, N));
  s.canonicalize();
  return s;
}

/// 2 int_0^1 c (d-1)(1-c^2)^{d-2}(1-c)^N dc with (1-c^2)^{d-2} = (1+c)^{d-2}(1-c)^{d-2}
/// and int c^{j+1}(1-c)^m dc = (j+1)! m! / (j+m+2)!.
inline Rational unambiguous_average(int N, int d) {
  const int m = N + d - 2;
  Rational s = 0;
  for (int j = 0; j <= d - 2; ++j) s += Rational(choose(d - 2, j) * fact(j + 1) * fact(m), fact(j + m + 2));
  s *= 2 * (d - 1);
  s.canonicalize();
  return s;
}

}  // namespace oracle
