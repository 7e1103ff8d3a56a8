#pragma once

// Clusterings of N systems into two groups, their canonical (n, sigma) labels,
// and the effective states obtained by averaging |Phi_x><Phi_x| over pairs of
// Haar-random pure states.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "qclust/basis.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact_operator.hpp"
#include "qclust/rational.hpp"
#include "qclust/rep_core.hpp"

namespace qclust {

inline constexpr int kMaxClusteringN = 20;

/// Binary labeling x of N systems.
struct ClusterString {
  std::vector<std::uint8_t> bits;

  static ClusterString parse(const std::string& s) {
    ClusterString x;
    for (char ch : s) {
      require(ch == '0' || ch == '1', "cluster strings use only '0' and '1'");
      x.bits.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    require(!x.bits.empty(), "empty cluster string");
    return x;
  }

  int size() const { return static_cast<int>(bits.size()); }
  int zeros() const { return static_cast<int>(std::count(bits.begin(), bits.end(), 0)); }

  ClusterString complement() const {
    ClusterString c = *this;
    for (auto& b : c.bits) b ^= 1u;
    return c;
  }

  /// Representative with #0 <= #1; ties go to the lexicographically smaller.
  ClusterString canonical() const {
    const int z = zeros(), o = size() - z;
    if (z < o) return *this;
    ClusterString c = complement();
    if (z > o) return c;
    return bits <= c.bits ? *this : c;
  }

  std::string str() const {
    std::string s;
    for (auto b : bits) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  friend bool operator==(const ClusterString&, const ClusterString&) = default;
  friend auto operator<=>(const ClusterString& a, const ClusterString& b) { return a.bits <=> b.bits; }
};

/// sigma acting on strings: (sigma x)_{sigma(k)} = x_k.
inline ClusterString apply(const Permutation& sigma, const ClusterString& x) {
  require(sigma.size() == x.size(), "permutation/string length mismatch");
  ClusterString y;
  y.bits.resize(x.bits.size());
  for (int k = 0; k < x.size(); ++k) y.bits[static_cast<std::size_t>(sigma(k))] = x.bits[static_cast<std::size_t>(k)];
  return y;
}

/// Reference string 0^n 1^{N-n}.
inline ClusterString reference_string(int N, int n) {
  ClusterString x;
  x.bits.assign(static_cast<std::size_t>(N), 1);
  std::fill_n(x.bits.begin(), n, 0);
  return x;
}

/// Equivalence-class size b_n: 2(n!)^2 if n = N - n, else n!(N-n)!.
inline BigInt class_size(int N, int n) {
  BigInt a = factorial(static_cast<unsigned long>(n)), b = factorial(static_cast<unsigned long>(N - n));
  BigInt r = a * b;
  if (2 * n == N) r *= 2;
  return r;
}

/// A clustering in canonical form. sigma is the lexicographically smallest
/// image array sending reference_string(N, n) to `canonical`.
struct Clustering {
  int N = 0;
  int n = 0;
  Permutation sigma;
  ClusterString canonical;

  BigInt class_size() const { return qclust::class_size(N, n); }
  std::string str() const { return canonical.str(); }

  friend bool operator==(const Clustering& a, const Clustering& b) { return a.canonical == b.canonical; }
};

inline Clustering string_to_clustering(const ClusterString& x) {
  require(x.size() >= 1, "cluster string must have length >= 1");
  Clustering c;
  c.N = x.size();
  c.canonical = x.canonical();
  c.n = c.canonical.zeros();
  std::vector<int> img;
  img.reserve(static_cast<std::size_t>(c.N));
  for (int k = 0; k < c.N; ++k)
    if (c.canonical.bits[static_cast<std::size_t>(k)] == 0) img.push_back(k);
  for (int k = 0; k < c.N; ++k)
    if (c.canonical.bits[static_cast<std::size_t>(k)] == 1) img.push_back(k);
  c.sigma = Permutation(std::move(img));
  return c;
}

inline Clustering reference_clustering(int N, int n) {
  require(n >= 0 && 2 * n <= N, "need 0 <= n <= N/2");
  return string_to_clustering(reference_string(N, n));
}

/// All 2^{N-1} clusterings, ordered by n and then by canonical string.
inline std::vector<Clustering> enumerate_clusterings(int N) {
  require(N >= 1, "N must be >= 1");
  if (N > kMaxClusteringN)
    throw GuardError("clustering enumeration limited to N <= " + std::to_string(kMaxClusteringN));
  std::vector<Clustering> out;
  out.reserve(std::size_t{1} << (N - 1));
  ClusterString x;
  x.bits.resize(static_cast<std::size_t>(N));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << N); ++m) {
    for (int k = 0; k < N; ++k) x.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((m >> (N - 1 - k)) & 1u);
    if (x.canonical() == x) out.push_back(string_to_clustering(x));
  }
  std::sort(out.begin(), out.end(), [](const Clustering& a, const Clustering& b) {
    return a.n != b.n ? a.n < b.n : a.canonical < b.canonical;
  });
  return out;
}

/// Kronecker product A (x) B.
inline ExactOperator kron(const ExactOperator& a, const ExactOperator& b) {
  const std::size_t da = a.dim(), db = b.dim();
  ExactOperator r(da * db);
  for (std::size_t i1 = 0; i1 < da; ++i1)
    for (std::size_t j1 = 0; j1 < da; ++j1) {
      const Rational& x = a(i1, j1);
      if (sgn(x) == 0) continue;
      for (std::size_t i2 = 0; i2 < db; ++i2)
        for (std::size_t j2 = 0; j2 < db; ++j2) {
          const Rational& y = b(i2, j2);
          if (sgn(y) != 0) r(i1 * db + i2, j1 * db + j2) = x * y;
        }
    }
  return r;
}

/// c_n = 1 / (D^sym_n D^sym_{N-n}).
inline Rational state_normalization(int N, int n, int d) {
  return make_rational(BigInt(1), dim_symmetric(n, d) * dim_symmetric(N - n, d));
}

/// rho_{n,sigma} = c_n U_sigma (P^sym_n (x) P^sym_{N-n}) U_sigma^T.
inline ExactOperator effective_state(const Clustering& c, int d, std::int64_t max_dim = kDefaultMaxDim) {
  TensorBasis basis(c.N, d, max_dim);
  const int n = c.n, nbar = c.N - c.n;
  ExactOperator block = n == 0 ? symmetric_projector(nbar, d, max_dim)
                               : kron(symmetric_projector(n, d, max_dim), symmetric_projector(nbar, d, max_dim));
  block *= state_normalization(c.N, n, d);
  if (c.sigma.is_identity()) return block;
  return block.conjugated(basis.permutation_image(c.sigma.image()));
}

/// Exact projector onto supp(rho_{n,sigma}) intersected with H_lambda, i.e.
/// the computational-basis form of 1_(lambda) (x) Omega^{n,sigma}_{lambda}.
inline ExactOperator omega_projector(const Clustering& c, const Partition& lambda, int d,
                                     std::int64_t max_dim = kDefaultMaxDim) {
  TensorBasis basis(c.N, d, max_dim);
  const auto ref = reference_clustering(c.N, c.n);
  const ExactOperator p = isotypic_projector(lambda, d, c.N, max_dim);
  const ExactOperator rho = effective_state(ref, d, max_dim);
  ExactOperator omega = column_space_projector(p * rho * p);
  if (c.sigma.is_identity()) return omega;
  return omega.conjugated(basis.permutation_image(c.sigma.image()));
}

}  // namespace qclust
