#pragma once

// Partition combinatorics and the S_N / SU(d) representation machinery used to
// decompose (C^d)^{\otimes N}. Everything here is exact: integers, big
// integers, or rationals.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qclust/basis.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact_operator.hpp"
#include "qclust/rational.hpp"

namespace qclust {

/// Integer partition / Young diagram label. Trailing zeros are stripped so
/// (3,1,0) == (3,1).
class Partition {
 public:
  Partition() = default;
  Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_) require(p >= 0, "partition parts must be nonnegative");
    require(std::is_sorted(parts_.rbegin(), parts_.rend()), "partition parts must be nonincreasing");
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  }

  const std::vector<int>& parts() const { return parts_; }
  int part(std::size_t i) const { return i < parts_.size() ? parts_[i] : 0; }
  int length() const { return static_cast<int>(parts_.size()); }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

  /// Inverse lexicographic order: larger iff the first nonzero difference is
  /// positive.
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    const std::size_t n = std::max(a.parts_.size(), b.parts_.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (auto c = a.part(i) <=> b.part(i); c != 0) return c;
    }
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts_ == b.parts_; }

  /// "(4,0)" style for two-row labels when requested, otherwise "(3,1,1)".
  std::string str(std::size_t min_rows = 1) const {
    std::ostringstream os;
    os << '(';
    const std::size_t n = std::max(parts_.size(), min_rows);
    for (std::size_t i = 0; i < n; ++i) os << (i ? "," : "") << part(i);
    os << ')';
    return os.str();
  }

 private:
  std::vector<int> parts_;
};

/// Bijection on {0..N-1}; image()[k] is where k is sent.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<bool> seen(image_.size(), false);
    for (int v : image_) {
      require(v >= 0 && static_cast<std::size_t>(v) < image_.size() && !seen[static_cast<std::size_t>(v)],
              "permutation image is not a bijection");
      seen[static_cast<std::size_t>(v)] = true;
    }
  }
  static Permutation identity(int N) {
    std::vector<int> img(static_cast<std::size_t>(N));
    std::iota(img.begin(), img.end(), 0);
    return Permutation(std::move(img));
  }
  /// Transposition of 0-based positions i and j.
  static Permutation transposition(int N, int i, int j) {
    auto p = identity(N);
    std::swap(p.image_[static_cast<std::size_t>(i)], p.image_[static_cast<std::size_t>(j)]);
    return p;
  }

  int size() const { return static_cast<int>(image_.size()); }
  const std::vector<int>& image() const { return image_; }
  int operator()(int k) const { return image_[static_cast<std::size_t>(k)]; }

  /// (this * other)(k) = this(other(k)).
  Permutation operator*(const Permutation& other) const {
    require(size() == other.size(), "permutation size mismatch");
    std::vector<int> img(image_.size());
    for (std::size_t k = 0; k < img.size(); ++k) img[k] = image_[static_cast<std::size_t>(other.image_[k])];
    return Permutation(std::move(img));
  }
  Permutation inverse() const {
    std::vector<int> img(image_.size());
    for (std::size_t k = 0; k < img.size(); ++k) img[static_cast<std::size_t>(image_[k])] = static_cast<int>(k);
    return Permutation(std::move(img));
  }
  bool is_identity() const {
    for (std::size_t k = 0; k < image_.size(); ++k)
      if (image_[k] != static_cast<int>(k)) return false;
    return true;
  }
  Partition cycle_type() const {
    std::vector<bool> seen(image_.size(), false);
    std::vector<int> lens;
    for (std::size_t k = 0; k < image_.size(); ++k) {
      if (seen[k]) continue;
      int len = 0;
      for (std::size_t j = k; !seen[j]; j = static_cast<std::size_t>(image_[j])) {
        seen[j] = true;
        ++len;
      }
      lens.push_back(len);
    }
    std::sort(lens.rbegin(), lens.rend());
    return Partition(std::move(lens));
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.image_ <=> b.image_; }

 private:
  std::vector<int> image_;
};

/// All partitions of N with at most max_len parts, in decreasing inverse
/// lexicographic order: (N), (N-1,1), (N-2,2), (N-2,1,1), ...
inline std::vector<Partition> enumerate_partitions(int N, int max_len = -1) {
  require(N >= 0, "N must be nonnegative");
  if (max_len < 0) max_len = N;
  std::vector<Partition> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    if (static_cast<int>(cur.size()) == max_len) return;
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, N, N);
  return out;
}

/// Two-row irreps (N - k, k), k = 0..floor(N/2), ordered by k ascending.
inline std::vector<Partition> enumerate_two_row_irreps(int N) {
  require(N >= 1, "N must be >= 1");
  std::vector<Partition> out;
  for (int k = 0; k <= N / 2; ++k) out.push_back(Partition({N - k, k}));
  return out;
}

/// Number of standard Young tableaux (hook-length formula).
inline BigInt dim_symgroup_irrep(const Partition& lambda) {
  const auto& p = lambda.parts();
  BigInt hooks = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (int j = 0; j < p[i]; ++j) {
      int arm = p[i] - j - 1;
      int leg = 0;
      for (std::size_t r = i + 1; r < p.size() && p[r] > j; ++r) ++leg;
      hooks *= arm + leg + 1;
    }
  return factorial(static_cast<unsigned long>(lambda.weight())) / hooks;
}

/// Two-row closed form N!(l1-l2+1)/((l1+1)! l2!).
inline BigInt dim_symgroup_two_row(int l1, int l2) {
  require(l1 >= l2 && l2 >= 0, "need l1 >= l2 >= 0");
  BigInt num = factorial(static_cast<unsigned long>(l1 + l2)) * (l1 - l2 + 1);
  return num / (factorial(static_cast<unsigned long>(l1 + 1)) * factorial(static_cast<unsigned long>(l2)));
}

/// Number of semistandard tableaux with entries 1..d (Weyl dimension formula).
inline BigInt dim_unitary_irrep(const Partition& lambda, int d) {
  require(d >= 1, "d must be >= 1");
  if (lambda.length() > d) return BigInt(0);
  BigInt num = 1, den = 1;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      num *= (lambda.part(static_cast<std::size_t>(i)) + d - 1 - i) -
             (lambda.part(static_cast<std::size_t>(j)) + d - 1 - j);
      den *= j - i;
    }
  return num / den;
}

/// Two-row closed form (l1-l2+1)/(l1+1) C(l1+d-1, d-1) C(l2+d-2, d-2), d >= 2.
inline BigInt dim_unitary_two_row(int l1, int l2, int d) {
  require(l1 >= l2 && l2 >= 0 && d >= 2, "need l1 >= l2 >= 0 and d >= 2");
  BigInt num = BigInt(l1 - l2 + 1) * binomial(l1 + d - 1, d - 1) * binomial(l2 + d - 2, d - 2);
  return num / (l1 + 1);
}

/// Symmetric-subspace dimension of k qudits, C(k+d-1, d-1).
inline BigInt dim_symmetric(int k, int d) { return binomial(k + d - 1, d - 1); }

/// Exact P^{(<=r)}_N and its leading asymptote N^{r-1}/(r!(r-1)!).
struct PartitionCount {
  BigInt exact;
  double asymptotic = 0.0;
};

inline PartitionCount count_partitions_max_len(int N, int r) {
  require(N >= 1 && r >= 1, "need N >= 1 and r >= 1");
  const int rr = std::min(r, N);
  // p[k][n]: partitions of n into at most k parts.
  std::vector<std::vector<BigInt>> p(static_cast<std::size_t>(rr) + 1,
                                     std::vector<BigInt>(static_cast<std::size_t>(N) + 1, BigInt(0)));
  for (int k = 0; k <= rr; ++k) p[static_cast<std::size_t>(k)][0] = 1;
  for (int k = 1; k <= rr; ++k)
    for (int n = 1; n <= N; ++n) {
      auto& cell = p[static_cast<std::size_t>(k)][static_cast<std::size_t>(n)];
      cell = p[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n)];
      if (n >= k) cell += p[static_cast<std::size_t>(k)][static_cast<std::size_t>(n - k)];
    }
  PartitionCount out;
  out.exact = p[static_cast<std::size_t>(rr)][static_cast<std::size_t>(N)];
  double denom = factorial(static_cast<unsigned long>(r)).get_d() * factorial(static_cast<unsigned long>(r - 1)).get_d();
  out.asymptotic = std::pow(static_cast<double>(N), r - 1) / denom;
  return out;
}

// ---------------------------------------------------------------------------
// Characters of S_N

inline constexpr int kMaxCharacterN = 10;

struct CharacterTable {
  int N = 0;
  std::vector<Partition> irreps;   // rows
  std::vector<Partition> classes;  // columns, by cycle type
  std::vector<std::vector<long long>> chi;

  std::size_t class_index(const Partition& cycle_type) const {
    auto it = std::find(classes.begin(), classes.end(), cycle_type);
    require(it != classes.end(), "unknown cycle type " + cycle_type.str());
    return static_cast<std::size_t>(it - classes.begin());
  }
  std::size_t irrep_index(const Partition& lambda) const {
    auto it = std::find(irreps.begin(), irreps.end(), lambda);
    require(it != irreps.end(), "unknown irrep " + lambda.str());
    return static_cast<std::size_t>(it - irreps.begin());
  }
  long long operator()(const Partition& lambda, const Partition& cycle_type) const {
    return chi[irrep_index(lambda)][class_index(cycle_type)];
  }
};

/// |class| = N! / z_mu with z_mu = prod_k k^{m_k} m_k!.
inline BigInt conjugacy_class_size(const Partition& mu) {
  std::map<int, int> mult;
  for (int p : mu.parts()) ++mult[p];
  BigInt z = 1;
  for (auto [k, m] : mult) z *= ipow(k, static_cast<unsigned long>(m)) * factorial(static_cast<unsigned long>(m));
  return factorial(static_cast<unsigned long>(mu.weight())) / z;
}

namespace detail {

// Murnaghan-Nakayama on beta-sets: removing a rim hook of length k moves one
// bead from position b to b-k; the sign counts beads jumped over.
inline long long mn_character(std::vector<int> beta, const std::vector<int>& mu, std::size_t pos,
                              std::map<std::pair<std::vector<int>, std::size_t>, long long>& memo) {
  if (pos == mu.size()) return 1;
  auto key = std::make_pair(beta, pos);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  const int k = mu[pos];
  long long total = 0;
  for (std::size_t idx = 0; idx < beta.size(); ++idx) {
    const int b = beta[idx], target = b - k;
    if (target < 0 || std::find(beta.begin(), beta.end(), target) != beta.end()) continue;
    int jumped = 0;
    for (int c : beta)
      if (c > target && c < b) ++jumped;
    auto next = beta;
    next[idx] = target;
    std::sort(next.begin(), next.end());
    const long long sub = mn_character(next, mu, pos + 1, memo);
    total += (jumped % 2 ? -sub : sub);
  }
  memo.emplace(std::move(key), total);
  return total;
}

}  // namespace detail

inline long long character(const Partition& lambda, const Partition& cycle_type) {
  require(lambda.weight() == cycle_type.weight(), "irrep and class sizes differ");
  const auto& p = lambda.parts();
  const int len = static_cast<int>(p.size());
  std::vector<int> beta;
  for (int i = 0; i < len; ++i) beta.push_back(p[static_cast<std::size_t>(i)] + (len - 1 - i));
  std::sort(beta.begin(), beta.end());
  std::map<std::pair<std::vector<int>, std::size_t>, long long> memo;
  return detail::mn_character(beta, cycle_type.parts(), 0, memo);
}

inline CharacterTable character_table(int N, int max_n = kMaxCharacterN) {
  require(N >= 1, "N must be >= 1");
  if (N > max_n)
    throw GuardError("character table requested for N = " + std::to_string(N) + " above guard " +
                     std::to_string(max_n));
  CharacterTable t;
  t.N = N;
  t.irreps = enumerate_partitions(N);
  t.classes = t.irreps;
  t.chi.assign(t.irreps.size(), std::vector<long long>(t.classes.size()));
  for (std::size_t i = 0; i < t.irreps.size(); ++i)
    for (std::size_t j = 0; j < t.classes.size(); ++j) t.chi[i][j] = character(t.irreps[i], t.classes[j]);
  return t;
}

// ---------------------------------------------------------------------------
// Operators on (C^d)^{\otimes N}

inline ExactOperator permutation_matrix(const Permutation& sigma, int d, int N,
                                        std::int64_t max_dim = kDefaultMaxDim) {
  require(sigma.size() == N, "permutation length must equal N");
  TensorBasis basis(N, d, max_dim);
  auto img = basis.permutation_image(sigma.image());
  ExactOperator u(basis.dim);
  for (std::size_t i = 0; i < basis.dim; ++i) u(img[i], i) = 1;
  return u;
}

/// Projector onto Sym^k(C^d). Entry (i,j) is nonzero iff i and j carry the
/// same symbol multiset, in which case it equals 1/multinomial(type); this is
/// the closed form of (1/k!) sum_sigma U_sigma.
inline ExactOperator symmetric_projector(int k, int d, std::int64_t max_dim = kDefaultMaxDim) {
  TensorBasis basis(k, d, max_dim);
  ExactOperator p(basis.dim);
  for (const auto& sector : basis.type_sectors()) {
    Rational v(1, static_cast<unsigned long>(sector.size()));
    for (std::size_t i : sector)
      for (std::size_t j : sector) p(i, j) = v;
  }
  return p;
}

/// Guard on the number of (permutation, basis vector) pairs visited when
/// summing over S_N.
inline constexpr std::int64_t kMaxGroupSumWork = 200'000'000;

namespace detail {

/// Integer class sums C_mu = sum_{sigma in class mu} U_sigma, one dense array
/// per conjugacy class (indexed as in character_table(N).classes).
struct ClassSums {
  int N = 0, d = 0;
  std::size_t dim = 0;
  std::vector<Partition> classes;
  std::vector<std::vector<std::int32_t>> sums;
};

inline std::shared_ptr<const ClassSums> class_sums(int N, int d, std::int64_t max_dim) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const ClassSums>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find({N, d}); it != cache.end()) return it->second;
  }
  TensorBasis basis(N, d, max_dim);
  const double work = factorial(static_cast<unsigned long>(N)).get_d() * static_cast<double>(basis.dim);
  if (work > static_cast<double>(kMaxGroupSumWork))
    throw GuardError("summing over S_" + std::to_string(N) + " on dimension " + std::to_string(basis.dim) +
                     " exceeds the work guard");
  auto cs = std::make_shared<ClassSums>();
  cs->N = N;
  cs->d = d;
  cs->dim = basis.dim;
  cs->classes = enumerate_partitions(N);
  cs->sums.assign(cs->classes.size(), std::vector<std::int32_t>(basis.dim * basis.dim, 0));
  std::map<Partition, std::size_t> class_of;
  for (std::size_t c = 0; c < cs->classes.size(); ++c) class_of[cs->classes[c]] = c;

  // Precompute digits once; the image of index i under sigma is assembled
  // from the permuted digits.
  std::vector<std::vector<int>> digits(basis.dim);
  for (std::size_t i = 0; i < basis.dim; ++i) digits[i] = basis.digits(i);
  std::vector<std::size_t> place(static_cast<std::size_t>(N));

  std::vector<int> sigma(static_cast<std::size_t>(N));
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    auto& acc = cs->sums[class_of[Permutation(sigma).cycle_type()]];
    // weight of digit at site k lands at site sigma[k]
    for (int k = 0; k < N; ++k) {
      std::size_t w = 1;
      for (int t = N - 1; t > sigma[static_cast<std::size_t>(k)]; --t) w *= static_cast<std::size_t>(d);
      place[static_cast<std::size_t>(k)] = w;
    }
    for (std::size_t i = 0; i < basis.dim; ++i) {
      std::size_t img = 0;
      const auto& dg = digits[i];
      for (int k = 0; k < N; ++k)
        img += static_cast<std::size_t>(dg[static_cast<std::size_t>(k)]) * place[static_cast<std::size_t>(k)];
      ++acc[img * basis.dim + i];
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::make_pair(N, d), cs);
  return cs;
}

}  // namespace detail

/// Central idempotent P_lambda = (nu_lambda / N!) sum_sigma chi_lambda(sigma) U_sigma,
/// the projector onto the isotypic component H_lambda.
inline ExactOperator isotypic_projector(const Partition& lambda, int d, int N,
                                        std::int64_t max_dim = kDefaultMaxDim) {
  require(lambda.weight() == N, "irrep " + lambda.str() + " is not a partition of N");
  if (N > kMaxCharacterN)
    throw GuardError("isotypic projectors are limited to N <= " + std::to_string(kMaxCharacterN));
  auto cs = detail::class_sums(N, d, max_dim);
  std::vector<long long> chi;
  for (const auto& mu : cs->classes) chi.push_back(character(lambda, mu));
  const std::size_t D = cs->dim;
  std::vector<long long> acc(D * D, 0);
  for (std::size_t c = 0; c < cs->classes.size(); ++c) {
    if (chi[c] == 0) continue;
    const auto& s = cs->sums[c];
    for (std::size_t k = 0; k < D * D; ++k)
      if (s[k]) acc[k] += chi[c] * s[k];
  }
  Rational scale = make_rational(dim_symgroup_irrep(lambda), factorial(static_cast<unsigned long>(N)));
  ExactOperator p(D);
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      long long v = acc[i * D + j];
      if (v) p(i, j) = scale * Rational(static_cast<long>(v));
    }
  return p;
}

}  // namespace qclust
