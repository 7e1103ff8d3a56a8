#pragma once

// Classical clustering of data sampled from two categorical distributions:
// the optimal protocol for unknown distributions (symbol grouping plus a
// balanced-partition merge), its exact and asymptotic success probability,
// and the per-symbol protocol for known distributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/hypotheses.hpp"
#include "qclust/monte_carlo.hpp"
#include "qclust/priors.hpp"
#include "qclust/rational.hpp"

namespace qclust {

inline constexpr int kMaxPartitionSymbols = 30;
inline constexpr int kMaxBruteforceSymbols = 20;
inline constexpr std::uint64_t kMaxCompositions = 1'000'000;

/// Symbols are 0-based internally.
using SampleString = std::vector<int>;

/// Parses digits "112321..." with symbols written 1..d.
inline SampleString parse_sample(const std::string& s, int d) {
  SampleString r;
  for (char ch : s) {
    require(ch >= '1' && ch <= '9', "sample symbols are written 1..9");
    const int v = ch - '1';
    require(v < d, "symbol exceeds d");
    r.push_back(v);
  }
  require(!r.empty(), "empty sample string");
  return r;
}

inline std::vector<int> occurrence_counts(const SampleString& r, int d) {
  std::vector<int> m(static_cast<std::size_t>(d), 0);
  for (int s : r) {
    require(s >= 0 && s < d, "symbol out of range");
    ++m[static_cast<std::size_t>(s)];
  }
  return m;
}

struct PartitionSolution {
  std::uint64_t subset = 0;  // bit s set when symbol s is in Q
  int sum = 0;               // sum of M_s over Q
  int twice_bias = 0;        // 2 Delta = |sum_Q - sum_notQ|

  double bias() const { return twice_bias / 2.0; }
};

/// Minimizes |sum_Q M - sum_notQ M| by subset-sum dynamic programming.
/// Among optimal subsets the one with the smallest bitmask is returned.
inline PartitionSolution solve_balanced_partition(const std::vector<int>& m) {
  const int d = static_cast<int>(m.size());
  require(d >= 1, "need at least one count");
  if (d > kMaxPartitionSymbols)
    throw GuardError("partition solver limited to d <= " + std::to_string(kMaxPartitionSymbols));
  int total = 0;
  for (int v : m) {
    require(v >= 0, "counts must be nonnegative");
    total += v;
  }
  // reach[k][v]: some subset of symbols 0..k-1 sums to v
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(d + 1), std::vector<char>(static_cast<std::size_t>(total + 1), 0));
  reach[0][0] = 1;
  for (int k = 0; k < d; ++k) {
    const auto& prev = reach[static_cast<std::size_t>(k)];
    auto& cur = reach[static_cast<std::size_t>(k + 1)];
    const int w = m[static_cast<std::size_t>(k)];
    for (int v = 0; v <= total; ++v)
      if (prev[static_cast<std::size_t>(v)]) {
        cur[static_cast<std::size_t>(v)] = 1;
        cur[static_cast<std::size_t>(v + w)] = 1;
      }
  }
  int best = total + 1;
  for (int v = 0; v <= total; ++v)
    if (reach[static_cast<std::size_t>(d)][static_cast<std::size_t>(v)]) best = std::min(best, std::abs(2 * v - total));

  // Smallest mask reaching target t: decide bits from the highest symbol
  // down, leaving a bit clear whenever the lower symbols can still reach t.
  auto smallest_mask = [&](int t) {
    std::uint64_t mask = 0;
    for (int k = d - 1; k >= 0; --k) {
      const auto& lower = reach[static_cast<std::size_t>(k)];
      if (t >= 0 && lower[static_cast<std::size_t>(t)]) continue;
      mask |= std::uint64_t{1} << k;
      t -= m[static_cast<std::size_t>(k)];
    }
    return mask;
  };
  PartitionSolution sol;
  sol.twice_bias = best;
  bool found = false;
  for (int t : {(total - best) / 2, (total + best) / 2}) {
    if ((total - best) % 2 != 0 || !reach[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)]) continue;
    const std::uint64_t mask = smallest_mask(t);
    if (!found || mask < sol.subset) {
      sol.subset = mask;
      sol.sum = t;
      found = true;
    }
  }
  return sol;
}

/// Exhaustive search over all 2^d subsets in increasing bitmask order.
inline PartitionSolution solve_balanced_partition_bruteforce(const std::vector<int>& m) {
  const int d = static_cast<int>(m.size());
  if (d > kMaxBruteforceSymbols)
    throw GuardError("brute-force partition limited to d <= " + std::to_string(kMaxBruteforceSymbols));
  int total = 0;
  for (int v : m) total += v;
  PartitionSolution best;
  best.twice_bias = total + 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
    int s = 0;
    for (int k = 0; k < d; ++k)
      if (mask >> k & 1u) s += m[static_cast<std::size_t>(k)];
    const int tb = std::abs(2 * s - total);
    if (tb < best.twice_bias) best = {mask, s, tb};
  }
  return best;
}

/// Groups positions by symbol and merges the groups into two clusters of
/// sizes as equal as possible. Positions whose symbol is in Q get label 1.
inline Clustering optimal_guess_unknown(const SampleString& r, int d) {
  const auto sol = solve_balanced_partition(occurrence_counts(r, d));
  ClusterString x;
  for (int s : r) x.bits.push_back(static_cast<std::uint8_t>(sol.subset >> s & 1u));
  return string_to_clustering(x);
}

/// Pr(r, x) = 2^{-N} (d-1)!^2 prod_s n_s! m_s! / ((d-1+sum m)!(d-1+sum n)!),
/// where n_s (m_s) counts symbol s at positions labeled 0 (1) in x.
inline Rational joint_probability(const SampleString& r, const ClusterString& x, int d) {
  require(static_cast<int>(r.size()) == x.size(), "sample and labeling differ in length");
  require(d >= 1, "d must be >= 1");
  std::vector<int> n(static_cast<std::size_t>(d), 0), m(static_cast<std::size_t>(d), 0);
  int sn = 0, sm = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    require(r[i] >= 0 && r[i] < d, "symbol out of range");
    if (x.bits[i]) {
      ++m[static_cast<std::size_t>(r[i])];
      ++sm;
    } else {
      ++n[static_cast<std::size_t>(r[i])];
      ++sn;
    }
  }
  const auto db = static_cast<unsigned long>(d - 1);
  BigInt num = factorial(db) * factorial(db);
  for (int s = 0; s < d; ++s)
    num *= factorial(static_cast<unsigned long>(n[static_cast<std::size_t>(s)])) *
           factorial(static_cast<unsigned long>(m[static_cast<std::size_t>(s)]));
  BigInt den = factorial(db + static_cast<unsigned long>(sm)) * factorial(db + static_cast<unsigned long>(sn)) *
               ipow(2, r.size());
  return make_rational(num, den);
}

inline std::uint64_t composition_count(int N, int d) {
  const BigInt c = binomial(N + d - 1, d - 1);
  return c.fits_ulong_p() ? c.get_ui() : ~std::uint64_t{0};
}

inline void guard_compositions(int N, int d, std::uint64_t limit) {
  if (composition_count(N, d) > limit)
    throw GuardError("C(N+d-1, d-1) = " + binomial(N + d - 1, d - 1).get_str() + " weak compositions exceed the guard " +
                     std::to_string(limit));
}

/// Calls f(M) for every weak composition M of N into d parts.
template <class F>
void for_each_composition(int N, int d, const F& f) {
  std::vector<int> m(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d - 1) {
      m[static_cast<std::size_t>(pos)] = left;
      f(m);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      m[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
  };
  rec(rec, 0, N);
}

/// xi_Delta: number of ordered compositions with bias Delta, keyed by 2 Delta.
inline std::map<int, BigInt> bias_counts(int N, int d, std::uint64_t limit = kMaxCompositions) {
  require(N >= 1 && d >= 1, "need N >= 1 and d >= 1");
  guard_compositions(N, d, limit);
  std::map<int, BigInt> xi;
  for_each_composition(N, d, [&](const std::vector<int>& m) { xi[solve_balanced_partition(m).twice_bias] += 1; });
  return xi;
}

/// P_s = sum_Delta 2^{1-N} xi_Delta (d-1)!^2 N! / ((d-1+N/2+Delta)!(d-1+N/2-Delta)!).
inline Rational success_exact_unknown(int N, int d, std::uint64_t limit = kMaxCompositions) {
  require(d >= 2, "d must be >= 2");
  const auto xi = bias_counts(N, d, limit);
  const auto db = static_cast<unsigned long>(d - 1);
  Rational total = 0;
  for (const auto& [tb, count] : xi) {
    const auto lo = static_cast<unsigned long>((N - tb) / 2), hi = static_cast<unsigned long>((N + tb) / 2);
    BigInt num = count * factorial(db) * factorial(db) * factorial(static_cast<unsigned long>(N));
    BigInt den = factorial(db + lo) * factorial(db + hi) * ipow(2, static_cast<unsigned long>(N - 1));
    total += make_rational(num, den);
  }
  return total;
}

inline constexpr int kMaxBruteforceStrings = 1 << 20;

/// 2 sum_r max_x Pr(r, x) by enumerating all d^N strings and 2^N labelings.
inline Rational success_bruteforce_unknown(int N, int d) {
  require(N >= 1 && d >= 2, "need N >= 1 and d >= 2");
  const std::int64_t strings = checked_pow(d, N, kMaxBruteforceStrings);
  if (strings > kMaxBruteforceStrings || N > 20 || strings * (std::int64_t{1} << N) > std::int64_t{kMaxBruteforceStrings} * 4)
    throw GuardError("brute-force enumeration over d^N strings and 2^N labelings too large");
  Rational total = 0;
  SampleString r(static_cast<std::size_t>(N));
  ClusterString x;
  x.bits.resize(static_cast<std::size_t>(N));
  for (std::int64_t code = 0; code < strings; ++code) {
    std::int64_t c = code;
    for (int k = N - 1; k >= 0; --k) {
      r[static_cast<std::size_t>(k)] = static_cast<int>(c % d);
      c /= d;
    }
    Rational best = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
      for (int k = 0; k < N; ++k) x.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(mask >> k & 1u);
      Rational p = joint_probability(r, x, d);
      if (p > best) best = p;
    }
    total += best;
  }
  return 2 * total;
}

/// (2/N)^d (2d-2)!/(d-2)!.
inline double success_asymptotic_unknown(int N, int d) {
  require(N >= 1 && d >= 2, "need N >= 1 and d >= 2");
  return std::pow(2.0 / N, d) * std::exp(std::lgamma(2.0 * d - 1) - std::lgamma(d - 1.0));
}

/// xi_0: ordered compositions of N into d parts with a subset summing to N/2.
inline BigInt xi0(int N, int d, std::uint64_t limit = kMaxCompositions) {
  require(N >= 2 && N % 2 == 0, "xi_0 needs even N");
  const auto xi = bias_counts(N, d, limit);
  auto it = xi.find(0);
  return it == xi.end() ? BigInt(0) : it->second;
}

/// Direct count: every composition, every subset (independent of the solver).
inline BigInt xi0_bruteforce(int N, int d, std::uint64_t limit = kMaxCompositions) {
  require(N >= 2 && N % 2 == 0, "xi_0 needs even N");
  require(d <= kMaxBruteforceSymbols, "too many symbols for brute force");
  guard_compositions(N, d, limit);
  BigInt count = 0;
  for_each_composition(N, d, [&](const std::vector<int>& m) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
      int s = 0;
      for (int k = 0; k < d; ++k)
        if (mask >> k & 1u) s += m[static_cast<std::size_t>(k)];
      if (2 * s == N) {
        count += 1;
        return;
      }
    }
  });
  return count;
}

/// (1/2)(N/2)^{d-2} (2d-2)! / ((d-2)! (d-1)!^2).
inline double xi0_asymptotic(int N, int d) {
  require(d >= 2, "d must be >= 2");
  return 0.5 * std::pow(N / 2.0, d - 2) *
         std::exp(std::lgamma(2.0 * d - 1) - std::lgamma(d - 1.0) - 2.0 * std::lgamma(static_cast<double>(d)));
}

/// Known P and Q: 2^{-N}[(sum_s max(p_s,q_s))^N + (sum_s min(p_s,q_s))^N].
inline double success_known_classical(const CategoricalDistribution& p, const CategoricalDistribution& q, int N) {
  require(p.size() == q.size() && !p.empty(), "distributions must have equal support");
  double smax = 0.0, smin = 0.0;
  for (std::size_t s = 0; s < p.size(); ++s) {
    smax += std::max(p[s], q[s]);
    smin += std::min(p[s], q[s]);
  }
  return (std::pow(smax, N) + std::pow(smin, N)) / std::pow(2.0, N);
}

/// Prior average for known distributions: closed forms for d = 2 and d = 3.
inline Rational average_known_classical_exact(int N, int d) {
  require(N >= 1, "N must be >= 1");
  const Rational p2 = Rational(ipow(2, static_cast<unsigned long>(N)));  // 2^N
  const Rational four_over = Rational(4) / p2;                              // 2^{2-N}
  if (d == 2) return (Rational(8) - four_over) / Rational((N + 2) * (N + 1));
  if (d == 3) {
    Rational num = Rational(32 * (N - 2)) + four_over * Rational(N * N + 7 * N + 18);
    return Rational(6) * num / Rational(static_cast<long>(N + 4) * (N + 3) * (N + 2) * (N + 1));
  }
  throw ContractError("closed form available only for d = 2 and d = 3");
}

/// Monte Carlo average of the pairwise formula over flat priors on P and Q.
inline Estimate average_known_classical_mc(int N, int d, std::uint64_t trials, std::uint64_t seed,
                                           unsigned threads = 0) {
  require(N >= 1 && d >= 2, "need N >= 1 and d >= 2");
  return run_trials(trials, seed, threads, [&](std::mt19937_64& rng) {
    const auto p = sample_simplex_uniform(d, rng);
    const auto q = sample_simplex_uniform(d, rng);
    return success_known_classical(p, q, N);
  });
}

/// (2/N)^d (2d-2)!/(d-2)!, shared with the unknown case.
inline double average_known_classical_asymptotic(int N, int d) { return success_asymptotic_unknown(N, d); }

template <class Rng>
int sample_categorical(const CategoricalDistribution& p, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double t = u(rng), acc = 0.0;
  for (std::size_t s = 0; s + 1 < p.size(); ++s) {
    acc += p[s];
    if (t < acc) return static_cast<int>(s);
  }
  return static_cast<int>(p.size()) - 1;
}

/// Full simulation of the unknown-distribution protocol: draw P, Q, a uniform
/// labeling x and data r, and score the optimal guess up to complement.
inline Estimate simulate_unknown_protocol(int N, int d, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
  require(N >= 1 && d >= 2, "need N >= 1 and d >= 2");
  return run_trials(trials, seed, threads, [&](std::mt19937_64& rng) {
    const auto p = sample_simplex_uniform(d, rng);
    const auto q = sample_simplex_uniform(d, rng);
    ClusterString x;
    SampleString r;
    for (int i = 0; i < N; ++i) {
      const auto b = static_cast<std::uint8_t>(rng() & 1u);
      x.bits.push_back(b);
      r.push_back(sample_categorical(b ? q : p, rng));
    }
    return optimal_guess_unknown(r, d).canonical == x.canonical() ? 1.0 : 0.0;
  });
}

/// Full simulation of the known-distribution protocol: each point goes to
/// the distribution that makes its symbol more likely.
inline Estimate simulate_known_protocol(int N, int d, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
  require(N >= 1 && d >= 2, "need N >= 1 and d >= 2");
  return run_trials(trials, seed, threads, [&](std::mt19937_64& rng) {
    const auto p = sample_simplex_uniform(d, rng);
    const auto q = sample_simplex_uniform(d, rng);
    ClusterString x, guess;
    for (int i = 0; i < N; ++i) {
      const auto b = static_cast<std::uint8_t>(rng() & 1u);
      x.bits.push_back(b);
      const int s = sample_categorical(b ? q : p, rng);
      guess.bits.push_back(static_cast<std::uint8_t>(q[static_cast<std::size_t>(s)] > p[static_cast<std::size_t>(s)]));
    }
    return guess.canonical() == x.canonical() ? 1.0 : 0.0;
  });
}

}  // namespace qclust
