#pragma once

// Flat priors on the probability simplex: samplers, exact moments, the
// overlap marginal and a two-sample Kolmogorov-Smirnov test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/monte_carlo.hpp"
#include "qclust/rational.hpp"

namespace qclust {

using CategoricalDistribution = std::vector<double>;

/// Uniform point of the simplex from normalized unit-rate exponentials.
template <class Rng>
CategoricalDistribution sample_simplex_uniform(int d, Rng& rng) {
  require(d >= 2, "d must be >= 2");
  std::exponential_distribution<double> ex(1.0);
  CategoricalDistribution p(static_cast<std::size_t>(d));
  for (auto& v : p) v = ex(rng);
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return p;
}

/// Outcome distribution of a computational-basis measurement on a
/// Haar-random pure state in C^d.
template <class Rng>
CategoricalDistribution sample_haar_induced(int d, Rng& rng) {
  require(d >= 2, "d must be >= 2");
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
  for (auto& v : z) v = {g(rng), g(rng)};
  double norm = 0.0;
  for (const auto& v : z) norm += std::norm(v);
  CategoricalDistribution p(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = std::norm(z[i]) / norm;
  return p;
}

/// E[prod_s p_s^{n_s}] = (d-1)! prod_s n_s! / (d-1+sum n)!.
inline Rational simplex_moment(const std::vector<int>& n) {
  require(n.size() >= 2, "moment vector needs d >= 2 entries");
  const long d = static_cast<long>(n.size());
  BigInt num = factorial(static_cast<unsigned long>(d - 1));
  long total = 0;
  for (int k : n) {
    require(k >= 0, "moment exponents must be nonnegative");
    num *= factorial(static_cast<unsigned long>(k));
    total += k;
  }
  return make_rational(num, factorial(static_cast<unsigned long>(d - 1 + total)));
}

/// All exponent vectors of length d with 1 <= sum <= max_degree.
inline std::vector<std::vector<int>> moment_vectors(int d, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> n(static_cast<std::size_t>(d), 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == d) {
      if (std::accumulate(n.begin(), n.end(), 0) > 0) out.push_back(n);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      n[static_cast<std::size_t>(pos)] = k;
      self(self, pos + 1, left - k);
    }
    n[static_cast<std::size_t>(pos)] = 0;
  };
  rec(rec, 0, max_degree);
  return out;
}

/// Density of u = |<psi|phi>|^2 for Haar-random phi: (d-1)(1-u)^{d-2}.
inline double overlap_marginal(double u, int d) {
  require(d >= 2, "d must be >= 2");
  require(u >= 0.0 && u <= 1.0, "u must lie in [0, 1]");
  return (d - 1) * std::pow(1.0 - u, d - 2);
}

enum class PriorSampler { simplex, haar };

/// Empirical E[prod_s p_s^{n_s}] for every moment vector of total degree
/// <= max_degree, all estimated from one stream of samples.
inline std::vector<Estimate> empirical_moments(int d, int max_degree, PriorSampler sampler, std::uint64_t trials,
                                               std::uint64_t seed, unsigned threads = 0) {
  const auto vecs = moment_vectors(d, max_degree);
  return run_trials_vector(trials, seed, threads, vecs.size(), [&](std::mt19937_64& rng, double* out) {
    const auto p = sampler == PriorSampler::simplex ? sample_simplex_uniform(d, rng) : sample_haar_induced(d, rng);
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      double v = 1.0;
      for (std::size_t s = 0; s < vecs[i].size(); ++s)
        for (int k = 0; k < vecs[i][s]; ++k) v *= p[s];
      out[i] = v;
    }
  });
}

/// First component p_1 of `count` samples, for distribution tests.
inline std::vector<double> sample_first_component(int d, PriorSampler sampler, std::size_t count, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0);
  std::vector<double> out(count);
  for (auto& v : out) v = (sampler == PriorSampler::simplex ? sample_simplex_uniform(d, rng) : sample_haar_induced(d, rng))[0];
  return out;
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "KS test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double dmax = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    dmax = std::max(dmax, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return dmax;
}

/// Kolmogorov survival function Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
inline double kolmogorov_q(double t) {
  if (t < 1e-3) return 1.0;
  double s = 0.0, sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * t * t);
    s += term;
    if (std::abs(term) < 1e-16 * std::abs(s)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

/// Asymptotic p-value of the two-sample statistic with the usual
/// small-sample correction of the effective size.
inline double ks_pvalue(double dstat, std::size_t na, std::size_t nb) {
  const double ne = static_cast<double>(na) * static_cast<double>(nb) / static_cast<double>(na + nb);
  const double rt = std::sqrt(ne);
  return kolmogorov_q((rt + 0.12 + 0.11 / rt) * dstat);
}

}  // namespace qclust
