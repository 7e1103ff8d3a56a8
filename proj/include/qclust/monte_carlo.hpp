#pragma once

// Seeded Monte Carlo driver. Trials are split into fixed-size chunks; chunk k
// draws from its own generator seeded by (seed, k), and chunk results are
// reduced in index order, so estimates do not depend on the thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "qclust/errors.hpp"

namespace qclust {

inline constexpr std::uint64_t kChunkTrials = 1u << 14;

struct Estimate {
  std::uint64_t trials = 0;
  double mean = 0.0;
  double std_error = 0.0;

  /// |mean - reference| <= k * std_error; exact agreement when the sample has no spread.
  bool within(double reference, double k = 4.0) const {
    const double tol = std::max(k * std_error, 1e-12);
    return std::abs(mean - reference) <= tol;
  }
};

inline std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Vector-valued variant: trial(rng, out) fills `width` values per trial and
/// one estimate per component is returned.
template <class Trial>
std::vector<Estimate> run_trials_vector(std::uint64_t trials, std::uint64_t seed, unsigned threads, std::size_t width,
                                        const Trial& trial) {
  require(trials >= 1, "need at least one trial");
  require(width >= 1, "need at least one component");
  const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<double> sum(chunks * width, 0.0), sumsq(chunks * width, 0.0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    std::vector<double> v(width);
    for (std::uint64_t k; (k = next.fetch_add(1)) < chunks;) {
      auto rng = stream_rng(seed, k);
      const std::uint64_t begin = k * kChunkTrials, end = std::min(trials, begin + kChunkTrials);
      double* s = &sum[k * width];
      double* s2 = &sumsq[k * width];
      for (std::uint64_t t = begin; t < end; ++t) {
        trial(rng, v.data());
        for (std::size_t i = 0; i < width; ++i) {
          s[i] += v[i];
          s2[i] += v[i] * v[i];
        }
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads ? threads : default_threads(), static_cast<unsigned>(chunks)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::vector<Estimate> out(width);
  const double nt = static_cast<double>(trials);
  for (std::size_t i = 0; i < width; ++i) {
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t k = 0; k < chunks; ++k) {
      s += sum[k * width + i];
      s2 += sumsq[k * width + i];
    }
    out[i].trials = trials;
    out[i].mean = s / nt;
    const double var = trials > 1 ? std::max(0.0, (s2 - nt * out[i].mean * out[i].mean) / (nt - 1.0)) : 0.0;
    out[i].std_error = std::sqrt(var / nt);
  }
  return out;
}

/// Runs `trials` calls of trial(rng) -> double and returns mean and standard error.
template <class Trial>
Estimate run_trials(std::uint64_t trials, std::uint64_t seed, unsigned threads, const Trial& trial) {
  require(trials >= 1, "need at least one trial");
  const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<double> sum(chunks, 0.0), sumsq(chunks, 0.0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t k; (k = next.fetch_add(1)) < chunks;) {
      auto rng = stream_rng(seed, k);
      const std::uint64_t begin = k * kChunkTrials, end = std::min(trials, begin + kChunkTrials);
      double s = 0.0, s2 = 0.0;
      for (std::uint64_t t = begin; t < end; ++t) {
        const double v = trial(rng);
        s += v;
        s2 += v * v;
      }
      sum[k] = s;
      sumsq[k] = s2;
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads ? threads : default_threads(), static_cast<unsigned>(chunks)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  double s = 0.0, s2 = 0.0;
  for (std::uint64_t k = 0; k < chunks; ++k) {
    s += sum[k];
    s2 += sumsq[k];
  }
  Estimate e;
  e.trials = trials;
  const double nt = static_cast<double>(trials);
  e.mean = s / nt;
  const double var = trials > 1 ? std::max(0.0, (s2 - nt * e.mean * e.mean) / (nt - 1.0)) : 0.0;
  e.std_error = std::sqrt(var / nt);
  return e;
}

}  // namespace qclust
