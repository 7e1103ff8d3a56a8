#pragma once

// Clustering when the two pure states are known up to their overlap c:
// closed-form success probabilities, prior averages, the unambiguous
// protocol, a local Helstrom-measurement simulator and a numerical check of
// the optimality conditions for the complement-identified variant.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/monte_carlo.hpp"
#include "qclust/priors.hpp"
#include "qclust/quadrature.hpp"

namespace qclust {

inline void require_overlap(double c) { require(c >= 0.0 && c <= 1.0, "overlap c must lie in [0, 1]"); }

/// ((1 + sqrt(1 - c^2)) / 2)^N.
inline double success_known_pure(double c, int N) {
  require_overlap(c);
  require(N >= 1, "N must be >= 1");
  return std::pow((1.0 + std::sqrt(1.0 - c * c)) / 2.0, N);
}

/// Success when guessing the complementary string also counts.
inline double success_known_clustering(double c, int N) {
  require_overlap(c);
  require(N >= 1, "N must be >= 1");
  const double r = std::sqrt(1.0 - c * c);
  return std::pow((1.0 + r) / 2.0, N) + std::pow((1.0 - r) / 2.0, N);
}

enum class KnownVariant { pure, clustering };

struct AveragedValue {
  double value = 0.0;
  double asymptote = 0.0;
  Quadrature quad;
};

/// Prior average int_0^1 du mu(u) P_s(sqrt(u)). Integrated in v = sqrt(1-u),
/// where the integrand 2 v mu(1 - v^2) P_s is a polynomial.
inline AveragedValue average_success_known(int N, int d, KnownVariant variant) {
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  auto f = [&](double v) {
    double p = std::pow((1.0 + v) / 2.0, N);
    if (variant == KnownVariant::clustering) p += std::pow((1.0 - v) / 2.0, N);
    return 2.0 * v * overlap_marginal(1.0 - v * v, d) * p;
  };
  AveragedValue r;
  r.quad = integrate(f, 0.0, 1.0);
  r.value = r.quad.value;
  r.asymptote = 4.0 * (d - 1) / N;
  return r;
}

/// Average unambiguous success 2 int_0^1 dc c mu(c^2) (1-c)^N.
inline AveragedValue unambiguous_average(int N, int d) {
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  auto f = [&](double c) { return 2.0 * c * overlap_marginal(c * c, d) * std::pow(1.0 - c, N); };
  AveragedValue r;
  r.quad = integrate(f, 0.0, 1.0);
  r.value = r.quad.value;
  r.asymptote = 2.0 * (d - 1) / (static_cast<double>(N) * N);
  return r;
}

/// |phi_{0/1}> = sqrt((1+c)/2)|0> +- sqrt((1-c)/2)|1>.
inline std::array<std::array<double, 2>, 2> known_states(double c) {
  const double a = std::sqrt((1.0 + c) / 2.0), b = std::sqrt((1.0 - c) / 2.0);
  return {{{a, b}, {a, -b}}};
}

/// Local Helstrom basis |psi_{0/1}> = (|0> +- |1>)/sqrt(2).
inline std::array<std::array<double, 2>, 2> helstrom_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  return {{{h, h}, {h, -h}}};
}

/// Simulates site-by-site Helstrom measurements on uniformly random strings.
/// In clustering mode recovering the complement also counts as success.
inline Estimate helstrom_simulate(double c, int N, std::uint64_t trials, std::uint64_t seed,
                                  KnownVariant variant = KnownVariant::pure, unsigned threads = 0) {
  require_overlap(c);
  require(N >= 1, "N must be >= 1");
  const auto phi = known_states(c);
  const auto psi = helstrom_basis();
  // prob[x][b] = |<psi_b|phi_x>|^2
  double prob[2][2];
  for (int x = 0; x < 2; ++x)
    for (int b = 0; b < 2; ++b) {
      const double amp = psi[b][0] * phi[x][0] + psi[b][1] * phi[x][1];
      prob[x][b] = amp * amp;
    }
  auto trial = [&](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool all_same = true, all_flipped = true;
    for (int i = 0; i < N; ++i) {
      const int x = static_cast<int>(rng() & 1u);
      const int b = u(rng) < prob[x][0] ? 0 : 1;
      all_same &= b == x;
      all_flipped &= b != x;
    }
    return (all_same || (variant == KnownVariant::clustering && all_flipped)) ? 1.0 : 0.0;
  };
  return run_trials(trials, seed, threads, trial);
}

struct MixedPovmReport {
  bool pass = false;
  bool gamma_symmetric = false;
  bool complete = false;
  double min_eigenvalue = 0.0;  // smallest eigenvalue of Gamma - rho_x over all x
  int min_null_count = 0;       // fewest near-zero eigenvalues of Gamma - rho_x over x
  double success = 0.0;         // 2^{1-N} tr Gamma
};

/// Builds rho_x = (|Phi_x><Phi_x| + |Phi_xbar><Phi_xbar|)/2 and
/// E_x = |Psi_x><Psi_x| + |Psi_xbar><Psi_xbar| on the 2^N-dimensional span
/// and checks sum_x E_x rho_x = sum_x rho_x E_x = Gamma and Gamma - rho_x >= 0.
inline MixedPovmReport verify_known_mixed_povm(double c, int N, double tol = 1e-9, int max_n = 10) {
  require(c >= 0.0 && c < 1.0, "need 0 <= c < 1");
  require(N >= 1, "N must be >= 1");
  if (N > max_n) throw GuardError("mixed-state check limited to N <= " + std::to_string(max_n));
  const auto phi = known_states(c);
  const auto psi = helstrom_basis();
  const Eigen::Index D = Eigen::Index{1} << N;
  auto product = [&](const std::array<std::array<double, 2>, 2>& v, std::uint64_t x) {
    Eigen::VectorXd out(D);
    for (Eigen::Index i = 0; i < D; ++i) {
      double a = 1.0;
      for (int k = 0; k < N; ++k) {
        const int bit_x = static_cast<int>((x >> (N - 1 - k)) & 1u);
        const int bit_i = static_cast<int>((static_cast<std::uint64_t>(i) >> (N - 1 - k)) & 1u);
        a *= v[static_cast<std::size_t>(bit_x)][static_cast<std::size_t>(bit_i)];
      }
      out(i) = a;
    }
    return out;
  };
  const std::uint64_t mask = (std::uint64_t{1} << N) - 1;
  std::vector<Eigen::MatrixXd> rho, e;
  for (std::uint64_t x = 0; x <= mask; ++x) {
    const std::uint64_t xb = ~x & mask;
    if (xb < x) continue;  // one representative per complementary pair
    Eigen::VectorXd f0 = product(phi, x), f1 = product(phi, xb), g0 = product(psi, x), g1 = product(psi, xb);
    if (x == xb) {
      rho.push_back(f0 * f0.transpose());
      e.push_back(g0 * g0.transpose());
    } else {
      rho.push_back(0.5 * (f0 * f0.transpose() + f1 * f1.transpose()));
      e.push_back(g0 * g0.transpose() + g1 * g1.transpose());
    }
  }
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(D, D), gamma_t = gamma, sum_e = gamma;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    gamma += e[i] * rho[i];
    gamma_t += rho[i] * e[i];
    sum_e += e[i];
  }
  MixedPovmReport r;
  r.gamma_symmetric = (gamma - gamma_t).cwiseAbs().maxCoeff() <= tol;
  r.complete = (sum_e - Eigen::MatrixXd::Identity(D, D)).cwiseAbs().maxCoeff() <= tol;
  r.min_eigenvalue = 1.0;
  r.min_null_count = static_cast<int>(D);
  for (const auto& rx : rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma - rx, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
    const auto& ev = es.eigenvalues();
    r.min_eigenvalue = std::min(r.min_eigenvalue, ev(0));
    int nulls = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) nulls += std::abs(ev(i)) <= tol;
    r.min_null_count = std::min(r.min_null_count, nulls);
  }
  r.success = std::pow(2.0, 1 - N) * gamma.trace();
  r.pass = r.gamma_symmetric && r.complete && r.min_eigenvalue >= -tol;
  return r;
}

}  // namespace qclust
