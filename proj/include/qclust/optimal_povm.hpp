#pragma once

// Optimal universal clustering POVM, its success probability (closed form,
// operator brute force and asymptotics) and optimality checks.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "qclust/cost_functions.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact_operator.hpp"
#include "qclust/hypotheses.hpp"
#include "qclust/numeric.hpp"
#include "qclust/rational.hpp"
#include "qclust/rep_core.hpp"

namespace qclust {

inline constexpr double kPsdTolerance = 1e-9;

/// n(lambda) = lambda_2 for the success probability.
inline int guess_rule_success(const Partition& lambda) {
  require(lambda.length() <= 2, "guess rule needs a two-row irrep, got " + lambda.str());
  return lambda.part(1);
}

/// xi^n_lambda = nu_lambda b_n / N! (one copy of the S_N irrep per element).
inline Rational povm_coefficient(const Partition& lambda, int n) {
  const int N = lambda.weight();
  return make_rational(dim_symgroup_irrep(lambda) * class_size(N, n), factorial(static_cast<unsigned long>(N)));
}

/// Covariant POVM stored as one seed E_{n,e} per n; elements for other
/// clusterings are obtained by permuting the basis.
class Povm {
 public:
  Povm(int N, int d, std::vector<ExactOperator> seeds, std::int64_t max_dim = kDefaultMaxDim)
      : N_(N), d_(d), basis_(N, d, max_dim), seeds_(std::move(seeds)), clusterings_(enumerate_clusterings(N)) {}

  int N() const { return N_; }
  int d() const { return d_; }
  std::size_t size() const { return clusterings_.size(); }
  const std::vector<Clustering>& clusterings() const { return clusterings_; }
  const ExactOperator& seed(int n) const { return seeds_.at(static_cast<std::size_t>(n)); }
  ExactOperator& seed(int n) { return seeds_.at(static_cast<std::size_t>(n)); }

  ExactOperator element(const Clustering& c) const {
    const auto& s = seed(c.n);
    if (c.sigma.is_identity()) return s;
    return s.conjugated(basis_.permutation_image(c.sigma.image()));
  }

  ExactOperator element(const ClusterString& x) const { return element(string_to_clustering(x)); }

 private:
  int N_, d_;
  TensorBasis basis_;
  std::vector<ExactOperator> seeds_;
  std::vector<Clustering> clusterings_;
};

/// POVM for an arbitrary guess rule: irrep lambda is assigned to the
/// clusterings of size guess(lambda), with E_{n,sigma} containing
/// xi^n_lambda Omega^{n,sigma}_lambda. Irreps outside the support of every
/// state (more than two rows) go to n = 0 in full.
inline Povm build_povm(int N, int d, const std::map<Partition, int>& guess, std::int64_t max_dim = kDefaultMaxDim) {
  require(N >= 1 && d >= 1, "need N >= 1 and d >= 1");
  TensorBasis basis(N, d, max_dim);
  std::vector<ExactOperator> seeds;
  for (int n = 0; 2 * n <= N; ++n) seeds.emplace_back(basis.dim);
  for (const auto& lambda : enumerate_partitions(N, d)) {
    if (lambda.length() > 2) {
      seeds[0] += isotypic_projector(lambda, d, N, max_dim);
      continue;
    }
    auto it = guess.find(lambda);
    const int n = it != guess.end() ? it->second : guess_rule_success(lambda);
    require(n >= 0 && 2 * n <= N, "guess out of range for " + lambda.str());
    if (lambda.part(1) > n)
      throw StructureError("guess n = " + std::to_string(n) + " has no support in irrep " + lambda.str());
    ExactOperator omega = omega_projector(reference_clustering(N, n), lambda, d, max_dim);
    seeds[static_cast<std::size_t>(n)].add_scaled(povm_coefficient(lambda, n), omega);
  }
  return Povm(N, d, std::move(seeds), max_dim);
}

/// Optimal POVM for the success probability.
inline Povm build_povm(int N, int d, std::int64_t max_dim = kDefaultMaxDim) { return build_povm(N, d, {}, max_dim); }

/// Optimal POVM for a general cost, from its guess table.
inline Povm build_povm(const GuessTable& t, std::int64_t max_dim = kDefaultMaxDim) {
  std::map<Partition, int> g;
  for (const auto& e : t.entries)
    if (e.lambda.length() <= 2) g[e.lambda] = e.chosen();
  return build_povm(t.N, t.d, g, max_dim);
}

/// Negative control: the n = 1 coefficient is halved and the missing weight
/// (1/2) P_{(N-1,1)} is added to E_0, which keeps completeness.
inline Povm perturbed_povm(int N, int d, std::int64_t max_dim = kDefaultMaxDim) {
  require(N >= 2, "perturbed POVM needs N >= 2");
  Povm p = build_povm(N, d, max_dim);
  const Partition lam{N - 1, 1};
  p.seed(1) -= Rational(1, 2) * (povm_coefficient(lam, 1) *
                                 omega_projector(reference_clustering(N, 1), lam, d, max_dim));
  p.seed(0).add_scaled(Rational(1, 2), isotypic_projector(lam, d, N, max_dim));
  return p;
}

/// sum_x E_x == identity, exactly.
inline bool is_complete(const Povm& p) {
  ExactOperator sum(p.seed(0).dim());
  for (const auto& c : p.clusterings()) sum += p.element(c);
  return sum == ExactOperator::identity(sum.dim());
}

/// E_{tau x} == U_tau E_x U_tau^T for every clustering and each given tau.
inline bool is_covariant(const Povm& p, const std::vector<Permutation>& taus) {
  TensorBasis basis(p.N(), p.d(), static_cast<std::int64_t>(p.seed(0).dim()));
  for (const auto& tau : taus) {
    auto img = basis.permutation_image(tau.image());
    for (const auto& c : p.clusterings())
      if (p.element(apply(tau, c.canonical)) != p.element(c).conjugated(img)) return false;
  }
  return true;
}

/// P_s = 2^{1-N} sum_{i=0}^{N/2} C(N,i) (d-1)(N-2i+1)^2 / ((d+i-1)(N-i+1)^2).
inline Rational success_probability_exact(int N, int d) {
  require(N >= 1, "N must be >= 1");
  require(d >= 2, "d must be >= 2");
  Rational s = 0;
  for (int i = 0; 2 * i <= N; ++i) {
    BigInt num = binomial(N, i) * (d - 1) * (N - 2 * i + 1) * (N - 2 * i + 1);
    BigInt den = BigInt(d + i - 1) * (N - i + 1) * (N - i + 1);
    s += make_rational(num, den);
  }
  s /= Rational(ipow(2, static_cast<unsigned long>(N - 1)));
  return s;
}

/// P_s = 2^{1-N} sum_x tr(rho_x E_x) from explicit operators.
inline Rational success_probability_bruteforce(const Povm& p) {
  StateBank bank(p.N(), p.d(), static_cast<std::int64_t>(p.seed(0).dim()));
  Rational s = 0;
  for (const auto& c : p.clusterings()) s += trace_product(bank.exact_state(c), p.element(c));
  return s * uniform_prior(p.N());
}

inline Rational success_probability_bruteforce(int N, int d, std::int64_t max_dim = kDefaultMaxDim) {
  return success_probability_bruteforce(build_povm(N, d, max_dim));
}

enum class Regime { combined, sublinear, linear, superlinear };

inline Regime parse_regime(const std::string& s) {
  if (s == "combined") return Regime::combined;
  if (s == "sublinear") return Regime::sublinear;
  if (s == "linear") return Regime::linear;
  if (s == "superlinear") return Regime::superlinear;
  throw ContractError("unknown regime '" + s + "'");
}

inline std::string regime_name(Regime r) {
  switch (r) {
    case Regime::combined: return "combined";
    case Regime::sublinear: return "sublinear";
    case Regime::linear: return "linear";
    case Regime::superlinear: return "superlinear";
  }
  return "?";
}

/// Large-N success probability. The linear regime uses s = d / N.
inline double success_probability_asymptotic(int N, double d, Regime r) {
  require(N >= 2, "asymptotic formulas need N >= 2");
  const double n = N;
  switch (r) {
    case Regime::combined: return 8.0 * (d - 1.0) / ((2.0 * d + n) * n);
    case Regime::sublinear: return 8.0 * (d - 1.0) / (n * n);
    case Regime::linear: {
      const double s = d / n;
      return 8.0 * s / ((2.0 * s + 1.0) * n);
    }
    case Regime::superlinear: return 4.0 / n;
  }
  return 0.0;
}

struct HolevoReport {
  bool pass = false;
  bool equality = false;          // (W_x - Gamma) E_x = E_x (W_x - Gamma) = 0 for all x
  bool psd = false;               // W_x - Gamma >= -tol for all x
  double min_eigenvalue = 0.0;    // most negative eigenvalue of W_x - Gamma found
  double relative_min = 0.0;      // the same, relative to the largest |eigenvalue|
  std::string detail;
};

/// Checks the Holevo-Yuen-Kennedy-Lax conditions for a POVM and a rational
/// covariant cost under the uniform prior.
inline HolevoReport verify_holevo(const Povm& p, const CostFunction& f, double tol = kPsdTolerance) {
  const int N = p.N();
  StateBank bank(N, p.d(), static_cast<std::int64_t>(p.seed(0).dim()));
  if (!f.exact()) throw ContractError("Holevo verification needs a rational cost (delta or h)");
  if (!cost_is_covariant(f, N, &bank)) throw ContractError("cost '" + f.name() + "' is not permutation covariant");

  std::vector<ExactOperator> w_seed;
  for (int n = 0; 2 * n <= N; ++n) w_seed.push_back(risk_operator_exact(n, f, bank));
  auto w_of = [&](const Clustering& c) {
    const auto& s = w_seed[static_cast<std::size_t>(c.n)];
    return c.sigma.is_identity() ? s : s.conjugated(bank.image(c));
  };

  ExactOperator gamma(bank.basis().dim);
  for (const auto& c : p.clusterings()) gamma += w_of(c) * p.element(c);

  HolevoReport r;
  r.equality = gamma.is_hermitian();
  double worst = 0.0, worst_rel = 0.0;
  for (const auto& c : p.clusterings()) {
    const ExactOperator diff = w_of(c) - gamma;
    const ExactOperator e = p.element(c);
    if (!(diff * e).is_zero() || !(e * diff).is_zero()) {
      if (r.equality) r.detail = "equality fails at x = " + c.str();
      r.equality = false;
    }
    double scale = 0.0;
    const double m = min_eigenvalue(diff.to_eigen(), bank.sectors(), &scale);
    const double rel = scale > 0 ? m / scale : 0.0;
    if (rel < worst_rel) {
      worst_rel = rel;
      worst = m;
    }
  }
  r.min_eigenvalue = worst;
  r.relative_min = worst_rel;
  r.psd = worst_rel >= -tol;
  r.pass = r.equality && r.psd;
  if (r.detail.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "min eigenvalue %.3e (relative %.3e)", worst, worst_rel);
    r.detail = buf;
  }
  return r;
}

}  // namespace qclust
