#pragma once

// Cost functions over clusterings, risk operators W_n, per-irrep spectra,
// generalized guess rules n(lambda) and the minimum average cost.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "qclust/basis.hpp"
#include "qclust/errors.hpp"
#include "qclust/exact_operator.hpp"
#include "qclust/hypotheses.hpp"
#include "qclust/numeric.hpp"
#include "qclust/rational.hpp"
#include "qclust/rep_core.hpp"

namespace qclust {

enum class CostKind { zero_one, hamming, trace_distance, infidelity };

inline constexpr double kTieTolerance = 1e-8;
inline constexpr double kConjectureTolerance = 1e-8;

struct CostFunction {
  CostKind kind = CostKind::zero_one;
  /// Rescaling f -> f / scale.
  Rational scale = 1;
  /// Optional user evaluator; replaces `kind` when set (treated as a float cost).
  std::function<double(const ClusterString&, const ClusterString&)> custom;

  bool exact() const { return !custom && (kind == CostKind::zero_one || kind == CostKind::hamming); }

  std::string name() const {
    if (custom) return "custom";
    switch (kind) {
      case CostKind::zero_one: return "delta";
      case CostKind::hamming: return "h";
      case CostKind::trace_distance: return "T";
      case CostKind::infidelity: return "I";
    }
    return "?";
  }
};

inline CostFunction parse_cost(const std::string& s) {
  CostFunction f;
  if (s == "delta" || s == "zero_one" || s == "01") f.kind = CostKind::zero_one;
  else if (s == "h" || s == "hamming") f.kind = CostKind::hamming;
  else if (s == "T" || s == "trace" || s == "trace_distance") f.kind = CostKind::trace_distance;
  else if (s == "I" || s == "infidelity") f.kind = CostKind::infidelity;
  else throw ContractError("unknown cost function '" + s + "' (use delta, h, T or I)");
  return f;
}

inline std::vector<CostFunction> all_costs() {
  std::vector<CostFunction> v(4);
  v[1].kind = CostKind::hamming;
  v[2].kind = CostKind::trace_distance;
  v[3].kind = CostKind::infidelity;
  return v;
}

/// h(x, x') = min(|x - x'|, |x - complement(x')|).
inline int hamming_distance(const ClusterString& a, const ClusterString& b) {
  require(a.size() == b.size(), "cluster strings differ in length");
  int diff = 0;
  for (int k = 0; k < a.size(); ++k) diff += a.bits[static_cast<std::size_t>(k)] != b.bits[static_cast<std::size_t>(k)];
  return std::min(diff, a.size() - diff);
}

/// Effective states of all clusterings of (N, d), exact and in double
/// precision, built from one seed per n by basis permutation.
class StateBank {
 public:
  StateBank(int N, int d, std::int64_t max_dim = kDefaultMaxDim)
      : N_(N), d_(d), basis_(N, d, max_dim), sectors_(basis_.type_sectors()) {
    for (int n = 0; 2 * n <= N; ++n) {
      exact_.push_back(effective_state(reference_clustering(N, n), d, max_dim));
      float_.push_back(exact_.back().to_eigen());
    }
  }

  int N() const { return N_; }
  int d() const { return d_; }
  const TensorBasis& basis() const { return basis_; }
  const Sectors& sectors() const { return sectors_; }

  std::vector<std::size_t> image(const Clustering& c) const { return basis_.permutation_image(c.sigma.image()); }

  ExactOperator exact_state(const Clustering& c) const {
    const auto& seed = exact_[static_cast<std::size_t>(c.n)];
    if (c.sigma.is_identity()) return seed;
    return seed.conjugated(image(c));
  }

  Eigen::MatrixXd float_state(const Clustering& c) const {
    const auto& seed = float_[static_cast<std::size_t>(c.n)];
    if (c.sigma.is_identity()) return seed;
    return conjugate(seed, image(c));
  }

  static Eigen::MatrixXd conjugate(const Eigen::MatrixXd& a, const std::vector<std::size_t>& img) {
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(a.rows(), a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0)
          r(static_cast<Eigen::Index>(img[static_cast<std::size_t>(i)]),
            static_cast<Eigen::Index>(img[static_cast<std::size_t>(j)])) = a(i, j);
    return r;
  }

 private:
  int N_, d_;
  TensorBasis basis_;
  Sectors sectors_;
  std::vector<ExactOperator> exact_;
  std::vector<Eigen::MatrixXd> float_;
};

/// Exact value of a rational cost (zero_one or hamming), rescaled.
inline Rational cost_value_exact(const CostFunction& f, const ClusterString& x, const ClusterString& y) {
  require(f.exact(), "cost '" + f.name() + "' has no exact value");
  Rational v = f.kind == CostKind::zero_one ? Rational(x.canonical() == y.canonical() ? 0 : 1)
                                            : Rational(hamming_distance(x, y));
  return v / f.scale;
}

/// Cost value in double precision. Operator-based costs need a StateBank.
inline double cost_value(const CostFunction& f, const Clustering& x, const Clustering& y,
                         const StateBank* bank = nullptr) {
  if (f.custom) return f.custom(x.canonical, y.canonical) / f.scale.get_d();
  if (f.exact()) return cost_value_exact(f, x.canonical, y.canonical).get_d();
  require(bank != nullptr, "operator-based costs need effective states");
  if (x == y) return 0.0;
  const Eigen::MatrixXd a = bank->float_state(x), b = bank->float_state(y);
  double v = f.kind == CostKind::trace_distance ? trace_norm(a - b, bank->sectors())
                                                : 1.0 - fidelity(a, b, bank->sectors());
  return v / f.scale.get_d();
}

/// Cost value for two strings of the same length; builds states on demand.
inline double cost_value(const CostFunction& f, const ClusterString& x, const ClusterString& y, int d,
                         std::int64_t max_dim = kDefaultMaxDim) {
  require(x.size() == y.size(), "cluster strings differ in length");
  if (f.custom || f.exact()) return cost_value(f, string_to_clustering(x), string_to_clustering(y));
  StateBank bank(x.size(), d, max_dim);
  return cost_value(f, string_to_clustering(x), string_to_clustering(y), &bank);
}

/// Samples (tau, x, x') and compares f(tau x, tau x') with f(x, x').
/// Returns false on the first mismatch beyond a relative 1e-9.
inline bool cost_is_covariant(const CostFunction& f, int N, const StateBank* bank, int samples = 48,
                              std::uint64_t seed = 20240607) {
  std::mt19937_64 rng(seed);
  std::vector<int> perm(static_cast<std::size_t>(N));
  ClusterString x, y;
  x.bits.resize(static_cast<std::size_t>(N));
  y.bits.resize(static_cast<std::size_t>(N));
  for (int s = 0; s < samples; ++s) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int k = 0; k < N; ++k) {
      x.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(rng() & 1u);
      y.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(rng() & 1u);
    }
    Permutation tau(perm);
    const double a = cost_value(f, string_to_clustering(x), string_to_clustering(y), bank);
    const double b = cost_value(f, string_to_clustering(apply(tau, x)), string_to_clustering(apply(tau, y)), bank);
    if (std::abs(a - b) > 1e-9 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
  }
  return true;
}

inline void require_covariant(const CostFunction& f, int N, const StateBank* bank) {
  if (!cost_is_covariant(f, N, bank))
    throw StructureError("cost '" + f.name() + "' is not permutation covariant: f(tau x, tau x') != f(x, x')");
}

/// Uniform prior eta = 2^{1-N}.
inline Rational uniform_prior(int N) { return make_rational(BigInt(1), ipow(2, static_cast<unsigned long>(N - 1))); }

/// W_n = sum_x' f(x_n, x') eta rho_x' for the reference clustering (n, e),
/// exact (rational costs only).
inline ExactOperator risk_operator_exact(int n, const CostFunction& f, const StateBank& bank) {
  const int N = bank.N();
  const auto ref = reference_clustering(N, n);
  const Rational eta = uniform_prior(N);
  ExactOperator w(bank.basis().dim);
  for (const auto& c : enumerate_clusterings(N)) {
    Rational v = cost_value_exact(f, ref.canonical, c.canonical);
    if (sgn(v) == 0) continue;
    w.add_scaled(v * eta, bank.exact_state(c));
  }
  return w;
}

/// W_n in double precision, for any cost.
inline Eigen::MatrixXd risk_operator(int n, const CostFunction& f, const StateBank& bank) {
  const int N = bank.N();
  const auto ref = reference_clustering(N, n);
  const double eta = uniform_prior(N).get_d();
  const auto dim = static_cast<Eigen::Index>(bank.basis().dim);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& c : enumerate_clusterings(N)) {
    double v = cost_value(f, ref, c, &bank);
    if (v == 0.0) continue;
    w += (v * eta) * bank.float_state(c);
  }
  return w;
}

/// Max-norm of [W, E_ab] over the collective generators E_ab = sum_k |a><b|_k.
/// Zero iff W commutes with U^{\otimes N} for all U.
inline double collective_commutator_norm(const Eigen::MatrixXd& w, const TensorBasis& basis) {
  const int N = basis.n_sites, d = basis.local_dim;
  double worst = 0.0;
  const auto D = static_cast<Eigen::Index>(basis.dim);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      if (a == b) continue;
      // E|j> = sum over sites holding b of |j with that b replaced by a>
      Eigen::MatrixXd we = Eigen::MatrixXd::Zero(D, D), ew = Eigen::MatrixXd::Zero(D, D);
      for (std::size_t j = 0; j < basis.dim; ++j) {
        auto dg = basis.digits(j);
        for (int k = 0; k < N; ++k) {
          if (dg[static_cast<std::size_t>(k)] != b) continue;
          dg[static_cast<std::size_t>(k)] = a;
          const auto i = static_cast<Eigen::Index>(basis.index(dg));
          dg[static_cast<std::size_t>(k)] = b;
          const auto jj = static_cast<Eigen::Index>(j);
          we.col(jj) += w.col(i);  // (W E)(:, j) = W(:, i)
          ew.row(i) += w.row(jj);  // (E W)(i, :) += W(j, :)
        }
      }
      worst = std::max(worst, (we - ew).cwiseAbs().maxCoeff());
    }
  return worst;
}

/// Orthonormal bases of H_lambda restricted to each type sector.
struct IrrepBlock {
  Partition lambda;
  BigInt s;   // SU(d) dimension, multiplicity of the S_N irrep
  BigInt nu;  // S_N dimension
  ExactOperator projector;
  std::vector<std::pair<std::size_t, Eigen::MatrixXd>> bases;  // (sector index, Q)
};

inline IrrepBlock make_irrep_block(const Partition& lambda, const StateBank& bank,
                                   std::int64_t max_dim = kDefaultMaxDim) {
  IrrepBlock blk;
  blk.lambda = lambda;
  blk.s = dim_unitary_irrep(lambda, bank.d());
  blk.nu = dim_symgroup_irrep(lambda);
  blk.projector = isotypic_projector(lambda, bank.d(), bank.N(), max_dim);
  const Eigen::MatrixXd p = blk.projector.to_eigen();
  std::size_t total = 0;
  for (std::size_t s = 0; s < bank.sectors().size(); ++s) {
    Eigen::MatrixXd q = range_basis(sector_block(p, bank.sectors()[s]));
    if (q.cols() == 0) continue;
    total += static_cast<std::size_t>(q.cols());
    blk.bases.emplace_back(s, std::move(q));
  }
  if (BigInt(static_cast<unsigned long>(total)) != blk.s * blk.nu)
    throw NumericError("isotypic block of " + lambda.str() + " has the wrong dimension");
  return blk;
}

/// Sorted eigenvalues of W restricted to H_lambda (all s*nu of them).
inline std::vector<double> block_spectrum(const Eigen::MatrixXd& w, const IrrepBlock& blk, const StateBank& bank) {
  std::vector<double> ev;
  for (const auto& [s, q] : blk.bases) {
    Eigen::MatrixXd m = q.transpose() * sector_block(w, bank.sectors()[s]) * q;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Eigenvalues theta_{lambda,a} of omega_lambda, ascending: the spectrum of
/// W on H_lambda with each value's multiplicity divided by s_lambda. Throws
/// StructureError if W is not U^{\otimes N}-invariant or a multiplicity is
/// not a multiple of s_lambda.
inline std::vector<double> block_eigenvalues(const Eigen::MatrixXd& w, const IrrepBlock& blk, const StateBank& bank,
                                             double tol = kTieTolerance) {
  const double wscale = std::max(1e-300, w.cwiseAbs().maxCoeff());
  if (collective_commutator_norm(w, bank.basis()) > 1e-9 * wscale)
    throw StructureError("operator does not commute with the collective U(d) action");
  const auto ev = block_spectrum(w, blk, bank);
  if (ev.empty()) return {};
  const double scale = std::max({std::abs(ev.front()), std::abs(ev.back()), wscale});
  const std::size_t s = blk.s.get_ui();
  std::vector<double> theta;
  for (std::size_t i = 0; i < ev.size();) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < ev.size() && ev[j] - ev[i] <= tol * scale) sum += ev[j++];
    const std::size_t count = j - i;
    if (count % s != 0)
      throw StructureError("eigenvalue multiplicity " + std::to_string(count) + " in block " + blk.lambda.str() +
                           " is not a multiple of s = " + std::to_string(s));
    theta.insert(theta.end(), count / s, sum / static_cast<double>(count));
    i = j;
  }
  return theta;
}

struct GuessEntry {
  Partition lambda;
  BigInt s, nu;
  std::vector<double> theta_min;           // theta^n_{lambda,1} for n = 0..N/2
  std::vector<std::vector<double>> theta;  // full deduplicated spectra per n
  std::vector<int> guesses;                // argmin set

  /// Guess used to build a POVM: smallest tied n on which rho_n has support.
  int chosen() const {
    for (int n : guesses)
      if (lambda.part(1) <= n && lambda.length() <= 2) return n;
    return guesses.front();
  }

  std::string guesses_str() const {
    std::string s;
    for (std::size_t i = 0; i < guesses.size(); ++i) s += (i ? "," : "") + std::to_string(guesses[i]);
    return s;
  }
};

struct GuessTable {
  int N = 0, d = 0;
  CostFunction cost;
  std::vector<GuessEntry> entries;

  const GuessEntry& at(const Partition& lambda) const {
    for (const auto& e : entries)
      if (e.lambda == lambda) return e;
    throw ContractError("irrep " + lambda.str() + " not in guess table");
  }
};

/// Precomputed data shared by guess tables and conjecture checks.
struct CostAnalysis {
  const StateBank* bank = nullptr;
  CostFunction cost;
  std::vector<Eigen::MatrixXd> w;  // W_n for n = 0..N/2
  std::vector<IrrepBlock> blocks;  // every lambda with l(lambda) <= d
};

inline CostAnalysis analyze_cost(const CostFunction& f, const StateBank& bank, std::int64_t max_dim = kDefaultMaxDim) {
  require_covariant(f, bank.N(), &bank);
  CostAnalysis a;
  a.bank = &bank;
  a.cost = f;
  for (int n = 0; 2 * n <= bank.N(); ++n) a.w.push_back(risk_operator(n, f, bank));
  for (const auto& lambda : enumerate_partitions(bank.N(), bank.d())) a.blocks.push_back(make_irrep_block(lambda, bank, max_dim));
  return a;
}

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

inline GuessTable guess_rule_general(const CostAnalysis& a) {
  GuessTable t;
  t.N = a.bank->N();
  t.d = a.bank->d();
  t.cost = a.cost;
  for (const auto& blk : a.blocks) {
    GuessEntry e;
    e.lambda = blk.lambda;
    e.s = blk.s;
    e.nu = blk.nu;
    for (const auto& w : a.w) {
      e.theta.push_back(block_eigenvalues(w, blk, *a.bank));
      e.theta_min.push_back(e.theta.back().front());
    }
    const double best = *std::min_element(e.theta_min.begin(), e.theta_min.end());
    // every W_n is PSD, so a zero minimum is an exact tie regardless of scale
    for (std::size_t n = 0; n < e.theta_min.size(); ++n)
      if (nearly_equal(e.theta_min[n], best, kTieTolerance) ||
          (std::abs(best) < 1e-14 && std::abs(e.theta_min[n]) < 1e-14))
        e.guesses.push_back(static_cast<int>(n));
    t.entries.push_back(std::move(e));
  }
  return t;
}

inline GuessTable guess_rule_general(const CostFunction& f, int N, int d, std::int64_t max_dim = kDefaultMaxDim) {
  StateBank bank(N, d, max_dim);
  return guess_rule_general(analyze_cost(f, bank, max_dim));
}

/// f_bar = sum_lambda s_lambda nu_lambda theta^{n(lambda)}_{lambda,1}.
inline double min_average_cost(const GuessTable& t) {
  double s = 0.0;
  for (const auto& e : t.entries) s += e.s.get_d() * e.nu.get_d() * e.theta_min[static_cast<std::size_t>(e.guesses.front())];
  return s;
}

/// Exact minimum average cost for rational costs. On each H_lambda the
/// optimal value s*nu*theta equals nu * tr(W_n Omega^n_lambda) when Omega is
/// in the minimal eigenspace, which is cross-checked against the float value.
inline Rational min_average_cost_exact(const CostFunction& f, const StateBank& bank, const GuessTable& t,
                                       std::int64_t max_dim = kDefaultMaxDim) {
  require(f.exact(), "exact minimum cost needs a rational cost");
  std::map<int, ExactOperator> w;
  Rational total = 0;
  for (const auto& e : t.entries) {
    const int n = e.chosen();
    if (!w.count(n)) w.emplace(n, risk_operator_exact(n, f, bank));
    const ExactOperator omega = omega_projector(reference_clustering(bank.N(), n), e.lambda, bank.d(), max_dim);
    Rational part;
    if (!omega.is_zero()) {
      part = Rational(e.nu) * trace_product(w.at(n), omega);
    } else {
      const auto& th = e.theta[static_cast<std::size_t>(n)];
      if (!nearly_equal(th.front(), th.back(), kTieTolerance) && std::abs(th.back()) > 1e-14)
        throw NumericError("block " + e.lambda.str() + " has no support and a non-scalar spectrum");
      part = trace_product(w.at(n), isotypic_projector(e.lambda, bank.d(), bank.N(), max_dim));
    }
    const double expect = e.s.get_d() * e.nu.get_d() * e.theta_min[static_cast<std::size_t>(n)];
    if (std::abs(part.get_d() - expect) > 1e-8 * std::max(1.0, std::abs(expect)))
      throw NumericError("exact and float block costs disagree for " + e.lambda.str());
    total += part;
  }
  return total;
}

struct ConjectureResult {
  Partition lambda;
  int n = 0;
  bool pass = false;
  double residual = 0.0;  // largest component of supp(Omega) outside V_1
  std::string detail;
};

/// For every lambda and every optimal guess n(lambda), checks that the range
/// of Omega^n_lambda lies in the minimal eigenspace V_1 of W_n on H_lambda.
inline std::vector<ConjectureResult> check_conjecture(const CostAnalysis& a, const GuessTable& t,
                                                      double tol = kConjectureTolerance,
                                                      std::int64_t max_dim = kDefaultMaxDim) {
  const StateBank& bank = *a.bank;
  std::vector<ConjectureResult> out;
  for (std::size_t b = 0; b < a.blocks.size(); ++b) {
    const auto& blk = a.blocks[b];
    const auto& entry = t.entries[b];
    for (int n : entry.guesses) {
      ConjectureResult r;
      r.lambda = blk.lambda;
      r.n = n;
      const Eigen::MatrixXd& w = a.w[static_cast<std::size_t>(n)];
      const Eigen::MatrixXd omega =
          omega_projector(reference_clustering(bank.N(), n), blk.lambda, bank.d(), max_dim).to_eigen();
      const auto& th = entry.theta[static_cast<std::size_t>(n)];
      const double scale = std::max({std::abs(th.front()), std::abs(th.back()), 1e-300});
      const double cut = th.front() + tol * scale;
      bool any_support = false;
      for (const auto& [s, q] : blk.bases) {
        const auto& idx = bank.sectors()[s];
        Eigen::MatrixXd basis = range_basis(sector_block(omega, idx));
        if (basis.cols() == 0) continue;
        any_support = true;
        Eigen::MatrixXd m = q.transpose() * sector_block(w, idx) * q;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
        if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
        Eigen::Index k = 0;
        while (k < es.eigenvalues().size() && es.eigenvalues()(k) <= cut) ++k;
        const Eigen::MatrixXd v1 = es.eigenvectors().leftCols(k);
        const Eigen::MatrixXd c = q.transpose() * basis;
        const Eigen::MatrixXd rest = c - v1 * (v1.transpose() * c);
        r.residual = std::max(r.residual, rest.size() ? rest.cwiseAbs().maxCoeff() : 0.0);
      }
      if (!any_support) {
        r.pass = nearly_equal(th.front(), th.back(), tol) || std::abs(th.back()) < 1e-14;
        r.detail = r.pass ? "no support; block is scalar" : "guess has no support in this irrep";
      } else {
        r.pass = r.residual <= tol;
        char buf[64];
        std::snprintf(buf, sizeof buf, "residual %.3e", r.residual);
        r.detail = buf;
      }
      out.push_back(std::move(r));
    }
  }
  return out;
}

struct Heatmap {
  std::vector<std::string> labels;
  std::vector<std::vector<int>> h;
};

inline constexpr int kMaxHeatmapN = 12;

/// h(x, x') over all canonical clusterings ordered by n, then string.
inline Heatmap hamming_heatmap(int N) {
  if (N > kMaxHeatmapN) throw GuardError("heat map limited to N <= " + std::to_string(kMaxHeatmapN));
  const auto cl = enumerate_clusterings(N);
  Heatmap m;
  for (const auto& c : cl) m.labels.push_back(c.str());
  m.h.assign(cl.size(), std::vector<int>(cl.size(), 0));
  for (std::size_t i = 0; i < cl.size(); ++i)
    for (std::size_t j = 0; j < cl.size(); ++j) m.h[i][j] = hamming_distance(cl[i].canonical, cl[j].canonical);
  return m;
}

}  // namespace qclust
