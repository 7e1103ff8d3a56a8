#pragma once

// Double-precision helpers for operators that are block diagonal in the
// type sectors of (C^d)^{\otimes N}.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qclust/errors.hpp"

namespace qclust {

using Sectors = std::vector<std::vector<std::size_t>>;

inline Eigen::MatrixXd sector_block(const Eigen::MatrixXd& a, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd b(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      b(i, j) = a(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                  static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
  return b;
}

/// Eigenvalues of a symmetric matrix, computed sector by sector, ascending.
inline std::vector<double> sector_eigenvalues(const Eigen::MatrixXd& a, const Sectors& sectors) {
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(a.rows()));
  for (const auto& s : sectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sector_block(a, s), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i));
  }
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Trace norm sum |eigenvalue| of a symmetric matrix.
inline double trace_norm(const Eigen::MatrixXd& a, const Sectors& sectors) {
  double t = 0.0;
  for (double v : sector_eigenvalues(a, sectors)) t += std::abs(v);
  return t;
}

/// Eigenvalues below this fraction of the largest are treated as zero before
/// taking square roots, so rounding noise on a null space stays at zero.
inline constexpr double kNullEigenvalue = 1e-12;

inline Eigen::VectorXd clamp_null(const Eigen::VectorXd& ev) {
  const double cut = kNullEigenvalue * std::max(1e-300, ev.cwiseAbs().maxCoeff());
  return ev.unaryExpr([cut](double v) { return v > cut ? v : 0.0; });
}

/// Square root of a PSD matrix by spectral decomposition, with negative and
/// null eigenvalues clamped to zero.
inline Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  Eigen::VectorXd s = clamp_null(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
}

/// Uhlmann fidelity F = (tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double fidelity(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const Sectors& sectors) {
  double root = 0.0;
  for (const auto& s : sectors) {
    Eigen::MatrixXd sa = sqrt_psd(sector_block(a, s));
    Eigen::MatrixXd m = sa * sector_block(b, s) * sa;
    m = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
    const Eigen::VectorXd ev = clamp_null(es.eigenvalues());
    for (Eigen::Index i = 0; i < ev.size(); ++i) root += std::sqrt(ev(i));
  }
  return root * root;
}

/// Orthonormal basis of the range of a symmetric projector-like matrix
/// (eigenvectors with eigenvalue above one half).
inline Eigen::MatrixXd range_basis(const Eigen::MatrixXd& p) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
  if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXd q(p.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]);
  return q;
}

/// Smallest eigenvalue relative to the largest magnitude, for PSD checks.
inline double min_eigenvalue(const Eigen::MatrixXd& a, const Sectors& sectors, double* scale = nullptr) {
  auto ev = sector_eigenvalues(a, sectors);
  if (ev.empty()) return 0.0;
  if (scale) *scale = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return ev.front();
}

}  // namespace qclust
