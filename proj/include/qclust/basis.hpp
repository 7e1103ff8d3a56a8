#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qclust/errors.hpp"
#include "qclust/rational.hpp"

namespace qclust {

/// Default envelope for dense operators on (C^d)^{\otimes N}.
inline constexpr std::int64_t kDefaultMaxDim = 4096;

/// Computational basis of (C^d)^{\otimes N}; index = sum_k i_k d^{N-1-k}, so
/// the first tensor factor is the most significant digit.
struct TensorBasis {
  int n_sites = 0;
  int local_dim = 0;
  std::size_t dim = 0;

  TensorBasis(int N, int d, std::int64_t max_dim = kDefaultMaxDim) : n_sites(N), local_dim(d) {
    require(N >= 1, "N must be >= 1");
    require(d >= 1, "d must be >= 1");
    const std::int64_t D = checked_pow(d, N, max_dim);
    if (D > max_dim)
      throw GuardError("d^N = " + std::to_string(d) + "^" + std::to_string(N) +
                       " exceeds the operator size guard " + std::to_string(max_dim));
    dim = static_cast<std::size_t>(D);
  }

  std::vector<int> digits(std::size_t index) const {
    std::vector<int> dg(static_cast<std::size_t>(n_sites));
    for (int k = n_sites - 1; k >= 0; --k) {
      dg[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(local_dim));
      index /= static_cast<std::size_t>(local_dim);
    }
    return dg;
  }

  std::size_t index(const std::vector<int>& dg) const {
    std::size_t idx = 0;
    for (int v : dg) idx = idx * static_cast<std::size_t>(local_dim) + static_cast<std::size_t>(v);
    return idx;
  }

  /// Basis image of U_sigma, where U_sigma moves the content of site k to
  /// site sigma[k] (0-based).
  std::vector<std::size_t> permutation_image(const std::vector<int>& sigma) const {
    require(static_cast<int>(sigma.size()) == n_sites, "permutation length must equal N");
    std::vector<std::size_t> img(dim);
    std::vector<int> out(static_cast<std::size_t>(n_sites));
    for (std::size_t i = 0; i < dim; ++i) {
      auto dg = digits(i);
      for (int k = 0; k < n_sites; ++k)
        out[static_cast<std::size_t>(sigma[static_cast<std::size_t>(k)])] = dg[static_cast<std::size_t>(k)];
      img[i] = index(out);
    }
    return img;
  }

  /// Basis indices grouped by their symbol-count vector ("type"). Every
  /// operator commuting with diagonal U^{\otimes N} is block diagonal here.
  std::vector<std::vector<std::size_t>> type_sectors() const {
    std::map<std::vector<int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < dim; ++i) {
      std::vector<int> counts(static_cast<std::size_t>(local_dim), 0);
      for (int v : digits(i)) ++counts[static_cast<std::size_t>(v)];
      groups[counts].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out;
    out.reserve(groups.size());
    for (auto& [key, idx] : groups) out.push_back(std::move(idx));
    return out;
  }
};

}  // namespace qclust
