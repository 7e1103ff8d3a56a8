#pragma once

// Composite Gauss-Legendre integration with panel doubling.

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "qclust/errors.hpp"

namespace qclust {

struct Quadrature {
  double value = 0.0;
  double change = 0.0;  // |I_k - I_{k-1}| at termination
  int panels = 0;
};

/// Integrates f over [a, b] on 1, 2, 4, ... equal panels with a 20-point
/// rule until successive estimates agree to `tol` (relative to max(1, |I|)).
/// Throws NumericError if the final disagreement exceeds `fail_tol`.
template <class F>
Quadrature integrate(const F& f, double a, double b, double tol = 1e-12, double fail_tol = 1e-10,
                     int max_doublings = 14) {
  using rule = boost::math::quadrature::gauss<double, 20>;
  auto composite = [&](int panels) {
    const double h = (b - a) / panels;
    double s = 0.0;
    for (int i = 0; i < panels; ++i) s += rule::integrate(f, a + i * h, a + (i + 1) * h);
    return s;
  };
  Quadrature q;
  double prev = composite(1);
  for (int k = 1, panels = 2; k <= max_doublings; ++k, panels *= 2) {
    const double cur = composite(panels);
    q.value = cur;
    q.change = std::abs(cur - prev);
    q.panels = panels;
    if (q.change <= tol * std::max(1.0, std::abs(cur))) return q;
    prev = cur;
  }
  if (q.change > fail_tol * std::max(1.0, std::abs(q.value)))
    throw NumericError("quadrature did not converge: successive estimates differ by " + std::to_string(q.change));
  return q;
}

}  // namespace qclust
