#include <iostream>

#include "qclust/optimal_povm.hpp"

int main() {
  for (int N = 2; N <= 10; ++N) {
    const qclust::Rational p = qclust::success_probability_exact(N, 2);
    std::cout << "N=" << N << "  P_s=" << p.get_str() << " (" << p.get_d() << ")  asymptote="
              << qclust::success_probability_asymptotic(N, 2, qclust::Regime::combined) << "\n";
  }
}
