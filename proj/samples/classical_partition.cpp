#include <iostream>

#include "qclust/classical.hpp"

int main() {
  const int d = 3;
  const auto r = qclust::parse_sample("112321223112", d);
  const auto c = qclust::optimal_guess_unknown(r, d);
  std::cout << "data    112321223112\nguess   " << c.canonical.str() << "\n";
  for (int N = 2; N <= 8; ++N)
    std::cout << "N=" << N << "  P_s=" << qclust::success_exact_unknown(N, d).get_str() << "\n";
}
