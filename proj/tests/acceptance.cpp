// Acceptance gate: one PASS/FAIL line per criterion.
//
// Usage: acceptance [--expect-fail 7,10]
// Exit status is 0 when the set of failing criteria equals the expected set
// (empty by default), so known, documented discrepancies do not mask new ones.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qclust/qclust.hpp"

using namespace qclust;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail.clear();
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string fmt(double v, const char* f = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool round3(double v, double target) { return std::lround(v * 1000.0) == std::lround(target * 1000.0); }

Outcome criterion1() {
  Outcome o;
  std::vector<std::pair<int, int>> cases;
  for (int N = 1; N <= 8; ++N) cases.emplace_back(N, 2);
  for (int N = 1; N <= 5; ++N) cases.emplace_back(N, 3);
  for (int N = 1; N <= 4; ++N) cases.emplace_back(N, 4);
  for (auto [N, d] : cases) {
    const Povm p = build_povm(N, d);
    const Rational exact = success_probability_exact(N, d);
    const Rational oracle = oracle::quantum_success(p);
    if (exact != oracle) o.fail("N=" + std::to_string(N) + " d=" + std::to_string(d) + ": " + to_string(exact) + " vs " + to_string(oracle));
    if (!is_complete(p)) o.fail("POVM incomplete at N=" + std::to_string(N) + " d=" + std::to_string(d));
  }
  o.note(std::to_string(cases.size()) + " (N,d) pairs equal as rationals, e.g. P_s(8,2) = " +
         to_string(success_probability_exact(8, 2)));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const Rational a = success_probability_exact(2, 2), b = success_probability_exact(4, 2);
  if (a != Rational(5, 8)) o.fail("P_s(2,2) = " + to_string(a));
  if (b != Rational(169, 576)) o.fail("P_s(4,2) = " + to_string(b));
  o.note("P_s(2,2) = " + to_string(a) + ", P_s(4,2) = " + to_string(b));
  return o;
}

Outcome criterion3() {
  Outcome o;
  std::vector<double> dev;
  for (int N : {100, 200, 400}) {
    const double r = success_probability_exact(N, 2).get_d() / success_probability_asymptotic(N, 2, Regime::combined);
    dev.push_back(std::abs(r - 1.0));
  }
  if (!(dev[0] > dev[1] && dev[1] > dev[2])) o.fail("deviation not decreasing");
  if (dev[2] >= 0.05) o.fail("deviation at N=400 is " + fmt(dev[2]));
  o.note("|ratio-1| = " + fmt(dev[0]) + ", " + fmt(dev[1]) + ", " + fmt(dev[2]));
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::vector<std::pair<int, int>> cases;
  for (int N = 2; N <= 6; ++N) cases.emplace_back(N, 2);
  for (int N = 2; N <= 4; ++N) cases.emplace_back(N, 3);
  double worst = 0.0;
  for (auto [N, d] : cases) {
    const auto h = verify_holevo(build_povm(N, d), CostFunction{});
    worst = std::min(worst, h.relative_min);
    if (!h.pass) o.fail("N=" + std::to_string(N) + " d=" + std::to_string(d) + ": " + h.detail);
  }
  int rejected = 0;
  for (auto [N, d] : cases) rejected += !verify_holevo(perturbed_povm(N, d), CostFunction{}).pass;
  if (rejected != static_cast<int>(cases.size())) o.fail("perturbed POVM accepted in " + std::to_string(cases.size() - rejected) + " cases");
  o.note("equality exact and PSD (worst relative eigenvalue " + fmt(worst, "%.2e") + ") in " + std::to_string(cases.size()) +
         " cases; perturbed POVM rejected in all");
  return o;
}

// Table I, rows delta, h, T, I, columns lambda = (N,0), (N-1,1), ...
const std::map<std::string, std::vector<std::vector<std::string>>>& table_one() {
  static const std::map<std::string, std::vector<std::vector<std::string>>> t = {
      {"delta", {{"0", "1", "2"}, {"0", "1", "2"}, {"0", "1", "2", "3"}, {"0", "1", "2", "3"}, {"0", "1", "2", "3", "4"}}},
      {"h", {{"0", "2", "2"}, {"0", "2", "2"}, {"0", "3", "2,3", "3"}, {"0", "3", "3", "3"}, {"0", "4", "4", "4", "4"}}},
      {"T", {{"1", "1", "2"}, {"1", "1", "2"}, {"1", "1", "2", "3"}, {"1", "2", "2", "3"}, {"1", "2", "3", "3", "4"}}},
      {"I", {{"0", "1", "2"}, {"0", "1", "2"}, {"0", "1", "2", "3"}, {"0", "1", "3", "3"}, {"0", "1", "3", "4", "4"}}},
  };
  return t;
}

void criteria5and6(Outcome& c5, Outcome& c6, double& t5, double& t6) {
  int checked = 0, conj = 0;
  double worst = 0.0;
  for (int N = 4; N <= 8; ++N) {
    const StateBank bank(N, 2);
    for (const auto& f : all_costs()) {
      auto t0 = std::chrono::steady_clock::now();
      const auto a = analyze_cost(f, bank);
      const GuessTable t = guess_rule_general(a);
      const auto& row = table_one().at(f.name())[static_cast<std::size_t>(N - 4)];
      std::size_t k = 0;
      for (const auto& e : t.entries) {
        if (e.lambda.length() > 2) continue;
        ++checked;
        if (k >= row.size() || e.guesses_str() != row[k]) {
          c5.fail(f.name() + " N=" + std::to_string(N) + " " + e.lambda.str() + ": " + e.guesses_str());
        }
        ++k;
      }
      auto t1 = std::chrono::steady_clock::now();
      for (const auto& r : check_conjecture(a, t)) {
        ++conj;
        worst = std::max(worst, r.residual);
        if (!r.pass) c6.fail(f.name() + " N=" + std::to_string(N) + " " + r.lambda.str() + " n=" + std::to_string(r.n) + ": " + r.detail);
      }
      auto t2 = std::chrono::steady_clock::now();
      const double analysis = std::chrono::duration<double>(t1 - t0).count();
      t5 += analysis;
      t6 += analysis + std::chrono::duration<double>(t2 - t1).count();
    }
  }
  c5.note(std::to_string(checked) + " entries match, tie {2,3} at (h, 6, (4,2)) reproduced");
  c6.note(std::to_string(conj) + " (cost, N, irrep, guess) cases, largest residual " + fmt(worst, "%.2e"));
}

Outcome criterion7() {
  Outcome o;
  const double unknown_target[] = {0.250, 0.176, 0.130};
  const double known_target[] = {0.283, 0.210, 0.160};
  if (success_exact_unknown(2, 3) != Rational(7, 12)) o.fail("unknown N=2 = " + to_string(success_exact_unknown(2, 3)));
  if (success_exact_unknown(3, 3) != Rational(11, 30)) o.fail("unknown N=3 = " + to_string(success_exact_unknown(3, 3)));
  if (average_known_classical_exact(2, 3) != Rational(3, 5)) o.fail("known N=2 = " + to_string(average_known_classical_exact(2, 3)));
  if (average_known_classical_exact(3, 3) != Rational(2, 5)) o.fail("known N=3 = " + to_string(average_known_classical_exact(3, 3)));
  std::string vals;
  for (int N = 4; N <= 6; ++N) {
    const double u = success_exact_unknown(N, 3).get_d(), k = average_known_classical_exact(N, 3).get_d();
    if (!round3(u, unknown_target[N - 4])) o.fail("unknown N=" + std::to_string(N) + " = " + fmt(u, "%.5f") + " vs " + fmt(unknown_target[N - 4], "%.3f"));
    if (!round3(k, known_target[N - 4])) o.fail("known N=" + std::to_string(N) + " = " + fmt(k, "%.5f") + " vs " + fmt(known_target[N - 4], "%.3f"));
    vals += (N > 4 ? ", " : "") + fmt(u, "%.3f") + "/" + fmt(k, "%.3f");
  }
  o.note("7/12, 11/30, 3/5, 2/5 exact; unknown/known N=4..6: " + vals);
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (int N = 1; N <= 12; ++N) {
    const Rational a = success_exact_unknown(N, 2), b = oracle::classical_d2(N);
    if (a != b) o.fail("N=" + std::to_string(N) + ": " + to_string(a) + " vs " + to_string(b));
  }
  o.note("exact equality for N = 1..12");
  return o;
}

Outcome criterion9() {
  Outcome o;
  int count = 0;
  for (int d : {2, 3})
    for (int N = 1; N <= (d == 2 ? 8 : 6); ++N) {
      const Rational a = success_exact_unknown(N, d), b = oracle::classical_bruteforce(N, d);
      ++count;
      if (a != b) o.fail("N=" + std::to_string(N) + " d=" + std::to_string(d) + ": " + to_string(a) + " vs " + to_string(b));
    }
  o.note(std::to_string(count) + " (N,d) pairs equal as rationals");
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (int d : {2, 3}) {
    const double r = success_exact_unknown(200, d).get_d() / success_asymptotic_unknown(200, d);
    const std::string s = "d=" + std::to_string(d) + " ratio " + fmt(r, "%.5f");
    if (std::abs(r - 1.0) >= 0.15) o.fail(s + " (|ratio-1| = " + fmt(std::abs(r - 1.0), "%.4f") + " >= 0.15)");
    else o.note(s);
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  int count = 0;
  for (int N = 1; N <= 10; ++N)
    for (int d = 1; d <= 5; ++d) {
      BigInt sum = 0;
      for (const auto& lam : enumerate_partitions(N, d)) sum += dim_unitary_irrep(lam, d) * dim_symgroup_irrep(lam);
      ++count;
      if (sum != oracle::power(d, N)) o.fail("sum s nu at N=" + std::to_string(N) + " d=" + std::to_string(d));
    }
  for (int total = 1; total <= 12; ++total)
    for (int n = 0; 2 * n <= total; ++n) {
      const int nb = total - n;
      for (int d = 2; d <= 5; ++d) {
        BigInt rhs = 0;
        for (int i = 0; i <= n; ++i) rhs += dim_unitary_two_row(total - i, i, d);
        ++count;
        if (oracle::choose(nb + d - 1, d - 1) * oracle::choose(n + d - 1, d - 1) != rhs)
          o.fail("symmetric product at n=" + std::to_string(n) + " nbar=" + std::to_string(nb) + " d=" + std::to_string(d));
      }
      BigInt rhs = 0;
      for (int i = 0; i <= n; ++i) rhs += dim_symgroup_two_row(total - i, i);
      ++count;
      if (oracle::choose(total, n) != rhs) o.fail("binomial identity at n=" + std::to_string(n) + " nbar=" + std::to_string(nb));
    }
  o.note(std::to_string(count) + " identities hold exactly");
  return o;
}

Outcome criterion12() {
  Outcome o;
  constexpr std::uint64_t samples = 1000000;
  int count = 0;
  double worst_z = 0.0;
  for (int d : {2, 3}) {
    const auto vecs = moment_vectors(d, 3);
    for (PriorSampler s : {PriorSampler::simplex, PriorSampler::haar}) {
      const auto est = empirical_moments(d, 3, s, samples, 1000 + 10 * d + (s == PriorSampler::haar));
      for (std::size_t i = 0; i < vecs.size(); ++i) {
        ++count;
        // Dirichlet normalization (d-1)! prod n_s! / (d-1+sum n)!
        BigInt num = oracle::fact(d - 1);
        int tot = 0;
        for (int v : vecs[i]) {
          num *= oracle::fact(v);
          tot += v;
        }
        const double exact = Rational(num, oracle::fact(d - 1 + tot)).get_d();
        worst_z = std::max(worst_z, std::abs(est[i].mean - exact) / est[i].std_error);
        if (!est[i].within(exact))
          o.fail((s == PriorSampler::simplex ? "simplex" : "haar") + std::string(" d=") + std::to_string(d) + " moment " +
                 std::to_string(i) + " off by " + fmt(std::abs(est[i].mean - exact) / est[i].std_error, "%.2f") + " sigma");
      }
    }
    const auto a = sample_first_component(d, PriorSampler::simplex, 100000, 77 + d);
    const auto b = sample_first_component(d, PriorSampler::haar, 100000, 99 + d);
    const double pv = ks_pvalue(ks_statistic(a, b), a.size(), b.size());
    if (pv < 0.001) o.fail("KS rejected at d=" + std::to_string(d) + " (p = " + fmt(pv, "%.2e") + ")");
    o.note("KS p-value d=" + std::to_string(d) + ": " + fmt(pv, "%.3f"));
  }
  o.note(std::to_string(count) + " moments within 4 sigma (max |z| = " + fmt(worst_z, "%.2f") + ")");
  return o;
}

Outcome criterion13() {
  Outcome o;
  const Estimate e = helstrom_simulate(0.5, 4, 100000, 2024);
  const double ref = success_known_pure(0.5, 4);
  if (!e.within(ref)) o.fail("Helstrom estimate " + fmt(e.mean) + " +- " + fmt(e.std_error) + " vs " + fmt(ref));
  else o.note("Helstrom " + fmt(e.mean, "%.4f") + " +- " + fmt(e.std_error, "%.4f") + " vs " + fmt(ref, "%.4f"));
  for (int d : {2, 3}) {
    const double r = average_success_known(200, d, KnownVariant::pure).value * 200.0 / (4.0 * (d - 1));
    if (r < 0.9 || r > 1.1) o.fail("d=" + std::to_string(d) + " scaled average " + fmt(r));
    else o.note("d=" + std::to_string(d) + " scaled average " + fmt(r, "%.4f"));
  }
  double worst = 0.0;
  for (int d = 2; d <= 5; ++d)
    for (int N : {1, 2, 3, 4, 5, 6, 8, 10, 20, 50, 100, 200}) {
      worst = std::max(worst, std::abs(average_success_known(N, d, KnownVariant::pure).value - oracle::known_average(N, d, false).get_d()));
      worst = std::max(worst, std::abs(average_success_known(N, d, KnownVariant::clustering).value - oracle::known_average(N, d, true).get_d()));
      worst = std::max(worst, std::abs(unambiguous_average(N, d).value - oracle::unambiguous_average(N, d).get_d()));
    }
  if (worst > 1e-10) o.fail("quadrature vs Beta integrals differ by " + fmt(worst, "%.2e"));
  else o.note("quadrature vs Beta integrals max difference " + fmt(worst, "%.2e"));
  return o;
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) expected = parse_list(argv[++i]);
    else {
      std::cerr << "usage: acceptance [--expect-fail 7,10]\n";
      return 1;
    }
  }

  std::set<int> failed;
  auto report = [&](int k, const Outcome& o, double seconds, double limit) {
    Outcome r = o;
    if (seconds > limit) r.fail("runtime " + fmt(seconds, "%.1f") + " s exceeds " + fmt(limit, "%.0f") + " s");
    if (!r.pass) failed.insert(k);
    std::printf("criterion %2d: %s [%.1f s] %s\n", k, r.pass ? "PASS" : "FAIL", seconds, r.detail.c_str());
    std::fflush(stdout);
  };
  auto timed = [&](int k, double limit, const std::function<Outcome()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    report(k, o, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), limit);
  };

  timed(1, 60, criterion1);
  timed(2, 1, criterion2);
  timed(3, 10, criterion3);
  timed(4, 120, criterion4);
  {
    Outcome c5, c6;
    double t5 = 0.0, t6 = 0.0;
    try {
      criteria5and6(c5, c6, t5, t6);
    } catch (const std::exception& e) {
      c5.fail(std::string("exception: ") + e.what());
      c6.fail(std::string("exception: ") + e.what());
    }
    report(5, c5, t5, 300);
    report(6, c6, t6, 300);
  }
  timed(7, 30, criterion7);
  timed(8, 10, criterion8);
  timed(9, 120, criterion9);
  timed(10, 60, criterion10);
  timed(11, 10, criterion11);
  timed(12, 120, criterion12);
  timed(13, 60, criterion13);
  std::printf("criterion 14: N/A no results beyond desk scale\n");

  std::string f;
  for (int k : failed) f += (f.empty() ? "" : ",") + std::to_string(k);
  std::printf("failing criteria: %s\n", f.empty() ? "none" : f.c_str());
  return failed == expected ? 0 : 1;
}
