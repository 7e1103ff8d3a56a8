#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qclust/classical.hpp"

using namespace qclust;

TEST(Partition, DynamicProgramMatchesBruteForce) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 1000; ++t) {
    const int d = 1 + static_cast<int>(rng() % 12);
    std::vector<int> m(static_cast<std::size_t>(d));
    for (auto& v : m) v = static_cast<int>(rng() % 15);
    const auto a = solve_balanced_partition(m), b = solve_balanced_partition_bruteforce(m);
    EXPECT_EQ(a.twice_bias, b.twice_bias);
    EXPECT_EQ(a.subset, b.subset);
  }
}

TEST(Partition, SmallExample) {
  const auto s = solve_balanced_partition({5, 5, 2});
  EXPECT_EQ(s.twice_bias, 2);
  EXPECT_DOUBLE_EQ(s.bias(), 1.0);
  EXPECT_EQ(s.subset, 1u);
  EXPECT_THROW(solve_balanced_partition(std::vector<int>(31, 1)), GuardError);
}

TEST(Guess, GroupsWholeSymbols) {
  const auto r = parse_sample("112321223112", 3);
  EXPECT_EQ(occurrence_counts(r, 3), (std::vector<int>{5, 5, 2}));
  const auto c = optimal_guess_unknown(r, 3);
  EXPECT_EQ(c.canonical.str(), "001110111001");
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[i] == r[j]) EXPECT_EQ(c.canonical.bits[i], c.canonical.bits[j]);
  EXPECT_THROW(parse_sample("104", 3), ContractError);
  EXPECT_THROW(parse_sample("14", 3), ContractError);
}

TEST(Guess, MaximizesJointProbability) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const int N = 6, d = 3;
    SampleString r(N);
    for (auto& v : r) v = static_cast<int>(rng() % d);
    const Rational best = joint_probability(r, optimal_guess_unknown(r, d).canonical, d);
    ClusterString x;
    x.bits.resize(N);
    for (unsigned mask = 0; mask < (1u << N); ++mask) {
      for (int k = 0; k < N; ++k) x.bits[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(mask >> k & 1u);
      EXPECT_LE(joint_probability(r, x, d), best);
    }
  }
}

TEST(JointProbability, MatchesDirichletOracleAndNormalizes) {
  const int N = 4, d = 2;
  Rational total = 0;
  for (std::size_t code = 0; code < 16; ++code) {
    const auto r = oracle::digits_of(code, N, d);
    for (unsigned mask = 0; mask < 16; ++mask) {
      ClusterString x;
      std::vector<int> xi;
      for (int k = 0; k < N; ++k) {
        x.bits.push_back(static_cast<std::uint8_t>(mask >> k & 1u));
        xi.push_back(static_cast<int>(mask >> k & 1u));
      }
      const Rational p = joint_probability(r, x, d);
      EXPECT_EQ(p, oracle::joint_probability(r, xi, d));
      total += p;
    }
  }
  EXPECT_EQ(total, 1);
  EXPECT_EQ(joint_probability({0}, ClusterString::parse("0"), 2), Rational(1, 4));
}

TEST(Unknown, ExactMatchesBruteForce) {
  for (int d = 2; d <= 3; ++d)
    for (int N = 1; N <= (d == 2 ? 7 : 5); ++N) {
      EXPECT_EQ(success_exact_unknown(N, d), oracle::classical_bruteforce(N, d)) << N << " " << d;
    }
  EXPECT_EQ(success_bruteforce_unknown(4, 3), success_exact_unknown(4, 3));
  EXPECT_EQ(success_exact_unknown(4, 3), Rational(1, 4));
  EXPECT_EQ(success_exact_unknown(2, 3), Rational(7, 12));
}

TEST(Unknown, BinaryClosedForm) {
  for (int N = 1; N <= 12; ++N) EXPECT_EQ(success_exact_unknown(N, 2), oracle::classical_d2(N)) << N;
}

TEST(Unknown, AsymptoticRatio) {
  const double r = success_exact_unknown(400, 2).get_d() / success_asymptotic_unknown(400, 2);
  EXPECT_NEAR(r, 1.0, 0.01);
}

TEST(Known, BinaryMatchesOracleAndUnknown) {
  for (int N = 1; N <= 12; ++N) {
    EXPECT_EQ(average_known_classical_exact(N, 2), oracle::known_classical_d2(N));
    EXPECT_EQ(average_known_classical_exact(N, 2), success_exact_unknown(N, 2));
  }
  EXPECT_THROW(average_known_classical_exact(3, 4), ContractError);
}

TEST(Known, AtLeastUnknownAndTernaryValues) {
  for (int N = 2; N <= 8; ++N) EXPECT_GE(average_known_classical_exact(N, 3), success_exact_unknown(N, 3));
  EXPECT_EQ(average_known_classical_exact(2, 3), Rational(3, 5));
  EXPECT_EQ(average_known_classical_exact(4, 3), Rational(159, 560));
}

TEST(Known, MonteCarloAgreesWithClosedForm) {
  for (int N : {3, 6}) {
    const auto e = average_known_classical_mc(N, 3, 100000, 4, 1);
    EXPECT_TRUE(e.within(average_known_classical_exact(N, 3).get_d())) << N;
  }
}

TEST(Protocols, SimulationsWithinError) {
  const auto u = simulate_unknown_protocol(4, 3, 100000, 8, 1);
  EXPECT_TRUE(u.within(success_exact_unknown(4, 3).get_d())) << u.mean;
  const auto k = simulate_known_protocol(4, 3, 100000, 9, 1);
  EXPECT_TRUE(k.within(average_known_classical_exact(4, 3).get_d())) << k.mean;
}

TEST(Xi0, MatchesDirectCount) {
  for (int N = 2; N <= 16; N += 2)
    for (int d = 2; d <= 5; ++d) EXPECT_EQ(xi0(N, d), xi0_bruteforce(N, d)) << N << " " << d;
  EXPECT_EQ(xi0(4, 2), 1);
  EXPECT_THROW(xi0(3, 2), ContractError);
}

TEST(Guards, CompositionLimit) {
  EXPECT_THROW(success_exact_unknown(200, 8), GuardError);
  EXPECT_THROW(success_bruteforce_unknown(12, 4), GuardError);
}
