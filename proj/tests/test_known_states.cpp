#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qclust/known_states.hpp"

using namespace qclust;

TEST(KnownPure, ClosedForms) {
  EXPECT_DOUBLE_EQ(success_known_pure(0.0, 5), 1.0);
  EXPECT_DOUBLE_EQ(success_known_pure(1.0, 3), 0.125);
  EXPECT_DOUBLE_EQ(success_known_clustering(1.0, 3), 0.25);
  EXPECT_NEAR(success_known_pure(0.6, 2), 0.81, 1e-15);
  EXPECT_NEAR(success_known_clustering(0.6, 2), 0.82, 1e-15);
  EXPECT_THROW(success_known_pure(1.5, 2), ContractError);
}

TEST(KnownAverage, MatchesBetaIntegrals) {
  for (int N = 1; N <= 40; N += 3)
    for (int d = 2; d <= 5; ++d) {
      EXPECT_NEAR(average_success_known(N, d, KnownVariant::pure).value, oracle::known_average(N, d, false).get_d(), 1e-10);
      EXPECT_NEAR(average_success_known(N, d, KnownVariant::clustering).value, oracle::known_average(N, d, true).get_d(), 1e-10);
      EXPECT_NEAR(unambiguous_average(N, d).value, oracle::unambiguous_average(N, d).get_d(), 1e-10);
    }
}

TEST(KnownAverage, SmallValues) {
  EXPECT_NEAR(average_success_known(1, 2, KnownVariant::pure).value, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(average_success_known(1, 2, KnownVariant::clustering).value, 1.0, 1e-12);
  EXPECT_NEAR(unambiguous_average(1, 2).value, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(unambiguous_average(2, 2).value, 1.0 / 6.0, 1e-12);
}

TEST(KnownAverage, AsymptoticRatios) {
  for (int d : {2, 3}) {
    const auto a = average_success_known(2000, d, KnownVariant::pure);
    EXPECT_NEAR(a.value / a.asymptote, 1.0, 0.01);
    const auto u = unambiguous_average(2000, d);
    EXPECT_NEAR(u.value / u.asymptote, 1.0, 0.01);
  }
  // unambiguous discrimination falls off one power of N faster
  EXPECT_LT(unambiguous_average(200, 2).value, 0.1 * average_success_known(200, 2, KnownVariant::pure).value);
}

TEST(Helstrom, SimulationMatchesClosedForm) {
  for (double c : {0.2, 0.5, 0.9})
    for (int N : {1, 3, 6}) {
      const auto e = helstrom_simulate(c, N, 100000, 11, KnownVariant::pure, 1);
      EXPECT_TRUE(e.within(success_known_pure(c, N))) << c << " " << N << " " << e.mean;
      const auto f = helstrom_simulate(c, N, 100000, 12, KnownVariant::clustering, 1);
      EXPECT_TRUE(f.within(success_known_clustering(c, N))) << c << " " << N << " " << f.mean;
    }
}

TEST(Helstrom, DeterministicAcrossThreads) {
  const auto a = helstrom_simulate(0.4, 4, 70000, 3, KnownVariant::pure, 1);
  const auto b = helstrom_simulate(0.4, 4, 70000, 3, KnownVariant::pure, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MixedPovm, SatisfiesOptimalityConditions) {
  for (double c : {0.1, 0.5, 0.8})
    for (int N = 1; N <= 6; ++N) {
      const auto r = verify_known_mixed_povm(c, N);
      EXPECT_TRUE(r.pass) << c << " " << N;
      EXPECT_NEAR(r.success, success_known_clustering(c, N), 1e-10);
      EXPECT_GE(r.min_null_count, 1);
    }
  EXPECT_THROW(verify_known_mixed_povm(0.5, 11), GuardError);
}
