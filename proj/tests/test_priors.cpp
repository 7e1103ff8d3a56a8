#include <gtest/gtest.h>

#include "qclust/priors.hpp"
#include "qclust/quadrature.hpp"

using namespace qclust;

TEST(Simplex, MomentFormula) {
  EXPECT_EQ(simplex_moment({1, 0}), Rational(1, 2));
  EXPECT_EQ(simplex_moment({1, 1}), Rational(1, 6));
  EXPECT_EQ(simplex_moment({2, 0, 0}), Rational(1, 6));
  EXPECT_EQ(moment_vectors(3, 2).size(), 9u);
}

TEST(Simplex, SamplesLieOnSimplex) {
  auto rng = stream_rng(1, 0);
  for (int t = 0; t < 200; ++t)
    for (auto p : {sample_simplex_uniform(4, rng), sample_haar_induced(4, rng)}) {
      double s = 0.0;
      for (double v : p) {
        EXPECT_GE(v, 0.0);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Simplex, EmpiricalMomentsWithinError) {
  for (auto sampler : {PriorSampler::simplex, PriorSampler::haar}) {
    const auto vecs = moment_vectors(3, 3);
    const auto est = empirical_moments(3, 3, sampler, 200000, 21, 1);
    ASSERT_EQ(est.size(), vecs.size());
    for (std::size_t i = 0; i < vecs.size(); ++i) EXPECT_TRUE(est[i].within(simplex_moment(vecs[i]).get_d(), 4.5)) << i;
  }
}

TEST(Simplex, TwoSamplersAgreeInDistribution) {
  const auto a = sample_first_component(3, PriorSampler::simplex, 20000, 5);
  const auto b = sample_first_component(3, PriorSampler::haar, 20000, 6);
  EXPECT_GT(ks_pvalue(ks_statistic(a, b), a.size(), b.size()), 1e-3);
  std::vector<double> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::sqrt(b[i]);
  EXPECT_LT(ks_pvalue(ks_statistic(a, c), a.size(), c.size()), 1e-6);
}

TEST(Ks, StatisticAndPvalue) {
  EXPECT_DOUBLE_EQ(ks_statistic({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ks_statistic({0, 1}, {2, 3}), 1.0);
  EXPECT_NEAR(kolmogorov_q(1.36), 0.049, 1e-3);
  EXPECT_DOUBLE_EQ(kolmogorov_q(0.0), 1.0);
}

TEST(Overlap, MarginalIsNormalized) {
  for (int d = 2; d <= 6; ++d) {
    const auto q = integrate([d](double u) { return overlap_marginal(u, d); }, 0.0, 1.0);
    EXPECT_NEAR(q.value, 1.0, 1e-12);
    // mean overlap 1/d
    EXPECT_NEAR(integrate([d](double u) { return u * overlap_marginal(u, d); }, 0.0, 1.0).value, 1.0 / d, 1e-12);
  }
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
  auto trial = [](std::mt19937_64& rng, double* out) {
    out[0] = std::uniform_real_distribution<double>(0, 1)(rng);
    out[1] = out[0] * out[0];
  };
  const auto a = run_trials_vector(50000, 9, 1, 2, trial), b = run_trials_vector(50000, 9, 3, 2, trial);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a[i].mean, b[i].mean);
    EXPECT_EQ(a[i].std_error, b[i].std_error);
  }
  EXPECT_TRUE(a[0].within(0.5));
  EXPECT_TRUE(a[1].within(1.0 / 3.0));
}
