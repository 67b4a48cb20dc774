#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "ncdr/diagnostics.hpp"

using namespace ncdr;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

Mat random_mat(Eigen::Index m, Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Mat A(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = nd(rng);
  return A;
}

// min ||Bu||^2 / u^T B u over sampled u with u^T B u > 0.
double sampled_ratio(const Mat& B, std::mt19937_64& rng, int samples) {
  std::normal_distribution<double> nd;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    Vec u(B.rows());
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = nd(rng);
    const double q = u.dot(B * u);
    if (q > 0) best = std::min(best, (B * u).squaredNorm() / q);
  }
  return best;
}

}  // namespace

TEST(FitRate, GeometricSequence) {
  std::vector<double> r;
  for (int t = 0; t < 60; ++t) r.push_back(std::pow(0.5, t));
  const RateFit fit = fit_rate(r, 40);
  ASSERT_TRUE(fit.eta.has_value());
  EXPECT_NEAR(*fit.eta, 0.5, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.window, 40);
}

TEST(FitRate, ConstantSequenceIsRejected) {
  const RateFit fit = fit_rate(std::vector<double>(30, 1e-3), 25);
  EXPECT_FALSE(fit.eta.has_value());
  EXPECT_NEAR(fit.raw_eta, 1.0, 1e-12);
}

TEST(FitRate, ShortWindowGivesNoEta) {
  std::vector<double> r;
  for (int t = 0; t < 30; ++t) r.push_back(std::pow(0.9, t));
  const RateFit fit = fit_rate(r, 10);
  EXPECT_FALSE(fit.eta.has_value());
  EXPECT_NEAR(fit.raw_eta, 0.9, 1e-12);
}

TEST(FitRate, UsesTraceResiduals) {
  MeritTrace trace;
  for (int t = 1; t <= 50; ++t) trace.push_back({t, 0.0, 0.0, 0.0, 0.0, 3.0 * std::pow(0.8, t), 0.1});
  const RateFit fit = fit_rate(trace, 30);
  ASSERT_TRUE(fit.eta.has_value());
  EXPECT_NEAR(*fit.eta, 0.8, 1e-12);
}

TEST(FitRate, Errors) {
  EXPECT_THROW(fit_rate(std::vector<double>(5, 1.0), 10), std::invalid_argument);
  EXPECT_THROW(fit_rate(std::vector<double>(5, 1.0), 1), std::invalid_argument);
  std::vector<double> r(30, 1.0);
  r[29] = 0.0;
  EXPECT_THROW(fit_rate(r, 20), std::invalid_argument);
}

TEST(DetectCycle, Periods) {
  std::vector<Vec> h;
  const std::vector<Vec> orbit = {v2(7, 0), v2(7, -1), v2(8, 0), v2(8, 1)};
  for (int t = 0; t < 300; ++t) h.push_back(orbit[t % 4]);
  auto p = detect_cycle(h, 100);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, 4);

  std::vector<Vec> fixed(150, v2(1, 2));
  EXPECT_EQ(detect_cycle(fixed, 100), 1);

  std::vector<Vec> drift;
  for (int t = 0; t < 300; ++t) drift.push_back(v2(t, 0));
  EXPECT_FALSE(detect_cycle(drift, 100).has_value());

  // Too short a history for the window.
  EXPECT_FALSE(detect_cycle(std::vector<Vec>(50, v2(0, 0)), 100).has_value());
  EXPECT_THROW(detect_cycle(h, 1), std::invalid_argument);
}

TEST(IndefiniteLowerBound, Examples) {
  EXPECT_NEAR(indefinite_lower_bound(Vec(v2(2, -1)).asDiagonal().toDenseMatrix()), 2.0, 1e-12);
  const Mat B = (Vec(3) << 3, 1, -5).finished().asDiagonal();
  EXPECT_NEAR(indefinite_lower_bound(B), 1.0, 1e-12);
}

TEST(IndefiniteLowerBound, BoundHoldsAndIsTightOnSamples) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    Mat G = random_mat(3, 3, rng);
    const Mat B = G + G.transpose();
    Eigen::SelfAdjointEigenSolver<Mat> es(B);
    if (es.eigenvalues().minCoeff() >= 0 || es.eigenvalues().maxCoeff() <= 0) continue;
    const double alpha = indefinite_lower_bound(B);
    const double sampled = sampled_ratio(B, rng, 20000);
    EXPECT_GE(sampled, alpha * (1 - 1e-10));
    // Attained at the matching eigenvector.
    for (Eigen::Index i = 0; i < 3; ++i) {
      if (std::abs(es.eigenvalues()[i] - alpha) < 1e-12 * (1 + alpha)) {
        const Vec u = es.eigenvectors().col(i);
        EXPECT_NEAR((B * u).squaredNorm() / u.dot(B * u), alpha, 1e-10 * (1 + alpha));
      }
    }
  }
}

TEST(IndefiniteLowerBound, Errors) {
  EXPECT_THROW(indefinite_lower_bound(Mat::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(indefinite_lower_bound(-Mat::Identity(3, 3)), std::invalid_argument);
  Mat ns(2, 2);
  ns << 1, 2, 0, -1;
  EXPECT_THROW(indefinite_lower_bound(ns), std::invalid_argument);
  EXPECT_THROW(indefinite_lower_bound(Mat(2, 3)), std::invalid_argument);
}

TEST(MeritHessianMatrix, ScalarExample) {
  const Mat B = build_prop41_matrix(1.0, Mat::Identity(1, 1));
  Mat expected(3, 3);
  expected << 2, 0, -1, 0, -1, 1, -1, 1, 0;
  EXPECT_LE((B - expected).norm(), 1e-15);
}

TEST(MeritHessianMatrix, SymmetricIndefiniteAndBoundHolds) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 10; ++k) {
    const int n = 2 + k % 4;
    const int m = 1 + k % n;
    const double gamma = 0.05 + 0.15 * (k / 10.0);
    const Mat B = build_prop41_matrix(gamma, random_mat(m, n, rng));
    ASSERT_EQ(B.rows(), 3 * n);
    EXPECT_TRUE(B == B.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(B);
    EXPECT_LT(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_GT(es.eigenvalues().maxCoeff(), 0.0);
    const double alpha = indefinite_lower_bound(B);
    EXPECT_GE(sampled_ratio(B, rng, 5000), alpha * (1 - 1e-10));
  }
}

TEST(MeritHessianMatrix, Errors) {
  EXPECT_THROW(build_prop41_matrix(0.0, Mat::Identity(2, 2)), std::domain_error);
  Mat rank_deficient(2, 3);
  rank_deficient << 1, 2, 3, 2, 4, 6;
  EXPECT_THROW(build_prop41_matrix(0.1, rank_deficient), std::invalid_argument);
}
