#include "pcqkd/errors.hpp"
#include "pcqkd/gaussian_core.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcqkd;

TEST(TwoModeSqueezer, ZeroIsIdentity) {
  EXPECT_LT((two_mode_squeezer(0.0).matrix() - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
}

TEST(TwoModeSqueezer, Entries) {
  const Eigen::MatrixXd s = two_mode_squeezer(0.6).matrix();
  EXPECT_NEAR(s(0, 0), 1.25, 1e-15);
  EXPECT_NEAR(s(0, 2), 0.75, 1e-15);  // lambda / sqrt(1 - lambda^2)
  EXPECT_NEAR(s(1, 3), -0.75, 1e-15);
}

TEST(TwoModeSqueezer, Symplectic) {
  for (int k = 1; k <= 9; ++k) EXPECT_LT(symplectic_defect(two_mode_squeezer(0.1 * k).matrix()), 1e-12);
}

TEST(TwoModeSqueezer, RejectsOutOfRange) {
  EXPECT_THROW(two_mode_squeezer(1.0), DomainError);
  EXPECT_THROW(two_mode_squeezer(-0.1), DomainError);
}

TEST(BeamSplitter, Limits) {
  EXPECT_LT((beam_splitter(1.0).matrix() - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-15);
  const Eigen::MatrixXd b = beam_splitter(0.5).matrix();
  const double h = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(b(0, 0), h, 1e-15);
  EXPECT_NEAR(b(0, 2), h, 1e-15);
  EXPECT_NEAR(b(2, 0), -h, 1e-15);
  EXPECT_NEAR(b(2, 2), h, 1e-15);
  EXPECT_THROW(beam_splitter(1.1), DomainError);
}

TEST(BeamSplitter, OrthogonalSymplectic) {
  for (double t : {0.0, 0.2, 0.7, 1.0}) {
    const Eigen::MatrixXd b = beam_splitter(t).matrix();
    EXPECT_LT((b * b.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-14);
    EXPECT_LT(symplectic_defect(b), 1e-14);
  }
}

TEST(ApplySymplectic, SqueezedCoherentMoments) {
  GaussianState in = GaussianState::vacuum(2);
  const double d = 1.3;
  in.mean << d, 0, d, 0;
  const GaussianState out = apply_symplectic(two_mode_squeezer(0.6), in);
  EXPECT_NEAR(out.mean(0), 2 * d, 1e-14);
  EXPECT_NEAR(out.mean(2), 2 * d, 1e-14);
  EXPECT_NEAR(out.cov(0, 0), 1.36 / 0.64, 1e-14);
  EXPECT_NEAR(out.cov(0, 2), 1.2 / 0.64, 1e-14);
  EXPECT_NEAR(out.cov(1, 3), -1.2 / 0.64, 1e-14);

  const GaussianState same = apply_symplectic(identity_symplectic(2), out);
  EXPECT_EQ(same.cov, out.cov);
}

TEST(CharFn, Normalisation) {
  GaussianState st = GaussianState::vacuum(2);
  EXPECT_NEAR(std::abs(char_fn(st, Eigen::Vector4d::Zero()) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(char_fn(st, Eigen::Vector4d(1, 0, 0, 0)) - std::exp(-0.5)), 0.0, 1e-15);
}

TEST(SymplecticEigenvalues, Known) {
  auto nu = symplectic_eigenvalues(Eigen::Matrix4d::Identity());
  EXPECT_NEAR(nu[0], 1.0, 1e-12);
  EXPECT_NEAR(nu[1], 1.0, 1e-12);

  nu = symplectic_eigenvalues(3.0 * Eigen::Matrix4d::Identity());
  EXPECT_NEAR(nu[0], 3.0, 1e-12);
  EXPECT_NEAR(nu[1], 3.0, 1e-12);

  const GaussianState tmsv = apply_symplectic(two_mode_squeezer(0.8), GaussianState::vacuum(2));
  nu = symplectic_eigenvalues(tmsv.cov);
  EXPECT_NEAR(nu[0], 1.0, 1e-9);
  EXPECT_NEAR(nu[1], 1.0, 1e-9);
}

TEST(SymplecticEigenvalues, RejectsUnphysical) {
  EXPECT_THROW(symplectic_eigenvalues(0.5 * Eigen::Matrix4d::Identity()), IntegrityError);
}

TEST(GaussianEntropy, Values) {
  EXPECT_EQ(gaussian_entropy(1.0), 0.0);
  EXPECT_NEAR(gaussian_entropy(3.0), 2.0, 1e-14);
  EXPECT_NEAR(gaussian_entropy(5.0), 3.0 * std::log2(3.0) - 2.0, 1e-14);
  EXPECT_NEAR(gaussian_entropy(5.0), 2.7549, 1e-4);
  EXPECT_THROW(gaussian_entropy(0.5), DomainError);
}
