#include "pcqkd/channel_keyrate.hpp"
#include "pcqkd/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace pcqkd;

namespace {

CovMatrix tmsv_cov(double v) {
  const double c = std::sqrt(v * v - 1);
  CovMatrix m = CovMatrix::Zero();
  m.diagonal().setConstant(v);
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return m;
}

// Bob's quadratures conditioned on Alice's heterodyne outcome, by full 2x2
// Schur complements (no per-quadrature shortcut).
double schur_information(const CovMatrix& joint) {
  const Eigen::Matrix2d a = joint.topLeftCorner<2, 2>();
  const Eigen::Matrix2d b = joint.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d c = joint.topRightCorner<2, 2>();
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d cond = b - c.transpose() * (a + id).inverse() * c;
  return 0.5 * std::log2((b + id).determinant() / (cond + id).determinant());
}

}  // namespace

TEST(Attenuation, Values) {
  EXPECT_EQ(attenuation(0.0, 0.2), 1.0);
  EXPECT_EQ(attenuation(50.0, 0.2), 0.1);
  EXPECT_NEAR(attenuation(100.0, 0.2), 0.01, 1e-17);
  EXPECT_THROW(attenuation(-1.0, 0.2), DomainError);
}

TEST(EquivalentChannel, ExtremeAsymmetric) {
  ProtocolParams p;
  p.l_ac = 50.0;
  const EquivalentChannel ch = equivalent_channel(p);
  EXPECT_NEAR(ch.eps_th, 0.022, 1e-15);
  EXPECT_EQ(ch.t, ch.t_a);
  EXPECT_NEAR(ch.chi_ch - ch.eps_th, (1 - ch.t) / ch.t, 1e-14);
}

TEST(EquivalentChannel, Noiseless) {
  ProtocolParams p;
  p.eps_a = p.eps_b = 0.0;
  const EquivalentChannel ch = equivalent_channel(p);
  EXPECT_EQ(ch.eps_th, 0.0);
  EXPECT_EQ(ch.chi_ch, 0.0);
}

TEST(EquivalentChannel, ExplicitGain) {
  ProtocolParams p;
  p.l_ac = 10.0;
  p.l_bc = 5.0;
  p.gain = 1.0;
  const EquivalentChannel ch = equivalent_channel(p);
  EXPECT_NEAR(ch.t, 0.5 * ch.t_a, 1e-15);
  p.gain = -1.0;
  EXPECT_THROW(equivalent_channel(p), DomainError);
}

TEST(EquivalentChannel, RejectsBadParameters) {
  ProtocolParams p;
  p.beta = 1.5;
  EXPECT_THROW(equivalent_channel(p), DomainError);
  p = {};
  p.gamma = 0.0;
  EXPECT_THROW(equivalent_channel(p), DomainError);
}

TEST(Propagate, IdentityChannel) {
  const CovMatrix in = tmsv_cov(5.0);
  EquivalentChannel ch;
  EXPECT_LT((propagate(in, ch) - in).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Propagate, BobDiagonal) {
  ProtocolParams p;
  p.l_ac = 50.0;
  const CovMatrix out = propagate(tmsv_cov(5.0), equivalent_channel(p));
  EXPECT_NEAR(out(2, 2), 0.1 * (5 + 9 + 0.022), 1e-13);
  EXPECT_NEAR(out(2, 2), 1.4022, 1e-12);
  EXPECT_EQ(out(0, 0), 5.0);
  for (double nu : symplectic_eigenvalues(out)) EXPECT_GE(nu, 1.0);
}

TEST(MutualInformation, Uncorrelated) {
  CovMatrix m = CovMatrix::Identity() * 3.0;
  EXPECT_EQ(mutual_information(m), 0.0);
}

TEST(MutualInformation, SymmetricReduction) {
  const CovMatrix m = tmsv_cov(4.0);
  const double b = 4.0, c = std::sqrt(15.0);
  const double cond = b - c * c / (4.0 + 1.0);
  EXPECT_NEAR(mutual_information(m), std::log2((b + 1) / (cond + 1)), 1e-14);
}

TEST(MutualInformation, SchurComplementOracle) {
  ProtocolParams p;
  p.l_ac = 15.05;  // T_A = 0.5
  const CovMatrix joint = propagate(tmsv_cov(5.0), equivalent_channel(p));
  EXPECT_NEAR(mutual_information(joint), schur_information(joint), 1e-10);

  const CovMatrix asym = propagate(moments({0.7, 2.0, 0.85, 1}).cov, equivalent_channel(p));
  EXPECT_NEAR(mutual_information(asym), schur_information(asym), 1e-10);
}

TEST(HolevoBound, ProductOfPureStates) {
  EXPECT_NEAR(holevo_bound(CovMatrix::Identity()), 0.0, 1e-15);
}

TEST(HolevoBound, LosslessPureState) {
  EXPECT_NEAR(holevo_bound(tmsv_cov(5.0)), 0.0, 1e-9);
}

TEST(HolevoBound, PhaseFlipInvariance) {
  ProtocolParams p;
  p.l_ac = 20.0;
  const CovMatrix joint = propagate(moments({0.6, 1.5, 0.9, 1}).cov, equivalent_channel(p));
  const Eigen::Vector4d z(1, -1, 1, -1);
  const CovMatrix flipped = z.asDiagonal() * joint * z.asDiagonal();
  EXPECT_NEAR(holevo_bound(joint), holevo_bound(flipped), 1e-12);
}

TEST(KeyRate, PositiveAtFiftyKm) {
  ProtocolParams p;
  p.l_ac = 50.0;
  const KeyRateReport r = key_rate(CatalysisParams::from_variance(5.0, 0, 1, 0), p);
  EXPECT_GT(r.key_rate, 0.0);
  EXPECT_LT(r.chi_be, p.beta * r.i_ab);
}

TEST(KeyRate, TmsvLimitMatchesRawState) {
  ProtocolParams p;
  p.l_ac = 30.0;
  const KeyRateReport r = key_rate(CatalysisParams::from_variance(5.0, 0, 1, 0), p);
  const CovMatrix joint = propagate(tmsv_cov(5.0), equivalent_channel(p));
  EXPECT_NEAR(r.key_rate, p.beta * mutual_information(joint) - holevo_bound(joint), 1e-10);
  EXPECT_EQ(r.success_prob, 1.0);
}

TEST(KeyRate, DecreasingInLength) {
  const CatalyzedState s = moments(CatalysisParams::from_variance(5.0, 0, 1, 0));
  ProtocolParams p;
  double prev = key_rate(s, p).key_rate;
  for (double l = 1.0; l <= 80.0; l += 1.0) {
    p.l_ac = l;
    const double k = key_rate(s, p).key_rate;
    EXPECT_LT(k, prev) << l;
    prev = k;
  }
}

TEST(KeyRate, PostSelectionScaling) {
  ProtocolParams p;
  p.l_ac = 40.0;
  const KeyRateReport r = key_rate(CatalysisParams{0.8, 1.0, 0.9, 1}, p);
  EXPECT_LT(r.success_prob, 1.0);
  EXPECT_NEAR(r.key_rate, r.success_prob * (p.beta * r.i_ab - r.chi_be), 1e-15);
  const double unconditioned = p.beta * r.i_ab - r.chi_be;
  ASSERT_GT(unconditioned, 0.0);
  EXPECT_LE(r.key_rate, unconditioned);
}
