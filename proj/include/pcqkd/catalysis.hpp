#pragma once

// m-photon catalysis of a two-mode squeezed coherent state.
//
// Mode A2 of the TMSC state meets an ancilla |m> on a beam splitter of
// transmissivity T_C; the ancilla output is post-selected on |m>. The
// catalysed state is described through its Wigner characteristic function,
// which is obtained in closed form by writing both Laguerre factors of the
// Fock characteristic functions as derivatives of a Gaussian generating
// function, integrating the ancilla phase-space variable analytically, and
// extracting Taylor coefficients.

#include "pcqkd/gaussian_core.hpp"
#include "pcqkd/truncated_series.hpp"

#include <array>
#include <complex>

namespace pcqkd {

inline constexpr int kDefaultMaxCatalysisOrder = 3;

struct CatalysisParams {
  double lambda = 0.0;  // tanh r
  double d = 0.0;       // coherent displacement of each input mode (q quadrature)
  double tc = 1.0;      // catalysis beam-splitter transmissivity
  int m = 0;            // ancilla photon number

  /// V = cosh 2r = (1 + l^2) / (1 - l^2).
  double variance() const { return (1.0 + lambda * lambda) / (1.0 - lambda * lambda); }

  /// lambda = sqrt((V - 1) / (V + 1)); requires V >= 1.
  static CatalysisParams from_variance(double variance, double d, double tc, int m);

  /// Throws DomainError when a field is out of range.
  void validate(int max_order = kDefaultMaxCatalysisOrder) const;
};

/// Affine form c + a . (tau1, sigma1, tau2, sigma2).
struct LinearForm {
  std::complex<double> constant;
  Eigen::Vector4cd coeffs;

  std::complex<double> operator()(const QuadVector& l) const {
    return constant + (coeffs.transpose() * l.cast<std::complex<double>>())(0);
  }
};

/// Exponent of the generating function left after the ancilla integral:
///
///   log P0 + l^T z + 1/2 z^T Q z,   z = (u1, v1, u2, v2, tau1, sigma1, tau2, sigma2)
///
/// (u1, v1) generate the Laguerre factor of the input ancilla, (u2, v2) the
/// factor of the |m><m| projector. In the named-coefficient reading
///
///   -x1 u1 v1 + x2 u1 + x3 v1 - x4 u2 v2 + x5 u2 + x6 v2 + x7 (u1 v2 + v1 u2)
///
/// x2, x3, x5, x6 are affine in the phase-space variables and reduce to y0
/// (for u1, v1) and y1 (for u2, v2) at the origin.
struct GeneratingExponent {
  double log_p0 = 0.0;
  Eigen::Matrix<std::complex<double>, 8, 1> linear;
  Eigen::Matrix<std::complex<double>, 8, 8> quadratic;

  double x0 = 0.0;
  double x1 = 0.0;
  LinearForm x2;
  LinearForm x3;
  double x4 = 0.0;
  LinearForm x5;
  LinearForm x6;
  double x7 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  double p0() const;
  /// Full exponent at a numeric point z.
  std::complex<double> evaluate(const Eigen::Matrix<std::complex<double>, 8, 1>& z) const;
};

/// Catalysed two-mode state: first and second Weyl-ordered moments.
struct CatalyzedState {
  QuadVector mean;
  CovMatrix cov;  // pattern [[VAq,0,VCq,0],[0,VAp,0,VCp],[VCq,0,VBq,0],[0,VCp,0,VBp]]
  double success_prob = 1.0;
  CatalysisParams params;

  double va_q() const { return cov(0, 0); }
  double va_p() const { return cov(1, 1); }
  double vb_q() const { return cov(2, 2); }
  double vb_p() const { return cov(3, 3); }
  double vc_q() const { return cov(0, 2); }
  double vc_p() const { return cov(1, 3); }
};

/// TMSC state: two coherent states (d, 0) through the two-mode squeezer.
GaussianState tmsc_state(const CatalysisParams& p);

/// Closed-form 0-photon catalysed state (Gaussian). Requires m = 0.
CatalyzedState zero_pc_state(const CatalysisParams& p);

GeneratingExponent generating_exponent(const CatalysisParams& p);

/// Unnormalised characteristic function of the m-PC state at phase-space
/// point (tau1, sigma1, tau2, sigma2). Real up to rounding for real d; the
/// full complex value is returned.
std::complex<double> m_pc_unnormalized_char(const CatalysisParams& p, const QuadVector& l);

/// Probability of detecting m photons in the ancilla output.
double success_probability(const CatalysisParams& p);

/// Mean, covariance and success probability of the m-PC state from the
/// Taylor coefficients of its normalised characteristic function.
CatalyzedState moments(const CatalysisParams& p);

/// (1/i)^{r1+r2} (1/(-i))^{s1+s2} d^{r1}_{sigma1} d^{s1}_{tau1} d^{r2}_{sigma2}
/// d^{s2}_{tau2} chi at 0 for the normalised m-PC characteristic function:
/// the Weyl-ordered moment of q1^r1 p1^s1 q2^r2 p2^s2. Total order must be <= 2.
std::complex<double> weyl_moment(const CatalysisParams& p, const std::array<int, 4>& qp_orders);

}  // namespace pcqkd
