#pragma once

// Cross-checks of the characteristic-function path against independent
// computations: brute-force Fock simulation and direct 2-D quadrature of the
// ancilla phase-space integral.

#include "pcqkd/catalysis.hpp"

#include <string>
#include <vector>

namespace pcqkd {

/// Trapezoid rule on [-radius, radius]^2 over the ancilla variable.
struct QuadratureGrid {
  double radius = 12.0;
  double step = 0.05;
};

/// Unnormalised m-PC characteristic function at l, integrating the Fock
/// characteristic functions e^{-|b|^2/2} L_m(|b|^2) of the ancilla numerically.
std::complex<double> quadrature_char(const CatalysisParams& p, const QuadVector& l, const QuadratureGrid& grid = {});

/// exp of the generating exponent at a numeric z = (u1, v1, u2, v2, tau1, sigma1,
/// tau2, sigma2), integrating the Laguerre generators numerically.
std::complex<double> quadrature_generating_function(const CatalysisParams& p,
                                                    const Eigen::Matrix<std::complex<double>, 8, 1>& z,
                                                    const QuadratureGrid& grid = {});

struct CheckRow {
  std::string label;
  double delta = 0.0;
  double tolerance = 0.0;
  bool pass() const { return delta <= tolerance; }
};

struct VerifyOptions {
  std::vector<int> orders{0, 1, 2};
  std::vector<double> lambdas{0.3, 0.6};
  std::vector<double> displacements{0.0, 1.0, 3.0};
  std::vector<double> transmissivities{0.7, 0.9};
  int cutoff = 60;
  double oracle_tolerance = 1e-7;
  double limit_tolerance = 1e-10;

  // exponent check
  CatalysisParams exponent_params{0.5, 1.0, 0.8, 1};
  int exponent_points = 20;
  unsigned seed = 7;
  double exponent_tolerance = 1e-7;
  QuadratureGrid quadrature;
};

/// Largest absolute difference between series-path and Fock moments
/// (mean, covariance, probability) at one parameter point.
double oracle_delta(const CatalysisParams& p, int cutoff);

/// Fock grid, T_C = 1 rows, m = 0 rows and the quadrature exponent check.
std::vector<CheckRow> run_verification(const VerifyOptions& opt);

}  // namespace pcqkd
