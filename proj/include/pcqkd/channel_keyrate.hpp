#pragma once

// Secret key rate of the measurement-device-independent protocol, computed
// through the equivalent one-way heterodyne protocol with reverse
// reconciliation against a one-mode collective Gaussian attack.

#include "pcqkd/catalysis.hpp"

#include <optional>

namespace pcqkd {

struct ProtocolParams {
  double l_ac = 0.0;      // km, Alice to relay
  double l_bc = 0.0;      // km, Bob to relay
  double gamma = 0.2;     // fibre loss, dB/km
  double eps_a = 0.002;   // excess noise, shot-noise units
  double eps_b = 0.002;
  double beta = 0.96;     // reconciliation efficiency
  std::optional<double> gain;  // explicit relay gain g; nullopt selects g^2 = 2 / T_B

  double total_length() const { return l_ac + l_bc; }
  void validate() const;
};

struct EquivalentChannel {
  double t_a = 1.0;
  double t_b = 1.0;
  double t = 1.0;       // effective one-way transmissivity (g^2 / 2) T_A
  double eps_th = 0.0;  // equivalent excess noise
  double chi_ch = 0.0;  // (1 - T) / T + eps_th
};

struct KeyRateReport {
  double i_ab = 0.0;   // bits
  double chi_be = 0.0; // bits
  double success_prob = 1.0;
  double key_rate = 0.0;  // P (beta I_AB - chi_BE), may be negative
  CatalysisParams state;
  ProtocolParams protocol;
};

/// 10^(-gamma L / 10).
double attenuation(double length_km, double gamma_db_per_km);

EquivalentChannel equivalent_channel(const ProtocolParams& p);

/// Alice block kept, Bob block -> T (B + chi_ch I), correlations -> sqrt(T) C.
CovMatrix propagate(const CovMatrix& cov, const EquivalentChannel& ch);

/// Alice and Bob both heterodyne; per-quadrature Gaussian mutual information.
double mutual_information(const CovMatrix& joint);

/// Holevo bound between Bob's heterodyne outcome and Eve's purification.
double holevo_bound(const CovMatrix& joint);

/// Rate for an already catalysed state; the state enters only through its
/// covariance matrix and success probability.
KeyRateReport key_rate(const CatalyzedState& state, const ProtocolParams& proto);

KeyRateReport key_rate(const CatalysisParams& p, const ProtocolParams& proto);

}  // namespace pcqkd
