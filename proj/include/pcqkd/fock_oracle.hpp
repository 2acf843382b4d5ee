#pragma once

// Brute-force photon catalysis in a truncated Fock space. Independent of the
// characteristic-function machinery; used to check it.

#include "pcqkd/gaussian_core.hpp"

#include <complex>
#include <vector>

namespace pcqkd::fock {

inline constexpr int kDefaultCutoff = 60;
inline constexpr double kLeakageTol = 1e-10;

/// Two-mode pure state, amplitudes indexed by (n1, n2) with n < cutoff.
struct FockVector {
  int cutoff = 0;
  std::vector<std::complex<double>> amp;  // row-major: n1 * cutoff + n2
  double leakage = 0.0;                   // norm lost to truncation while building

  FockVector() = default;
  explicit FockVector(int cutoff) : cutoff(cutoff), amp(static_cast<std::size_t>(cutoff) * cutoff) {}

  std::complex<double>& at(int n1, int n2) { return amp[static_cast<std::size_t>(n1) * cutoff + n2]; }
  std::complex<double> at(int n1, int n2) const { return amp[static_cast<std::size_t>(n1) * cutoff + n2]; }
  double norm_squared() const;
};

struct OracleResult {
  QuadVector mean;
  CovMatrix cov;
  double success_prob = 0.0;
};

/// exp(G) for a real antisymmetric generator (unitary on the retained space).
Eigen::MatrixXd exp_antisymmetric(const Eigen::MatrixXd& generator);

/// exp[theta (a^dag b - a b^dag)] restricted to n_a + n_b = total, basis |k, total-k>.
Eigen::MatrixXd beam_splitter_block(int total, double transmissivity);

/// Applies exp[theta (a^dag b - a b^dag)], cos(theta) = sqrt(T), to both modes.
/// Photon number is conserved, so only states with n1 + n2 < cutoff are kept
/// exactly; amplitude pushed past the cutoff is counted as leakage.
FockVector apply_beam_splitter(const FockVector& state, double transmissivity);

/// exp[r (a^dag b^dag - a b)] |alpha> |alpha>, r = atanh(lambda), alpha = d / 2.
/// Built on a padded space; throws CutoffError when the norm outside
/// `cutoff` exceeds kLeakageTol.
FockVector tmsc_fock(double lambda, double d, int cutoff = kDefaultCutoff);

/// Mixes mode 2 with an ancilla |m> on the beam splitter, projects the ancilla
/// onto <m| and returns the normalised post-selected state together with the
/// success probability (its squared norm before normalisation).
FockVector catalyze(const FockVector& state, double transmissivity, int m, double* success_prob);

/// Symmetrised first and second quadrature moments of a normalised state.
OracleResult quadrature_moments(const FockVector& state);

/// Full pipeline: TMSC -> catalysis -> moments.
OracleResult catalyze_fock(const FockVector& state, double transmissivity, int m);

/// <D(beta1) (x) D(beta2)> with beta_k = tau_k + i sigma_k, i.e. the Wigner
/// characteristic function at (tau1, sigma1, tau2, sigma2).
std::complex<double> displacement_expectation(const FockVector& state, const QuadVector& l);

}  // namespace pcqkd::fock
