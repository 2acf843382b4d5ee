#pragma once

// Phase-space linear algebra in shot-noise units (vacuum covariance = I).
// Quadratures are ordered (q1, p1, q2, p2, ...) with q = a + a^dag and
// p = -i (a - a^dag).

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace pcqkd {

using QuadVector = Eigen::Vector4d;
using CovMatrix = Eigen::Matrix4d;

/// Real 2n x 2n matrix S with S Omega S^T = Omega.
class SymplecticMatrix {
 public:
  /// Throws IntegrityError if `m` is not symplectic to 1e-12.
  explicit SymplecticMatrix(Eigen::MatrixXd m);

  const Eigen::MatrixXd& matrix() const { return m_; }
  Eigen::Index modes() const { return m_.rows() / 2; }

  /// Direct sum S1 (+) S2, acting on the modes of S1 followed by those of S2.
  friend SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b);

 private:
  Eigen::MatrixXd m_;
};

/// Mean vector and covariance matrix of an n-mode Gaussian state.
struct GaussianState {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  Eigen::Index modes() const { return mean.size() / 2; }
  static GaussianState vacuum(Eigen::Index modes);
};

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
Eigen::MatrixXd symplectic_form(Eigen::Index modes);

SymplecticMatrix identity_symplectic(Eigen::Index modes);

/// Two-mode squeezer (1/sqrt(1-l^2)) [[I, l Z], [l Z, I]], Z = diag(1,-1).
/// Requires 0 <= lambda < 1.
SymplecticMatrix two_mode_squeezer(double lambda);

/// Beam splitter [[sqrt(T) I, sqrt(1-T) I], [-sqrt(1-T) I, sqrt(T) I]].
/// Requires 0 <= T <= 1.
SymplecticMatrix beam_splitter(double transmissivity);

/// mean -> S mean, cov -> S cov S^T.
GaussianState apply_symplectic(const SymplecticMatrix& s, const GaussianState& st);

/// exp[-1/2 L^T (Omega cov Omega^T) L - i (Omega mean)^T L].
std::complex<double> char_fn(const GaussianState& st, const Eigen::VectorXd& lambda);

/// Moduli of the eigenvalues of i Omega cov, one per mode, ascending.
/// Values in [1 - 1e-9, 1) are clamped to 1; anything below 1 - 1e-6 is
/// rejected with IntegrityError.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// Von Neumann entropy (bits) of a thermal mode with symplectic eigenvalue nu:
/// G(nu) = ((nu+1)/2) log2((nu+1)/2) - ((nu-1)/2) log2((nu-1)/2).
double gaussian_entropy(double nu);

/// Largest |S Omega S^T - Omega| entry.
double symplectic_defect(const Eigen::MatrixXd& s);

}  // namespace pcqkd
