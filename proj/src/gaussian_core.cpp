#include "pcqkd/gaussian_core.hpp"

#include "pcqkd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pcqkd {

namespace {

constexpr double kSymplecticTol = 1e-12;
constexpr double kClampTol = 1e-9;
constexpr double kPhysicalTol = 1e-6;

}  // namespace

Eigen::MatrixXd symplectic_form(Eigen::Index modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double symplectic_defect(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) return INFINITY;
  const Eigen::MatrixXd omega = symplectic_form(s.rows() / 2);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  const double defect = symplectic_defect(m_);
  if (!(defect < kSymplecticTol)) {
    std::ostringstream os;
    os << "matrix is not symplectic (defect " << defect << ")";
    throw IntegrityError(os.str());
  }
}

SymplecticMatrix direct_sum(const SymplecticMatrix& a, const SymplecticMatrix& b) {
  const Eigen::Index na = a.m_.rows(), nb = b.m_.rows();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(na + nb, na + nb);
  m.topLeftCorner(na, na) = a.m_;
  m.bottomRightCorner(nb, nb) = b.m_;
  return SymplecticMatrix(std::move(m));
}

GaussianState GaussianState::vacuum(Eigen::Index modes) {
  return {Eigen::VectorXd::Zero(2 * modes), Eigen::MatrixXd::Identity(2 * modes, 2 * modes)};
}

SymplecticMatrix identity_symplectic(Eigen::Index modes) {
  return SymplecticMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

SymplecticMatrix two_mode_squeezer(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw DomainError("two_mode_squeezer: lambda must lie in [0, 1)");
  }
  const double pref = 1.0 / std::sqrt(1.0 - lambda * lambda);
  Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Eigen::MatrixXd s(4, 4);
  s << Eigen::Matrix2d::Identity(), lambda * z, lambda * z, Eigen::Matrix2d::Identity();
  return SymplecticMatrix(pref * s);
}

SymplecticMatrix beam_splitter(double transmissivity) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw DomainError("beam_splitter: transmissivity must lie in [0, 1]");
  }
  const double t = std::sqrt(transmissivity);
  const double r = std::sqrt(1.0 - transmissivity);
  const Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Eigen::MatrixXd b(4, 4);
  b << t * id, r * id, -r * id, t * id;
  return SymplecticMatrix(std::move(b));
}

GaussianState apply_symplectic(const SymplecticMatrix& s, const GaussianState& st) {
  const auto& m = s.matrix();
  if (m.cols() != st.mean.size() || st.cov.rows() != st.mean.size()) {
    throw DomainError("apply_symplectic: dimension mismatch");
  }
  return {m * st.mean, m * st.cov * m.transpose()};
}

std::complex<double> char_fn(const GaussianState& st, const Eigen::VectorXd& lambda) {
  const Eigen::MatrixXd omega = symplectic_form(st.modes());
  const double quad = lambda.dot(omega * st.cov * omega.transpose() * lambda);
  const double lin = (omega * st.mean).dot(lambda);
  return std::exp(std::complex<double>(-0.5 * quad, -lin));
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const Eigen::Index n = cov.rows() / 2;
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0) {
    throw IntegrityError("symplectic_eigenvalues: covariance must be 2n x 2n");
  }
  const Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw IntegrityError("symplectic_eigenvalues: covariance is not positive definite");
  }
  // Spectrum of i Omega cov equals that of the Hermitian i sqrt(cov) Omega sqrt(cov).
  const Eigen::MatrixXd root = es.operatorSqrt();
  const Eigen::MatrixXcd herm =
      std::complex<double>(0.0, 1.0) * (root * symplectic_form(n) * root).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(herm, Eigen::EigenvaluesOnly);
  // Eigenvalues come as +-nu pairs sorted ascending; the top half are the nu.
  std::vector<double> nus;
  nus.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = n; k < 2 * n; ++k) {
    double nu = hs.eigenvalues()(k);
    if (nu < 1.0 - kPhysicalTol) {
      std::ostringstream os;
      os << "covariance violates the uncertainty relation (symplectic eigenvalue " << nu << ")";
      throw IntegrityError(os.str());
    }
    if (nu < 1.0 && nu >= 1.0 - kClampTol) nu = 1.0;
    nus.push_back(nu);
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

double gaussian_entropy(double nu) {
  if (!(nu >= 1.0 - kPhysicalTol)) {
    throw DomainError("gaussian_entropy: nu must be >= 1");
  }
  if (nu <= 1.0) return 0.0;
  const double plus = 0.5 * (nu + 1.0);
  const double minus = 0.5 * (nu - 1.0);
  return plus * std::log2(plus) - minus * std::log2(minus);
}

}  // namespace pcqkd
