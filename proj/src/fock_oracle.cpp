#include "pcqkd/fock_oracle.hpp"

#include "pcqkd/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace pcqkd::fock {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::MatrixXcd exp_antihermitian(const Eigen::MatrixXcd& generator) {
  // G = -iH with H Hermitian, so exp(G) = V exp(-i w) V^dag.
  const Eigen::MatrixXcd h = kI * generator;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-kI * es.eigenvalues()(k));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Single-mode displacement exp(beta a^dag - beta* a) on n < dim.
Eigen::MatrixXcd displacement_matrix(cd beta, int dim) {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    g(n + 1, n) = beta * s;
    g(n, n + 1) = -std::conj(beta) * s;
  }
  return exp_antihermitian(g);
}

enum class Ladder { Lower, Raise };

// a or a^dag on one mode, truncated at the cutoff.
FockVector apply_ladder(const FockVector& s, int mode, Ladder op) {
  FockVector out(s.cutoff);
  const int n_max = s.cutoff;
  for (int n1 = 0; n1 < n_max; ++n1) {
    for (int n2 = 0; n2 < n_max; ++n2) {
      const cd a = s.at(n1, n2);
      if (a == cd{}) continue;
      int t1 = n1, t2 = n2;
      int& n = (mode == 0) ? t1 : t2;
      double factor;
      if (op == Ladder::Lower) {
        if (n == 0) continue;
        factor = std::sqrt(static_cast<double>(n));
        --n;
      } else {
        if (n + 1 >= n_max) continue;
        ++n;
        factor = std::sqrt(static_cast<double>(n));
      }
      out.at(t1, t2) += factor * a;
    }
  }
  return out;
}

FockVector combine(const FockVector& x, cd cx, const FockVector& y, cd cy) {
  FockVector out(x.cutoff);
  for (std::size_t i = 0; i < out.amp.size(); ++i) out.amp[i] = cx * x.amp[i] + cy * y.amp[i];
  return out;
}

cd inner(const FockVector& x, const FockVector& y) {
  cd acc{};
  for (std::size_t i = 0; i < x.amp.size(); ++i) acc += std::conj(x.amp[i]) * y.amp[i];
  return acc;
}

std::vector<double> coherent_amplitudes(double alpha, int dim) {
  std::vector<double> c(static_cast<std::size_t>(dim));
  double v = std::exp(-0.5 * alpha * alpha);
  for (int n = 0; n < dim; ++n) {
    if (n > 0) v *= alpha / std::sqrt(static_cast<double>(n));
    c[static_cast<std::size_t>(n)] = v;
  }
  return c;
}

}  // namespace

double FockVector::norm_squared() const {
  double acc = 0.0;
  for (const auto& a : amp) acc += std::norm(a);
  return acc;
}

Eigen::MatrixXd exp_antisymmetric(const Eigen::MatrixXd& generator) {
  return exp_antihermitian(generator.cast<cd>()).real();
}

Eigen::MatrixXd beam_splitter_block(int total, double transmissivity) {
  const double theta = std::acos(std::sqrt(std::clamp(transmissivity, 0.0, 1.0)));
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total + 1, total + 1);
  for (int k = 0; k < total; ++k) {
    // a^dag b |k, total-k> = sqrt((k+1)(total-k)) |k+1, total-k-1>
    const double s = std::sqrt(static_cast<double>((k + 1) * (total - k)));
    g(k + 1, k) += theta * s;
    g(k, k + 1) -= theta * s;
  }
  return exp_antisymmetric(g);
}

FockVector apply_beam_splitter(const FockVector& state, double transmissivity) {
  const int n_cut = state.cutoff;
  FockVector out(n_cut);
  double kept = 0.0;
  for (int total = 0; total <= 2 * (n_cut - 1); ++total) {
    const Eigen::MatrixXd u = beam_splitter_block(total, transmissivity);
    Eigen::VectorXcd in = Eigen::VectorXcd::Zero(total + 1);
    for (int k = std::max(0, total - n_cut + 1); k <= std::min(total, n_cut - 1); ++k) in(k) = state.at(k, total - k);
    const Eigen::VectorXcd res = u.cast<cd>() * in;
    for (int k = std::max(0, total - n_cut + 1); k <= std::min(total, n_cut - 1); ++k) {
      out.at(k, total - k) = res(k);
      kept += std::norm(res(k));
    }
  }
  out.leakage = state.leakage + std::max(0.0, state.norm_squared() - kept);
  return out;
}

FockVector tmsc_fock(double lambda, double d, int cutoff) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("tmsc_fock: lambda must lie in [0, 1)");
  if (cutoff < 2) throw DomainError("tmsc_fock: cutoff must be >= 2");
  const int padded = cutoff + std::max(20, cutoff / 2);
  const double r = std::atanh(lambda);
  const auto coh = coherent_amplitudes(0.5 * d, padded);

  // Two-mode squeezing conserves n1 - n2; exponentiate each diagonal block.
  FockVector big(padded);
  for (int delta = -(padded - 1); delta <= padded - 1; ++delta) {
    const int off1 = std::max(delta, 0);
    const int off2 = std::max(-delta, 0);
    const int len = padded - std::max(off1, off2);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(len, len);
    for (int k = 0; k + 1 < len; ++k) {
      // a^dag b^dag |k+off1, k+off2> = sqrt((k+off1+1)(k+off2+1)) |k+1+off1, k+1+off2>
      const double s = std::sqrt(static_cast<double>((k + off1 + 1) * (k + off2 + 1)));
      g(k + 1, k) = r * s;
      g(k, k + 1) = -r * s;
    }
    Eigen::VectorXd in(len);
    for (int k = 0; k < len; ++k) in(k) = coh[static_cast<std::size_t>(k + off1)] * coh[static_cast<std::size_t>(k + off2)];
    const Eigen::VectorXd res = exp_antisymmetric(g) * in;
    for (int k = 0; k < len; ++k) big.at(k + off1, k + off2) = res(k);
  }

  FockVector out(cutoff);
  for (int n1 = 0; n1 < cutoff; ++n1) {
    for (int n2 = 0; n2 < cutoff; ++n2) out.at(n1, n2) = big.at(n1, n2);
  }
  out.leakage = std::max(0.0, 1.0 - out.norm_squared());
  if (out.leakage > kLeakageTol) {
    std::ostringstream os;
    os << "tmsc_fock: truncation leakage " << out.leakage << " exceeds " << kLeakageTol << " at cutoff " << cutoff
       << "; try cutoff " << 2 * cutoff;
    throw CutoffError(os.str(), 2 * cutoff);
  }
  return out;
}

FockVector catalyze(const FockVector& state, double transmissivity, int m, double* success_prob) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) throw DomainError("catalyze: T_C must lie in [0, 1]");
  if (m < 0) throw DomainError("catalyze: m must be >= 0");
  const int n_cut = state.cutoff;
  // <j, m| U |j, m> on (A2, ancilla): photon conservation makes the
  // post-selected map diagonal in n2.
  std::vector<double> diag(static_cast<std::size_t>(n_cut));
  for (int j = 0; j < n_cut; ++j) diag[static_cast<std::size_t>(j)] = beam_splitter_block(j + m, transmissivity)(j, j);

  FockVector out(n_cut);
  for (int n1 = 0; n1 < n_cut; ++n1) {
    for (int n2 = 0; n2 < n_cut; ++n2) out.at(n1, n2) = diag[static_cast<std::size_t>(n2)] * state.at(n1, n2);
  }
  const double prob = out.norm_squared();
  if (!(prob > 0.0)) throw IntegrityError("catalyze: post-selection probability is zero");
  const double scale = 1.0 / std::sqrt(prob);
  for (auto& a : out.amp) a *= scale;
  out.leakage = state.leakage;
  if (success_prob != nullptr) *success_prob = prob;
  return out;
}

OracleResult quadrature_moments(const FockVector& truncated) {
  // One spare level so a^dag acts exactly on the retained amplitudes.
  FockVector state(truncated.cutoff + 1);
  for (int n1 = 0; n1 < truncated.cutoff; ++n1) {
    for (int n2 = 0; n2 < truncated.cutoff; ++n2) state.at(n1, n2) = truncated.at(n1, n2);
  }
  std::array<FockVector, 4> x;
  for (int mode = 0; mode < 2; ++mode) {
    const FockVector lo = apply_ladder(state, mode, Ladder::Lower);
    const FockVector hi = apply_ladder(state, mode, Ladder::Raise);
    x[static_cast<std::size_t>(2 * mode)] = combine(lo, 1.0, hi, 1.0);        // q = a + a^dag
    x[static_cast<std::size_t>(2 * mode + 1)] = combine(lo, -kI, hi, kI);     // p = -i (a - a^dag)
  }
  OracleResult out;
  for (int i = 0; i < 4; ++i) out.mean(i) = inner(state, x[static_cast<std::size_t>(i)]).real();
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double sym = inner(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]).real();
      out.cov(i, j) = out.cov(j, i) = sym - out.mean(i) * out.mean(j);
    }
  }
  out.success_prob = 1.0;
  return out;
}

OracleResult catalyze_fock(const FockVector& state, double transmissivity, int m) {
  if (state.leakage > kLeakageTol) {
    throw CutoffError("catalyze_fock: input state exceeds the leakage bound", 2 * state.cutoff);
  }
  double prob = 0.0;
  const FockVector post = catalyze(state, transmissivity, m, &prob);
  OracleResult out = quadrature_moments(post);
  out.success_prob = prob;
  return out;
}

std::complex<double> displacement_expectation(const FockVector& state, const QuadVector& l) {
  const int n_cut = state.cutoff;
  const Eigen::MatrixXcd d1 = displacement_matrix({l(0), l(1)}, n_cut);
  const Eigen::MatrixXcd d2 = displacement_matrix({l(2), l(3)}, n_cut);
  Eigen::Map<const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> psi(state.amp.data(), n_cut,
                                                                                          n_cut);
  // (D1 (x) D2) psi as a matrix: D1 * Psi * D2^T.
  const Eigen::MatrixXcd moved = d1 * psi * d2.transpose();
  cd acc{};
  for (int i = 0; i < n_cut; ++i) {
    for (int j = 0; j < n_cut; ++j) acc += std::conj(psi(i, j)) * moved(i, j);
  }
  return acc;
}

}  // namespace pcqkd::fock
