#include "pcqkd/catalysis.hpp"

#include "pcqkd/errors.hpp"

#include <cmath>
#include <sstream>

namespace pcqkd {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Slots of the pre-integration exponent.
enum Slot : int { U1 = 0, V1, U2, V2, TAU1, SIG1, TAU2, SIG2, TAU3, SIG3, kSlots };

constexpr double kPatternTol = 1e-8;
constexpr double kProbTol = 1e-9;

struct QuadraticForm {
  Eigen::Matrix<cd, kSlots, kSlots> q = Eigen::Matrix<cd, kSlots, kSlots>::Zero();
  Eigen::Matrix<cd, kSlots, 1> l = Eigen::Matrix<cd, kSlots, 1>::Zero();

  // Adds c * z_a * z_b.
  void bilinear(int a, int b, cd c) {
    if (a == b) {
      q(a, a) += 2.0 * c;
    } else {
      q(a, b) += c;
      q(b, a) += c;
    }
  }
  // Adds c * z_a * (f . z).
  void times_linear(int a, const Eigen::Matrix<cd, kSlots, 1>& f, cd c) {
    for (int b = 0; b < kSlots; ++b) {
      if (f(b) != cd{}) bilinear(a, b, c * f(b));
    }
  }
};

long double factorial(int n) {
  long double f = 1.0L;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

TruncatedSeries::Exponents series_caps(int m, int phase_space_cap) {
  return {m, m, m, m, phase_space_cap, phase_space_cap, phase_space_cap, phase_space_cap};
}

int series_degree_bound(int m) { return 4 * m + 4; }

// exp(exponent - log P0) as a truncated series; `shift` substitutes a numeric
// phase-space point when the phase-space caps are zero.
TruncatedSeries exponent_series(const GeneratingExponent& g, int m, int phase_space_cap,
                                const QuadVector* shift) {
  const int bound = series_degree_bound(m);
  const auto caps = series_caps(m, phase_space_cap);
  TruncatedSeries s(bound, caps);

  Eigen::Matrix<cd, 8, 1> lin = g.linear;
  cd constant{};
  if (shift != nullptr) {
    Eigen::Matrix<cd, 8, 1> z0 = Eigen::Matrix<cd, 8, 1>::Zero();
    z0.tail<4>() = shift->cast<cd>();
    lin = g.linear + g.quadratic * z0;
    constant = (g.linear.transpose() * z0)(0) + (0.5 * z0.transpose() * g.quadratic * z0)(0);
  }
  s.add_term(TruncatedSeries::Exponents{}, constant);

  for (int a = 0; a < 8; ++a) {
    TruncatedSeries::Exponents e{};
    e[a] = 1;
    if (lin(a) != cd{} && s.retains(e)) s.add_term(e, lin(a));
    for (int b = a; b < 8; ++b) {
      const cd c = (a == b) ? 0.5 * g.quadratic(a, a) : g.quadratic(a, b);
      if (c == cd{}) continue;
      TruncatedSeries::Exponents eb{};
      eb[a] += 1;
      eb[b] += 1;
      if (s.retains(eb)) s.add_term(eb, c);
    }
  }
  return s.exp();
}

// Slice of the series at u1 = v1 = u2 = v2 = m, times (m!)^2 and P0:
// the unnormalised characteristic function as a polynomial in (tau, sigma).
TruncatedSeries::Scalar catalysed_coefficient(const TruncatedSeries& s, const GeneratingExponent& g, int m,
                                              const std::array<int, 4>& phase_space_exponents) {
  TruncatedSeries::Exponents e{m, m, m, m, phase_space_exponents[0], phase_space_exponents[1],
                               phase_space_exponents[2], phase_space_exponents[3]};
  const double mf = static_cast<double>(factorial(m));
  return s.coefficient(e) * (mf * mf) * g.p0();
}

}  // namespace

CatalysisParams CatalysisParams::from_variance(double variance, double d, double tc, int m) {
  if (!(variance >= 1.0) || !std::isfinite(variance)) {
    throw DomainError("variance must be >= 1");
  }
  return {std::sqrt((variance - 1.0) / (variance + 1.0)), d, tc, m};
}

void CatalysisParams::validate(int max_order) const {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw DomainError("lambda must lie in [0, 1)");
  if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("displacement must be finite and >= 0");
  if (!(tc > 0.0 && tc <= 1.0)) throw DomainError("T_C must lie in (0, 1]");
  if (m < 0 || m > max_order) {
    std::ostringstream os;
    os << "catalysis order must lie in [0, " << max_order << "]";
    throw DomainError(os.str());
  }
}

double GeneratingExponent::p0() const { return std::exp(log_p0); }

std::complex<double> GeneratingExponent::evaluate(const Eigen::Matrix<std::complex<double>, 8, 1>& z) const {
  return log_p0 + (linear.transpose() * z)(0) + 0.5 * (z.transpose() * quadratic * z)(0);
}

GaussianState tmsc_state(const CatalysisParams& p) {
  GaussianState in = GaussianState::vacuum(2);
  in.mean << p.d, 0.0, p.d, 0.0;
  return apply_symplectic(two_mode_squeezer(p.lambda), in);
}

CatalyzedState zero_pc_state(const CatalysisParams& p) {
  p.validate();
  if (p.m != 0) throw DomainError("zero_pc_state requires m = 0");
  const double l = p.lambda, t = p.tc, d = p.d;
  const double l2 = l * l;
  const double denom = 1.0 - l2 * t;

  CatalyzedState out;
  out.params = p;
  const double scale = d * std::sqrt(1.0 - l2) / denom;
  out.mean << scale * (1.0 + l * t), 0.0, scale * (1.0 + l) * std::sqrt(t), 0.0;

  const double lb = l * std::sqrt(t);
  const double lb2 = lb * lb;
  const double diag = (1.0 + lb2) / (1.0 - lb2);
  const double off = 2.0 * lb / (1.0 - lb2);
  out.cov.setZero();
  out.cov.diagonal().setConstant(diag);
  out.cov(0, 2) = out.cov(2, 0) = off;
  out.cov(1, 3) = out.cov(3, 1) = -off;

  out.success_prob = (1.0 - l2) / denom * std::exp(-d * d * (l + 1.0) * (l + 1.0) * (1.0 - t) / (4.0 * denom));
  return out;
}

GeneratingExponent generating_exponent(const CatalysisParams& p) {
  p.validate();

  // Three-mode Gaussian part: (TMSC (x) ancilla vacuum envelope) after the
  // beam splitter on (A2, F0).
  GaussianState in = GaussianState::vacuum(3);
  const GaussianState tmsc = tmsc_state(p);
  in.mean.head<4>() = tmsc.mean;
  in.cov.topLeftCorner<4, 4>() = tmsc.cov;
  const SymplecticMatrix bs = direct_sum(identity_symplectic(1), beam_splitter(p.tc));
  const GaussianState out = apply_symplectic(bs, in);

  const Eigen::MatrixXd omega = symplectic_form(3);
  const Eigen::MatrixXd m_quad = omega * out.cov * omega.transpose();
  const Eigen::VectorXd m_lin = omega * out.mean;

  QuadraticForm f;
  const int lam[6] = {TAU1, SIG1, TAU2, SIG2, TAU3, SIG3};
  for (int a = 0; a < 6; ++a) {
    f.l(lam[a]) += -kI * m_lin(a);
    for (int b = 0; b < 6; ++b) f.q(lam[a], lam[b]) += -m_quad(a, b);
  }

  // Ancilla input: Laguerre generator evaluated at the pre-splitter argument.
  const Eigen::MatrixXd inv = bs.matrix().inverse();
  Eigen::Matrix<cd, kSlots, 1> tau_in = Eigen::Matrix<cd, kSlots, 1>::Zero();
  Eigen::Matrix<cd, kSlots, 1> sig_in = Eigen::Matrix<cd, kSlots, 1>::Zero();
  for (int a = 0; a < 6; ++a) {
    tau_in(lam[a]) = inv(4, a);
    sig_in(lam[a]) = inv(5, a);
  }
  f.bilinear(U1, V1, 1.0);
  f.times_linear(U1, tau_in + kI * sig_in, 1.0);
  f.times_linear(V1, tau_in - kI * sig_in, -1.0);

  // Projector |m><m| on the ancilla output, argument -Lambda3.
  f.bilinear(TAU3, TAU3, -0.5);
  f.bilinear(SIG3, SIG3, -0.5);
  f.bilinear(U2, V2, 1.0);
  f.bilinear(U2, TAU3, -1.0);
  f.bilinear(U2, SIG3, -kI);
  f.bilinear(V2, TAU3, 1.0);
  f.bilinear(V2, SIG3, -kI);

  // (1/pi) * integral over (tau3, sigma3) of exp(-1/2 x^T A x + b^T x).
  const Eigen::Matrix<cd, 8, 8> qyy = f.q.topLeftCorner<8, 8>();
  const Eigen::Matrix<cd, 8, 2> qyx = f.q.topRightCorner<8, 2>();
  const Eigen::Matrix<cd, 2, 2> qxx = f.q.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d a = -qxx.real();
  if (qxx.imag().cwiseAbs().maxCoeff() > 1e-14 || a.determinant() <= 0.0) {
    throw IntegrityError("generating_exponent: ancilla integral is not a decaying Gaussian");
  }
  const Eigen::Matrix2cd a_inv = a.inverse().cast<cd>();
  const Eigen::Matrix<cd, 2, 1> lx = f.l.tail<2>();

  GeneratingExponent g;
  g.quadratic = qyy + qyx * a_inv * qyx.transpose();
  g.linear = f.l.head<8>() + qyx * a_inv * lx;
  const cd c = 0.5 * (lx.transpose() * a_inv * lx)(0);
  if (std::abs(c.imag()) > 1e-12) throw IntegrityError("generating_exponent: complex normalisation");
  g.log_p0 = std::log(2.0 / std::sqrt(a.determinant())) + c.real();

  const double l2 = p.lambda * p.lambda;
  g.x0 = 1.0 / (p.tc * l2 - 1.0);
  g.x1 = -g.quadratic(U1, V1).real();
  g.x4 = -g.quadratic(U2, V2).real();
  g.x7 = g.quadratic(U1, V2).real();
  g.y0 = g.linear(U1).real();
  g.y1 = g.linear(U2).real();
  auto form = [&](int slot) {
    return LinearForm{g.linear(slot), g.quadratic.block<1, 4>(slot, TAU1).transpose()};
  };
  g.x2 = form(U1);
  g.x3 = form(V1);
  g.x5 = form(U2);
  g.x6 = form(V2);
  return g;
}

std::complex<double> m_pc_unnormalized_char(const CatalysisParams& p, const QuadVector& l) {
  const GeneratingExponent g = generating_exponent(p);
  const TruncatedSeries s = exponent_series(g, p.m, 0, &l);
  return catalysed_coefficient(s, g, p.m, {0, 0, 0, 0});
}

double success_probability(const CatalysisParams& p) {
  const cd value = m_pc_unnormalized_char(p, QuadVector::Zero());
  const double prob = value.real();
  if (!(prob > 0.0 && prob <= 1.0 + kProbTol) || std::abs(value.imag()) > 1e-9) {
    std::ostringstream os;
    os << "success probability out of range: " << value;
    throw IntegrityError(os.str());
  }
  return prob;
}

namespace {

// Normalised Taylor coefficients in (tau1, sigma1, tau2, sigma2) up to degree 2.
struct NormalisedSlice {
  TruncatedSeries series;
  GeneratingExponent g;
  int m;
  double prob;

  cd coefficient(const std::array<int, 4>& e) const { return catalysed_coefficient(series, g, m, e) / prob; }
};

NormalisedSlice normalised_slice(const CatalysisParams& p) {
  GeneratingExponent g = generating_exponent(p);
  TruncatedSeries s = exponent_series(g, p.m, 2, nullptr);
  const cd p_value = catalysed_coefficient(s, g, p.m, {0, 0, 0, 0});
  const double prob = p_value.real();
  if (!(prob > 0.0 && prob <= 1.0 + kProbTol) || std::abs(p_value.imag()) > 1e-9) {
    std::ostringstream os;
    os << "success probability out of range: " << p_value;
    throw IntegrityError(os.str());
  }
  return {std::move(s), std::move(g), p.m, prob};
}

// qp_orders = (r1, s1, r2, s2) -> Taylor exponents (tau1, sigma1, tau2, sigma2) = (s1, r1, s2, r2).
cd weyl_from_slice(const NormalisedSlice& slice, const std::array<int, 4>& qp) {
  const std::array<int, 4> e{qp[1], qp[0], qp[3], qp[2]};
  const int r = qp[0] + qp[2];
  const int s = qp[1] + qp[3];
  const cd phase = std::pow(-kI, r) * std::pow(kI, s);
  double fact = 1.0;
  for (int k : e) fact *= static_cast<double>(factorial(k));
  return phase * fact * slice.coefficient(e);
}

}  // namespace

std::complex<double> weyl_moment(const CatalysisParams& p, const std::array<int, 4>& qp_orders) {
  int total = 0;
  for (int k : qp_orders) {
    if (k < 0) throw DomainError("weyl_moment: negative order");
    total += k;
  }
  if (total > 2) throw DomainError("weyl_moment: total order must be <= 2");
  return weyl_from_slice(normalised_slice(p), qp_orders);
}

CatalyzedState moments(const CatalysisParams& p) {
  const NormalisedSlice slice = normalised_slice(p);

  CatalyzedState out;
  out.params = p;
  out.success_prob = std::min(slice.prob, 1.0);

  double max_imag = 0.0;
  auto order = [](int i, int j) {
    std::array<int, 4> o{0, 0, 0, 0};
    o[i] += 1;
    if (j >= 0) o[j] += 1;
    return o;
  };
  for (int i = 0; i < 4; ++i) {
    const cd v = weyl_from_slice(slice, order(i, -1));
    max_imag = std::max(max_imag, std::abs(v.imag()));
    out.mean(i) = v.real();
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const cd v = weyl_from_slice(slice, order(i, j));
      max_imag = std::max(max_imag, std::abs(v.imag()));
      out.cov(i, j) = out.cov(j, i) = v.real() - out.mean(i) * out.mean(j);
    }
  }
  if (max_imag > kPatternTol) {
    std::ostringstream os;
    os << "moments: Weyl moments have imaginary part " << max_imag;
    throw IntegrityError(os.str());
  }

  constexpr std::array<std::array<int, 2>, 4> kZeroEntries{{{0, 1}, {0, 3}, {1, 2}, {2, 3}}};
  for (const auto& [i, j] : kZeroEntries) {
    if (std::abs(out.cov(i, j)) > kPatternTol) {
      std::ostringstream os;
      os << "moments: covariance entry (" << i << "," << j << ") = " << out.cov(i, j)
         << " breaks the q/p block pattern";
      throw IntegrityError(os.str());
    }
    out.cov(i, j) = out.cov(j, i) = 0.0;
  }
  return out;
}

}  // namespace pcqkd
