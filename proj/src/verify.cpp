#include "pcqkd/verify.hpp"

#include "pcqkd/errors.hpp"
#include "pcqkd/fock_oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pcqkd {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// chi_in(S^-1 Lambda) split into the TMSC factor and the pre-splitter
// ancilla argument; everything Lambda3-independent is precomputed.
struct InputChar {
  Eigen::Matrix4d quad;   // Omega cov Omega^T of the TMSC state
  Eigen::Vector4d lin;    // Omega mean
  Eigen::Matrix<double, 6, 6> inv;

  explicit InputChar(const CatalysisParams& p) {
    const GaussianState tmsc = tmsc_state(p);
    const Eigen::MatrixXd omega = symplectic_form(2);
    quad = omega * tmsc.cov * omega.transpose();
    lin = omega * tmsc.mean;
    inv = direct_sum(identity_symplectic(1), beam_splitter(p.tc)).matrix().inverse();
  }

  // Returns chi_TMSC at the first four components and writes the ancilla
  // argument (tau3', sigma3').
  cd operator()(const QuadVector& l, double tau3, double sig3, double& tau_in, double& sig_in) const {
    Eigen::Matrix<double, 6, 1> full;
    full << l, tau3, sig3;
    const Eigen::Matrix<double, 6, 1> pre = inv * full;
    const Eigen::Vector4d x = pre.head<4>();
    tau_in = pre(4);
    sig_in = pre(5);
    return std::exp(cd{-0.5 * x.dot(quad * x), -lin.dot(x)});
  }
};

template <class F>
cd integrate(const QuadratureGrid& grid, F&& f) {
  const int n = static_cast<int>(std::lround(grid.radius / grid.step));
  cd sum{};
  for (int i = -n; i <= n; ++i) {
    const double wi = (std::abs(i) == n) ? 0.5 : 1.0;
    for (int j = -n; j <= n; ++j) {
      const double wj = (std::abs(j) == n) ? 0.5 : 1.0;
      sum += wi * wj * f(i * grid.step, j * grid.step);
    }
  }
  return sum * grid.step * grid.step / std::numbers::pi;
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

std::string describe(const char* head, const CatalysisParams& p) {
  std::ostringstream os;
  os << head << " m=" << p.m << " lambda=" << p.lambda << " d=" << p.d << " T_C=" << p.tc;
  return os.str();
}

}  // namespace

std::complex<double> quadrature_char(const CatalysisParams& p, const QuadVector& l, const QuadratureGrid& grid) {
  p.validate();
  const InputChar chi(p);
  const unsigned m = static_cast<unsigned>(p.m);
  return integrate(grid, [&](double t3, double s3) {
    double ti = 0.0, si = 0.0;
    const cd base = chi(l, t3, s3, ti, si);
    const double r_in = ti * ti + si * si;
    const double r_out = t3 * t3 + s3 * s3;
    return base * std::exp(-0.5 * (r_in + r_out)) * std::laguerre(m, r_in) * std::laguerre(m, r_out);
  });
}

std::complex<double> quadrature_generating_function(const CatalysisParams& p,
                                                    const Eigen::Matrix<std::complex<double>, 8, 1>& z,
                                                    const QuadratureGrid& grid) {
  p.validate();
  const InputChar chi(p);
  const QuadVector l = z.tail<4>().real();
  if (z.tail<4>().imag().cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("quadrature_generating_function: phase-space point must be real");
  }
  const cd u1 = z(0), v1 = z(1), u2 = z(2), v2 = z(3);
  return integrate(grid, [&](double t3, double s3) {
    double ti = 0.0, si = 0.0;
    const cd base = chi(l, t3, s3, ti, si);
    const cd b_in{ti, si};
    const cd b_out{t3, s3};
    // e^{-|b|^2/2} exp(u v + u b - v b*) generates e^{-|b|^2/2} L_m(|b|^2) / (m!)^2
    // through the u^m v^m coefficient; the projector enters at -Lambda3.
    const cd gen_in = std::exp(-0.5 * std::norm(b_in) + u1 * v1 + u1 * b_in - v1 * std::conj(b_in));
    const cd gen_out = std::exp(-0.5 * std::norm(b_out) + u2 * v2 - u2 * b_out + v2 * std::conj(b_out));
    return base * gen_in * gen_out;
  });
}

double oracle_delta(const CatalysisParams& p, int cutoff) {
  const CatalyzedState series = moments(p);
  const fock::FockVector in = fock::tmsc_fock(p.lambda, p.d, cutoff);
  const fock::OracleResult brute = fock::catalyze_fock(in, p.tc, p.m);
  double delta = max_abs(series.mean - brute.mean);
  delta = std::max(delta, max_abs(series.cov - brute.cov));
  delta = std::max(delta, std::abs(series.success_prob - brute.success_prob));
  return delta;
}

std::vector<CheckRow> run_verification(const VerifyOptions& opt) {
  std::vector<CheckRow> rows;

  for (int m : opt.orders) {
    for (double l : opt.lambdas) {
      for (double d : opt.displacements) {
        for (double t : opt.transmissivities) {
          const CatalysisParams p{l, d, t, m};
          rows.push_back({describe("fock", p), oracle_delta(p, opt.cutoff), opt.oracle_tolerance});
        }
      }
    }
  }

  // T_C = 1: the ancilla passes straight through.
  for (int m : opt.orders) {
    for (double l : opt.lambdas) {
      for (double d : opt.displacements) {
        const CatalysisParams p{l, d, 1.0, m};
        const CatalyzedState s = moments(p);
        const GaussianState ref = tmsc_state(p);
        double delta = std::max(max_abs(s.mean - ref.mean), max_abs(s.cov - ref.cov));
        delta = std::max(delta, std::abs(s.success_prob - 1.0));
        rows.push_back({describe("tmsc-limit", p), delta, opt.limit_tolerance});
      }
    }
  }

  // m = 0: series path against the Gaussian closed form.
  for (double l : opt.lambdas) {
    for (double d : opt.displacements) {
      for (double t : opt.transmissivities) {
        const CatalysisParams p{l, d, t, 0};
        const CatalyzedState s = moments(p);
        const CatalyzedState c = zero_pc_state(p);
        double delta = std::max(max_abs(s.mean - c.mean), max_abs(s.cov - c.cov));
        delta = std::max(delta, std::abs(s.success_prob - c.success_prob));
        rows.push_back({describe("zero-pc", p), delta, opt.limit_tolerance});
      }
    }
  }

  // Generating exponent against quadrature at random (u, v, Lambda).
  const GeneratingExponent g = generating_exponent(opt.exponent_params);
  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> uv(-0.5, 0.5);
  std::uniform_real_distribution<double> ps(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < opt.exponent_points; ++k) {
    Eigen::Matrix<cd, 8, 1> z;
    for (int i = 0; i < 4; ++i) z(i) = uv(rng);
    for (int i = 4; i < 8; ++i) z(i) = ps(rng);
    const cd closed = std::exp(g.evaluate(z));
    const cd numeric = quadrature_generating_function(opt.exponent_params, z, opt.quadrature);
    worst = std::max(worst, std::abs(numeric - closed) / std::abs(closed));
  }
  rows.push_back({describe("exponent-quadrature", opt.exponent_params), worst, opt.exponent_tolerance});

  // Extracted characteristic function against direct Laguerre quadrature.
  worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    QuadVector l;
    for (int i = 0; i < 4; ++i) l(i) = ps(rng);
    const cd closed = m_pc_unnormalized_char(opt.exponent_params, l);
    const cd numeric = quadrature_char(opt.exponent_params, l, opt.quadrature);
    worst = std::max(worst, std::abs(numeric - closed));
  }
  rows.push_back({describe("char-quadrature", opt.exponent_params), worst, opt.exponent_tolerance});
  return rows;
}

}  // namespace pcqkd
