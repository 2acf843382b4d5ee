#include "pcqkd/channel_keyrate.hpp"

#include "pcqkd/errors.hpp"

#include <cmath>
#include <sstream>

namespace pcqkd {

void ProtocolParams::validate() const {
  if (!(l_ac >= 0.0) || !(l_bc >= 0.0)) throw DomainError("channel lengths must be >= 0");
  if (!(gamma > 0.0)) throw DomainError("attenuation gamma must be > 0");
  if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("reconciliation efficiency must lie in (0, 1]");
  if (!(eps_a >= 0.0) || !(eps_b >= 0.0)) throw DomainError("excess noise must be >= 0");
  if (gain && !(*gain > 0.0)) throw DomainError("explicit gain must be > 0");
}

double attenuation(double length_km, double gamma_db_per_km) {
  if (!(length_km >= 0.0)) throw DomainError("attenuation: length must be >= 0");
  return std::pow(10.0, -(gamma_db_per_km * length_km) / 10.0);
}

EquivalentChannel equivalent_channel(const ProtocolParams& p) {
  p.validate();
  EquivalentChannel ch;
  ch.t_a = attenuation(p.l_ac, p.gamma);
  ch.t_b = attenuation(p.l_bc, p.gamma);
  const double g2 = p.gain ? (*p.gain) * (*p.gain) : 2.0 / ch.t_b;
  ch.t = 0.5 * g2 * ch.t_a;
  if (!(ch.t > 0.0) || !std::isfinite(ch.t)) throw DomainError("equivalent channel transmissivity must be > 0");
  // (T_B / T_A)(eps_B - 2) + eps_A + 2 / T_A, grouped so the 2 / T_A terms
  // cancel exactly when T_B = 1.
  ch.eps_th = (ch.t_b * p.eps_b + 2.0 * (1.0 - ch.t_b)) / ch.t_a + p.eps_a;
  ch.chi_ch = (1.0 - ch.t) / ch.t + ch.eps_th;
  return ch;
}

CovMatrix propagate(const CovMatrix& cov, const EquivalentChannel& ch) {
  CovMatrix out = cov;
  out.bottomRightCorner<2, 2>() = ch.t * (cov.bottomRightCorner<2, 2>() + ch.chi_ch * Eigen::Matrix2d::Identity());
  out.topRightCorner<2, 2>() = std::sqrt(ch.t) * cov.topRightCorner<2, 2>();
  out.bottomLeftCorner<2, 2>() = out.topRightCorner<2, 2>().transpose();
  symplectic_eigenvalues(out);  // throws IntegrityError when unphysical
  return out;
}

double mutual_information(const CovMatrix& joint) {
  double info = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double a = joint(k, k);
    const double b = joint(2 + k, 2 + k);
    const double c = joint(k, 2 + k);
    const double b_given_a = b - c * c / (a + 1.0);
    const double num = b + 1.0;
    const double den = b_given_a + 1.0;
    if (!(num > 0.0) || !(den > 0.0)) {
      std::ostringstream os;
      os << "mutual_information: non-positive variance (" << num << ", " << den << ")";
      throw IntegrityError(os.str());
    }
    info += 0.5 * std::log2(num / den);
  }
  return info;
}

double holevo_bound(const CovMatrix& joint) {
  const auto nus = symplectic_eigenvalues(joint);
  double cond_det = 1.0;
  for (int k = 0; k < 2; ++k) {
    const double a = joint(k, k);
    const double b = joint(2 + k, 2 + k);
    const double c = joint(k, 2 + k);
    cond_det *= a - c * c / (b + 1.0);
  }
  if (!(cond_det > 0.0)) throw IntegrityError("holevo_bound: conditional covariance is not positive");
  double nu3 = std::sqrt(cond_det);
  if (nu3 < 1.0 - 1e-6) throw IntegrityError("holevo_bound: conditional state violates the uncertainty relation");
  nu3 = std::max(nu3, 1.0);
  const double chi = gaussian_entropy(nus[0]) + gaussian_entropy(nus[1]) - gaussian_entropy(nu3);
  return std::max(chi, 0.0);
}

KeyRateReport key_rate(const CatalyzedState& state, const ProtocolParams& proto) {
  const EquivalentChannel ch = equivalent_channel(proto);
  const CovMatrix joint = propagate(state.cov, ch);
  KeyRateReport r;
  r.i_ab = mutual_information(joint);
  r.chi_be = holevo_bound(joint);
  r.success_prob = state.success_prob;
  r.key_rate = state.success_prob * (proto.beta * r.i_ab - r.chi_be);
  r.state = state.params;
  r.protocol = proto;
  return r;
}

KeyRateReport key_rate(const CatalysisParams& p, const ProtocolParams& proto) {
  return key_rate(moments(p), proto);
}

}  // namespace pcqkd
