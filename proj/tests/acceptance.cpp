// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "pcqkd/channel_keyrate.hpp"
#include "pcqkd/errors.hpp"
#include "pcqkd/optimizer.hpp"
#include "pcqkd/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace pcqkd;

namespace {

constexpr double kTargetRate = 1e-5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

ProtocolParams at(double length) {
  ProtocolParams p;
  p.l_ac = length;
  return p;
}

OptDomain pinned(double v, double d, double t) {
  OptDomain dom;
  dom.fixed_variance = v;
  dom.fixed_displacement = d;
  dom.fixed_transmissivity = t;
  return dom;
}

double distance(int m, const OptDomain& dom) {
  const KeyRateLandscape land(m, dom);
  return max_distance(kTargetRate, land, at(0.0)).distance_km;
}

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

// 1. series path vs Fock oracle on the standard grid
Outcome oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int m : {0, 1, 2}) {
    for (double l : {0.3, 0.6}) {
      for (double d : {0.0, 1.0, 3.0}) {
        for (double t : {0.7, 0.9}) worst = std::max(worst, oracle_delta({l, d, t, m}, 60));
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream os;
  os << "max |delta| = " << worst << " over 36 points, " << secs << " s";
  return {worst <= 1e-7 && secs < 120.0, os.str()};
}

// 2. Gaussian 0-PC state
Outcome zero_pc_closed_form() {
  double formula_err = 0.0, cov_shift = 0.0;
  bool prob_ok = true;
  for (double l : {0.3, 0.6, 0.9}) {
    for (double t : {0.2, 0.64, 0.9}) {
      const CatalyzedState base = zero_pc_state({l, 0.0, t, 0});
      for (double d : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0}) {
        const CatalyzedState s = zero_pc_state({l, d, t, 0});
        // mean, covariance and probability by direct substitution
        const double lb = l * std::sqrt(t);
        const double den = 1 - l * l * t;
        const double v = (1 + lb * lb) / (1 - lb * lb);
        const double c = 2 * lb / (1 - lb * lb);
        const double q1 = d * std::sqrt(1 - l * l) * (1 + l * t) / den;
        const double q2 = d * std::sqrt(1 - l * l) * (1 + l) * std::sqrt(t) / den;
        const double p = (1 - l * l) / den * std::exp(-d * d * (1 + l) * (1 + l) * (1 - t) / (4 * den));
        formula_err = std::max({formula_err, std::abs(s.mean(0) - q1), std::abs(s.mean(2) - q2),
                                std::abs(s.mean(1)), std::abs(s.mean(3)), std::abs(s.cov(0, 0) - v),
                                std::abs(s.cov(3, 3) - v), std::abs(s.cov(0, 2) - c), std::abs(s.cov(1, 3) + c),
                                std::abs(s.success_prob - p)});
        cov_shift = std::max(cov_shift, max_abs(s.cov - base.cov));
        prob_ok = prob_ok && s.success_prob <= base.success_prob;
      }
    }
  }
  std::ostringstream os;
  os << "formula error " << formula_err << ", cov(d)-cov(0) " << cov_shift << ", P(d)<=P(0) "
     << (prob_ok ? "yes" : "no");
  return {formula_err < 1e-13 && cov_shift <= 1e-12 && prob_ok, os.str()};
}

// 3. limits
Outcome limit_suite() {
  double tmsc = 0.0, mean0 = 0.0, zero = 0.0;
  for (int m : {0, 1, 2}) {
    for (double l : {0.3, 0.6, 0.8}) {
      for (double d : {0.0, 1.0, 3.0}) {
        const CatalysisParams p{l, d, 1.0, m};
        const CatalyzedState s = moments(p);
        const GaussianState ref = tmsc_state(p);
        tmsc = std::max({tmsc, max_abs(s.mean - ref.mean), max_abs(s.cov - ref.cov), std::abs(s.success_prob - 1)});
      }
      for (double t : {0.3, 0.7, 0.9}) mean0 = std::max(mean0, max_abs(moments({l, 0.0, t, m}).mean));
    }
  }
  for (double l : {0.3, 0.6, 0.8}) {
    for (double d : {0.0, 1.0, 3.0}) {
      for (double t : {0.3, 0.7, 0.9}) {
        const CatalysisParams p{l, d, t, 0};
        const CatalyzedState a = moments(p), b = zero_pc_state(p);
        zero = std::max({zero, max_abs(a.mean - b.mean), max_abs(a.cov - b.cov),
                         std::abs(a.success_prob - b.success_prob)});
      }
    }
  }
  std::ostringstream os;
  os << "T_C=1 vs TMSC " << tmsc << ", d=0 mean " << mean0 << ", m=0 series vs closed form " << zero;
  return {tmsc <= 1e-10 && mean0 <= 1e-12 && zero <= 1e-10, os.str()};
}

// 4. fixed-variance optimisation
Outcome fixed_variance() {
  const auto t0 = std::chrono::steady_clock::now();
  auto family = [](double v, bool free_d) {
    OptDomain d;
    d.fixed_variance = v;
    if (!free_d) d.fixed_displacement = 0.0;
    return d;
  };
  const double t5 = distance(0, pinned(5.0, 0.0, 1.0));
  const double z5v = distance(0, family(5.0, false));
  const double z5c = distance(0, family(5.0, true));
  const double o5v = distance(1, family(5.0, false));
  const double o5c = distance(1, family(5.0, true));
  const double gap5 = std::max({z5v, z5c, o5v, o5c}) - t5;

  const double t15 = distance(0, pinned(15.0, 0.0, 1.0));
  const double z15 = distance(0, family(15.0, false));
  const double o15 = distance(1, family(15.0, false));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream os;
  os << "V=5: TMSV " << t5 << " km, 0-PC " << z5v << "/" << z5c << ", 1-PC " << o5v << "/" << o5c
     << " (d=0/free), max gain " << gap5 << " km; V=15: 0-PCTMSV " << z15 << " > 1-PCTMSV " << o15 << " > TMSV "
     << t15 << "; " << secs << " s";
  return {gap5 < 0.2 && z15 > o15 && o15 > t15 && secs < 1800.0, os.str()};
}

// 5. displacement scans at V = 15, m = 1
Outcome displacement_claims() {
  const double tmsv = distance(0, pinned(15.0, 0.0, 1.0));
  auto scan = [](double t, std::vector<double>& ds, std::vector<double>& ls) {
    for (int k = 0; k <= 50; ++k) {
      const double d = 0.1 * k;
      ds.push_back(d);
      ls.push_back(distance(1, pinned(15.0, d, t)));
    }
  };
  std::vector<double> d90, l90, d98, l98;
  scan(0.90, d90, l90);
  scan(0.98, d98, l98);
  const auto i90 = static_cast<std::size_t>(std::max_element(l90.begin(), l90.end()) - l90.begin());
  const auto i98 = static_cast<std::size_t>(std::max_element(l98.begin(), l98.end()) - l98.begin());
  const bool interior = l90[i90] > l90.front() && l90[i90] > l90.back();
  std::ostringstream os;
  os << "T_C=0.90: argmax d=" << d90[i90] << " (" << l90[i90] << " km, TMSV " << tmsv << " km, d=0 " << l90.front()
     << " km); T_C=0.98: argmax d=" << d98[i98] << " (" << l98[i98] << " km)";
  return {interior && d90[i90] > 3.0 && d90[i90] < 4.0 && l90[i90] > tmsv && i98 == 0, os.str()};
}

// 6. full optimisation
Outcome full_optimisation() {
  const auto t0 = std::chrono::steady_clock::now();
  auto solve = [](int m, const OptDomain& dom) {
    const KeyRateLandscape land(m, dom);
    return max_distance(kTargetRate, land, at(0.0));
  };
  const DistanceResult tmsv = solve(0, OptDomain::tmsv());
  const DistanceResult zero = solve(0, OptDomain{});
  const DistanceResult one = solve(1, OptDomain{});
  const DistanceResult zero_v = solve(0, OptDomain::squeezed_vacuum());
  const DistanceResult one_v = solve(1, OptDomain::squeezed_vacuum());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const double adv = std::max(zero.distance_km, one.distance_km) - tmsv.distance_km;
  const double v_star = tmsv.at_distance.best.variance;
  // d = 0 is optimal if pinning it loses no distance beyond the bisection tolerance.
  const double tol = DistanceSearch{}.tolerance_km;
  const bool d_zero = zero_v.distance_km >= zero.distance_km - tol && one_v.distance_km >= one.distance_km - tol;

  std::ostringstream os;
  os << "TMSV " << tmsv.distance_km << " km (V*=" << v_star << "), 0-PC " << zero.distance_km << " km, 1-PC "
     << one.distance_km << " km, advantage " << adv << " km; d pinned to 0: 0-PC " << zero_v.distance_km
     << " km, 1-PC " << one_v.distance_km << " km; " << secs << " s";
  return {adv < 1.0 && std::abs(v_star - 6.0) <= 1.5 && d_zero, os.str()};
}

// 7. physicality on random draws
Outcome physicality() {
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> uv(1.0, 15.0), ud(0.0, 5.0), ut(0.01, 1.0), ul(0.0, 100.0);
  std::uniform_int_distribution<int> um(0, 2);
  const double beta = ProtocolParams{}.beta;
  int bad = 0;
  double min_nu = 1e9, min_prob = 1.0, min_info = 1e9;
  std::string first;
  for (int k = 0; k < 1000; ++k) {
    const double v = uv(rng), d = ud(rng), t = ut(rng), length = ul(rng);
    const int m = um(rng);
    try {
      const CatalyzedState s = moments(CatalysisParams::from_variance(v, d, t, m));
      const CovMatrix joint = propagate(s.cov, equivalent_channel(at(length)));
      const KeyRateReport r = key_rate(s, at(length));
      for (double nu : symplectic_eigenvalues(s.cov)) min_nu = std::min(min_nu, nu);
      for (double nu : symplectic_eigenvalues(joint)) min_nu = std::min(min_nu, nu);
      min_prob = std::min(min_prob, s.success_prob);
      min_info = std::min(min_info, r.i_ab);
      const bool ok = min_nu >= 1 - 1e-9 && s.success_prob > 0 && s.success_prob <= 1 && r.i_ab >= 0 &&
                      r.key_rate <= beta * r.i_ab;
      if (!ok) ++bad;
    } catch (const std::exception& e) {
      ++bad;
      if (first.empty()) first = e.what();
    }
  }
  std::ostringstream os;
  os << bad << " of 1000 draws failed; min nu " << min_nu << ", min P " << min_prob << ", min I_AB " << min_info;
  if (!first.empty()) os << "; first error: " << first;
  return {bad == 0, os.str()};
}

// 8. channel identities
Outcome channel_identities() {
  const EquivalentChannel ch = equivalent_channel(at(50.0));
  const double a = attenuation(50.0, 0.2);
  std::ostringstream os;
  os.precision(17);
  os << "eps_th = " << ch.eps_th << ", attenuation(50 km, 0.2) = " << a;
  return {std::abs(ch.eps_th - 0.022) <= 1e-15 && a == 0.1, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"closed-form 0-PC state", zero_pc_closed_form},
      {"limit suite", limit_suite},
      {"fixed-variance optimisation", fixed_variance},
      {"displacement claims", displacement_claims},
      {"full optimisation", full_optimisation},
      {"physicality", physicality},
      {"channel identities", channel_identities},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu [%s]: %s - %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
