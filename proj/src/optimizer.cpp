#include "pcqkd/optimizer.hpp"

#include "pcqkd/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace pcqkd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> linspace(Interval iv, int n) {
  if (n <= 1) return {iv.hi};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = iv.lo + (iv.hi - iv.lo) * k / (n - 1);
  return out;
}

// Runs f(i) for i in [0, n) on all hardware threads; each index is written by
// exactly one call so the result does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  }
  for (auto& t : pool) t.join();
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// The optimal T_C sits on a ridge that narrows as it approaches 1.
std::vector<double> clustered_toward_upper(Interval iv, int n) {
  if (n <= 1) return {iv.hi};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double s = 1.0 - static_cast<double>(k) / (n - 1);
    out[static_cast<std::size_t>(k)] = iv.hi - (iv.hi - iv.lo) * s * s;
  }
  return out;
}

// Unit-box coordinate of T_C matching the clustered grid: u = 1 - sqrt((hi - t) / (hi - lo)).
double transmissivity_to_unit(Interval iv, double t) {
  return 1.0 - std::sqrt(std::max(0.0, (iv.hi - t) / (iv.hi - iv.lo)));
}
double transmissivity_from_unit(Interval iv, double u) {
  const double s = 1.0 - clamp01(u);
  return iv.hi - (iv.hi - iv.lo) * s * s;
}

}  // namespace

OptDomain OptDomain::tmsv() {
  OptDomain d;
  d.fixed_displacement = 0.0;
  d.fixed_transmissivity = 1.0;
  return d;
}

OptDomain OptDomain::squeezed_vacuum() {
  OptDomain d;
  d.fixed_displacement = 0.0;
  return d;
}

void OptDomain::validate() const {
  auto check = [](const char* name, Interval iv, double lo, double hi, int points) {
    if (!(iv.lo >= lo && iv.hi <= hi && iv.lo <= iv.hi)) {
      std::ostringstream os;
      os << name << " interval [" << iv.lo << ", " << iv.hi << "] outside [" << lo << ", " << hi << "]";
      throw DomainError(os.str());
    }
    if (points < 1) throw DomainError(std::string(name) + " grid needs at least one point");
  };
  check("variance", variance, 1.0, std::numeric_limits<double>::infinity(), variance_points);
  check("displacement", displacement, 0.0, std::numeric_limits<double>::infinity(), displacement_points);
  check("transmissivity", transmissivity, 0.0, 1.0, transmissivity_points);
  if (transmissivity.lo <= 0.0 && !fixed_transmissivity) throw DomainError("transmissivity lower bound must be > 0");
  if (fixed_variance && !(*fixed_variance >= 1.0)) throw DomainError("fixed variance must be >= 1");
  if (fixed_displacement && !(*fixed_displacement >= 0.0)) throw DomainError("fixed displacement must be >= 0");
  if (fixed_transmissivity && !(*fixed_transmissivity > 0.0 && *fixed_transmissivity <= 1.0)) {
    throw DomainError("fixed transmissivity must lie in (0, 1]");
  }
}

SimplexResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, double step, double tolerance, int max_evaluations) {
  const std::size_t n = start.size();
  SimplexResult res;
  auto eval = [&](std::vector<double>& x) {
    for (auto& c : x) c = clamp01(c);
    ++res.evaluations;
    return f(x);
  };
  if (n == 0) {
    res.x = start;
    res.value = eval(res.x);
    return res;
  }

  std::vector<std::vector<double>> pts(n + 1, start);
  std::vector<double> vals(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    // Step inward when the start sits on the upper face of the box.
    pts[k + 1][k] += (start[k] + step <= 1.0) ? step : -step;
  }
  for (std::size_t k = 0; k <= n; ++k) vals[k] = eval(pts[k]);

  std::vector<std::size_t> order(n + 1);
  while (res.evaluations < max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t j = 0; j < n; ++j) diameter = std::max(diameter, std::abs(pts[k][j] - pts[best][j]));
    }
    const double spread = vals[best] - vals[worst];
    if (diameter < 1e-9 || (std::isfinite(spread) && spread <= tolerance * std::abs(vals[best]))) break;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += pts[k][j] / static_cast<double>(n);
    }
    auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + t * (pts[worst][j] - centroid[j]);
      return x;
    };

    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr > vals[best]) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe > fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr > vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    auto xc = (fr > vals[worst]) ? along(-0.5) : along(0.5);
    const double fc = eval(xc);
    if (fc > std::max(fr, vals[worst])) {
      pts[worst] = xc;
      vals[worst] = fc;
      continue;
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (k == best) continue;
      for (std::size_t j = 0; j < n; ++j) pts[k][j] = pts[best][j] + 0.5 * (pts[k][j] - pts[best][j]);
      vals[k] = eval(pts[k]);
    }
  }
  const auto it = std::max_element(vals.begin(), vals.end());
  res.value = *it;
  res.x = pts[static_cast<std::size_t>(it - vals.begin())];
  return res;
}

KeyRateLandscape::KeyRateLandscape(int m, OptDomain domain) : m_(m), domain_(std::move(domain)) {
  domain_.validate();
  if (m < 0 || m > kDefaultMaxCatalysisOrder) throw DomainError("catalysis order out of range");
  const auto vs = domain_.fixed_variance ? std::vector<double>{*domain_.fixed_variance}
                                         : linspace(domain_.variance, domain_.variance_points);
  const auto ds = domain_.fixed_displacement ? std::vector<double>{*domain_.fixed_displacement}
                                             : linspace(domain_.displacement, domain_.displacement_points);
  const auto ts = domain_.fixed_transmissivity ? std::vector<double>{*domain_.fixed_transmissivity}
                                               : clustered_toward_upper(domain_.transmissivity,
                                                                        domain_.transmissivity_points);
  shape_ = {static_cast<int>(vs.size()), static_cast<int>(ds.size()), static_cast<int>(ts.size())};
  for (double v : vs) {
    for (double d : ds) {
      for (double t : ts) grid_.push_back({{v, d, t}, std::nullopt});
    }
  }
  parallel_for(grid_.size(), [&](std::size_t i) {
    try {
      grid_[i].state = state_at(grid_[i].point);
    } catch (const IntegrityError&) {
    } catch (const DomainError&) {
    }
  });
}

CatalyzedState KeyRateLandscape::state_at(const OptPoint& x) const {
  const auto p = CatalysisParams::from_variance(x.variance, x.displacement, x.transmissivity, m_);
  return m_ == 0 ? zero_pc_state(p) : moments(p);
}

double KeyRateLandscape::evaluate(const OptPoint& x, const ProtocolParams& proto) const {
  try {
    return key_rate(state_at(x), proto).key_rate;
  } catch (const IntegrityError&) {
    return kNegInf;
  } catch (const DomainError&) {
    return kNegInf;
  }
}

std::pair<OptPoint, double> KeyRateLandscape::grid_max(const ProtocolParams& proto) const {
  OptPoint best = grid_.front().point;
  double best_k = kNegInf;
  for (const auto& cell : grid_) {
    if (!cell.state) continue;
    double k = kNegInf;
    try {
      k = key_rate(*cell.state, proto).key_rate;
    } catch (const IntegrityError&) {
    }
    if (k > best_k) {
      best_k = k;
      best = cell.point;
    }
  }
  return {best, best_k};
}

std::vector<int> KeyRateLandscape::free_axes() const {
  std::vector<int> axes;
  if (!domain_.fixed_variance && domain_.variance.hi > domain_.variance.lo) axes.push_back(0);
  if (!domain_.fixed_displacement && domain_.displacement.hi > domain_.displacement.lo) axes.push_back(1);
  if (!domain_.fixed_transmissivity && domain_.transmissivity.hi > domain_.transmissivity.lo) axes.push_back(2);
  return axes;
}

OptPoint KeyRateLandscape::from_unit(const std::vector<double>& u) const {
  OptPoint x{domain_.fixed_variance.value_or(domain_.variance.hi),
             domain_.fixed_displacement.value_or(domain_.displacement.hi),
             domain_.fixed_transmissivity.value_or(domain_.transmissivity.hi)};
  const std::array<Interval, 3> ivs{domain_.variance, domain_.displacement, domain_.transmissivity};
  const auto axes = free_axes();
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const Interval iv = ivs[static_cast<std::size_t>(axes[k])];
    const double value =
        axes[k] == 2 ? transmissivity_from_unit(iv, u[k]) : iv.lo + clamp01(u[k]) * (iv.hi - iv.lo);
    if (axes[k] == 0) x.variance = value;
    if (axes[k] == 1) x.displacement = value;
    if (axes[k] == 2) x.transmissivity = value;
  }
  return x;
}

std::vector<double> KeyRateLandscape::to_unit(const OptPoint& x) const {
  const std::array<Interval, 3> ivs{domain_.variance, domain_.displacement, domain_.transmissivity};
  const std::array<double, 3> vals{x.variance, x.displacement, x.transmissivity};
  std::vector<double> u;
  for (int axis : free_axes()) {
    const Interval iv = ivs[static_cast<std::size_t>(axis)];
    const double v = vals[static_cast<std::size_t>(axis)];
    u.push_back(axis == 2 ? transmissivity_to_unit(iv, v) : (v - iv.lo) / (iv.hi - iv.lo));
  }
  return u;
}

std::vector<OptPoint> KeyRateLandscape::grid_points() const {
  std::vector<OptPoint> out;
  out.reserve(grid_.size());
  for (const auto& cell : grid_) out.push_back(cell.point);
  return out;
}

OptResult KeyRateLandscape::maximize(const ProtocolParams& proto, const OptSettings& settings) const {
  std::vector<double> scores(grid_.size(), kNegInf);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!grid_[i].state) continue;
    try {
      scores[i] = key_rate(*grid_[i].state, proto).key_rate;
    } catch (const IntegrityError&) {
    }
  }
  const std::size_t best_cell =
      static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());

  OptResult res;
  res.best = grid_[best_cell].point;
  res.key_rate = scores[best_cell];
  res.best_grid_key_rate = scores[best_cell];
  res.evaluations = static_cast<int>(grid_.size());

  const auto axes = free_axes();
  if (settings.refine && !axes.empty() && std::isfinite(res.key_rate)) {
    // Local maxima of the grid (axis neighbours), best first.
    const std::array<std::size_t, 3> stride{static_cast<std::size_t>(shape_[1] * shape_[2]),
                                            static_cast<std::size_t>(shape_[2]), 1};
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!std::isfinite(scores[i])) continue;
      bool peak = true;
      for (int axis = 0; axis < 3 && peak; ++axis) {
        const int coord = static_cast<int>(i / stride[axis]) % shape_[axis];
        if (coord > 0 && scores[i - stride[axis]] > scores[i]) peak = false;
        if (coord + 1 < shape_[axis] && scores[i + stride[axis]] > scores[i]) peak = false;
      }
      if (peak) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (peaks.size() > static_cast<std::size_t>(std::max(1, settings.starts))) {
      peaks.resize(static_cast<std::size_t>(std::max(1, settings.starts)));
    }

    const std::array<int, 3> points{domain_.variance_points, domain_.displacement_points,
                                    domain_.transmissivity_points};
    double step = 0.0;
    for (int axis : axes) step = std::max(step, 1.0 / std::max(1, points[static_cast<std::size_t>(axis)] - 1));
    double best_seen = res.key_rate;
    auto objective = [&](const std::vector<double>& u) {
      const OptPoint x = from_unit(u);
      const double k = evaluate(x, proto);
      if (k > best_seen) {
        best_seen = k;
        res.trace.emplace_back(x, k);
      }
      return k;
    };
    for (std::size_t start : peaks) {
      const SimplexResult sr = nelder_mead_maximize(objective, to_unit(grid_[start].point), step,
                                                    settings.tolerance, settings.max_evaluations);
      res.evaluations += sr.evaluations;
      if (sr.value > res.key_rate) {
        res.key_rate = sr.value;
        res.best = from_unit(sr.x);
      }
    }
  }
  res.positive = res.key_rate > 0.0;
  return res;
}

OptResult optimize_fixed_variance(double variance, int m, const ProtocolParams& proto, OptDomain domain,
                                  const OptSettings& settings) {
  domain.fixed_variance = variance;
  return KeyRateLandscape(m, std::move(domain)).maximize(proto, settings);
}

OptResult optimize_all(int m, const ProtocolParams& proto, OptDomain domain, const OptSettings& settings) {
  return KeyRateLandscape(m, std::move(domain)).maximize(proto, settings);
}

DistanceResult max_distance(double target, const KeyRateLandscape& landscape, const ProtocolParams& proto,
                            const OptSettings& settings, const DistanceSearch& search) {
  if (!(target > 0.0)) throw DomainError("max_distance: target key rate must be > 0");
  if (!(search.step_km > 0.0) || !(search.tolerance_km > 0.0) || !(search.upper_km > 0.0)) {
    throw DomainError("max_distance: search steps must be > 0");
  }
  auto at = [&](double length) {
    ProtocolParams p = proto;
    p.l_ac = length;
    p.l_bc = 0.0;
    return p;
  };
  // The grid maximum is a lower bound on the optimum, so refinement is only
  // needed when the grid alone misses the target.
  auto reaches = [&](double length, OptResult* out) {
    const ProtocolParams p = at(length);
    OptResult r;
    const auto [pt, k] = landscape.grid_max(p);
    if (k >= target && out == nullptr) return true;
    r = landscape.maximize(p, settings);
    if (out != nullptr) *out = r;
    return r.key_rate >= target;
  };

  if (!reaches(0.0, nullptr)) {
    std::ostringstream os;
    os << "key rate " << target << " is not reached even at zero distance";
    throw NoDistanceError(os.str());
  }
  double good = 0.0;
  double bad = -1.0;
  for (double length = search.step_km; length <= search.upper_km + 1e-12; length += search.step_km) {
    if (reaches(length, nullptr)) {
      good = length;
    } else {
      bad = length;
      break;
    }
  }
  DistanceResult res;
  if (bad < 0.0) {
    res.distance_km = good;
  } else {
    while (bad - good > search.tolerance_km) {
      const double mid = 0.5 * (good + bad);
      (reaches(mid, nullptr) ? good : bad) = mid;
    }
    res.distance_km = good;
  }
  reaches(res.distance_km, &res.at_distance);
  return res;
}

}  // namespace pcqkd
