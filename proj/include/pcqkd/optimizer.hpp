#pragma once

// Key-rate maximisation over (variance, displacement, T_C) and maximum
// transmission distance searches in the extreme asymmetric configuration
// (relay co-located with Bob, L_BC = 0).
//
// Strategy: a deterministic coarse grid, then a box-clamped Nelder-Mead
// refinement started from the best grid cell. Grid states do not depend on
// the channel, so a KeyRateLandscape computes them once and re-scores them
// for every distance.

#include "pcqkd/channel_keyrate.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace pcqkd {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

struct OptDomain {
  Interval variance{1.0, 15.0};
  Interval displacement{0.0, 5.0};
  Interval transmissivity{0.01, 1.0};  // T_C = 0 is full reflection; clamped away

  std::optional<double> fixed_variance;
  std::optional<double> fixed_displacement;
  std::optional<double> fixed_transmissivity;

  int variance_points = 29;
  int displacement_points = 26;
  int transmissivity_points = 51;  // spaced quadratically toward T_C = 1

  /// Plain TMSV: d = 0, T_C = 1, only the variance is free.
  static OptDomain tmsv();
  /// Catalysed squeezed vacuum: d = 0.
  static OptDomain squeezed_vacuum();

  void validate() const;
};

struct OptSettings {
  double tolerance = 1e-8;  // on K
  int max_evaluations = 500;
  bool refine = true;
  int starts = 3;  // refinements launched from the best local grid maxima
};

/// (V, d, T_C)
struct OptPoint {
  double variance = 1.0;
  double displacement = 0.0;
  double transmissivity = 1.0;
};

struct OptResult {
  OptPoint best;
  double key_rate = 0.0;
  double best_grid_key_rate = 0.0;
  int evaluations = 0;
  bool positive = false;  // false flags an all-non-positive domain
  std::vector<std::pair<OptPoint, double>> trace;  // refinement path
};

/// Minimal box-clamped Nelder-Mead maximiser over [0,1]^n.
struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
};
SimplexResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> start, double step, double tolerance, int max_evaluations);

class KeyRateLandscape {
 public:
  KeyRateLandscape(int m, OptDomain domain);

  int order() const { return m_; }
  const OptDomain& domain() const { return domain_; }
  std::size_t grid_size() const { return grid_.size(); }

  /// Catalysed state at an arbitrary point (closed form for m = 0).
  CatalyzedState state_at(const OptPoint& x) const;

  /// K at x; non-physical corners score -infinity.
  double evaluate(const OptPoint& x, const ProtocolParams& proto) const;

  /// Best grid sample only.
  std::pair<OptPoint, double> grid_max(const ProtocolParams& proto) const;

  /// Grid points in visiting order (V outermost, T_C innermost).
  std::vector<OptPoint> grid_points() const;

  OptResult maximize(const ProtocolParams& proto, const OptSettings& settings = {}) const;

 private:
  struct Cell {
    OptPoint point;
    std::optional<CatalyzedState> state;  // empty if the point is unphysical
  };

  std::vector<int> free_axes() const;
  OptPoint from_unit(const std::vector<double>& u) const;
  std::vector<double> to_unit(const OptPoint& x) const;

  int m_;
  OptDomain domain_;
  std::array<int, 3> shape_{};  // grid extents along (V, d, T_C)
  std::vector<Cell> grid_;
};

OptResult optimize_fixed_variance(double variance, int m, const ProtocolParams& proto, OptDomain domain = {},
                                  const OptSettings& settings = {});

OptResult optimize_all(int m, const ProtocolParams& proto, OptDomain domain = {}, const OptSettings& settings = {});

struct DistanceSearch {
  double upper_km = 120.0;
  double step_km = 1.0;
  double tolerance_km = 0.01;
};

struct DistanceResult {
  double distance_km = 0.0;
  OptResult at_distance;  // optimum at the returned distance
};

/// Largest L_AB = L_AC (L_BC = 0) whose optimised K reaches `target`.
/// Throws NoDistanceError if K(0) < target.
DistanceResult max_distance(double target, const KeyRateLandscape& landscape, const ProtocolParams& proto,
                            const OptSettings& settings = {}, const DistanceSearch& search = {});

}  // namespace pcqkd
