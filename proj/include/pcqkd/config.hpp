#pragma once

// Run configuration: flat key=value text grouped under [section] headers.
// Keys are addressed as section.key both in files and as --section.key flags.
//
//   [state]
//   m = 1
//   variance = 15      # or lambda = 0.935
//   # comment

#include "pcqkd/optimizer.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcqkd {

struct ConfigKey {
  std::string name;  // section.key
  std::string help;
};

/// Every key the configuration understands, in documentation order.
const std::vector<ConfigKey>& config_keys();

using ConfigEntries = std::map<std::string, std::string>;

/// Parses the text of a config file. Unknown keys, malformed lines and
/// duplicate keys raise ValidationError naming the key (or "line N").
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries load_config_file(const std::string& path);

enum class Family { Tmsv, ZeroPc, OnePc };
std::string family_name(Family f);

struct SweepSpec {
  std::string variable = "L";  // L | d | tc | variance
  double start = 0.0;
  double stop = 100.0;
  double step = 5.0;

  /// start, start + step, ... up to stop (inclusive within 1e-9 of a step).
  std::vector<double> values() const;
};

struct RunConfig {
  // [state]
  int m = 0;
  int m_max = kDefaultMaxCatalysisOrder;
  std::optional<double> lambda;  // takes precedence over variance
  double variance = 5.0;
  double displacement = 0.0;
  double tc = 1.0;

  // [protocol]
  ProtocolParams protocol;

  // [sweep]
  SweepSpec sweep;

  // [optimize]
  std::string opt_mode = "full";  // full | fixed-variance
  std::vector<Family> families{Family::Tmsv, Family::ZeroPc, Family::OnePc};
  bool free_displacement = true;
  OptDomain domain;
  OptSettings settings;

  // [maxdist]
  std::string dist_mode = "state";  // state | fixed-variance | full
  double target = 1e-5;
  DistanceSearch search;

  // [output]
  std::string output = "-";

  // [oracle]
  int cutoff = 60;
  double oracle_tolerance = 1e-7;
  int exponent_points = 20;

  CatalysisParams catalysis() const;

  /// Landscape domain for one family under the [optimize] settings.
  OptDomain family_domain(Family f, bool fixed_variance) const;
};

/// Typed, range-checked configuration. Every field is validated here, before
/// any computation; failures raise ValidationError with the key name.
RunConfig build_config(const ConfigEntries& entries);

}  // namespace pcqkd
