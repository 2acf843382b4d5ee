#include "pcqkd/config.hpp"

#include "pcqkd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pcqkd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (!v.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
    throw ValidationError(field, "expected a finite number, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& field, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ValidationError(field, "expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& field, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ValidationError(field, "expected true or false, got '" + v + "'");
}

std::string one_of(const std::string& field, const std::string& v, std::initializer_list<const char*> allowed) {
  std::string list;
  for (const char* a : allowed) {
    if (v == a) return v;
    list += list.empty() ? a : std::string(", ") + a;
  }
  throw ValidationError(field, "expected one of {" + list + "}, got '" + v + "'");
}

Family to_family(const std::string& field, const std::string& v) {
  if (v == "tmsv") return Family::Tmsv;
  if (v == "0-pc") return Family::ZeroPc;
  if (v == "1-pc") return Family::OnePc;
  throw ValidationError(field, "unknown family '" + v + "' (tmsv, 0-pc, 1-pc)");
}

using Setter = std::function<void(RunConfig&, const std::string& field, const std::string& value)>;

struct KeyDef {
  ConfigKey key;
  Setter set;
};

#define PCQKD_DOUBLE(member) [](RunConfig& c, const std::string& f, const std::string& v) { c.member = to_double(f, v); }
#define PCQKD_INT(member) [](RunConfig& c, const std::string& f, const std::string& v) { c.member = to_int(f, v); }

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = {
      {{"state.m", "ancilla photon number"}, PCQKD_INT(m)},
      {{"state.m_max", "largest accepted photon number"}, PCQKD_INT(m_max)},
      {{"state.lambda", "squeezing tanh r; overrides state.variance"},
       [](RunConfig& c, const std::string& f, const std::string& v) { c.lambda = to_double(f, v); }},
      {{"state.variance", "TMSV variance V = cosh 2r"}, PCQKD_DOUBLE(variance)},
      {{"state.displacement", "coherent displacement d"}, PCQKD_DOUBLE(displacement)},
      {{"state.tc", "catalysis beam-splitter transmissivity T_C"}, PCQKD_DOUBLE(tc)},

      {{"protocol.l_ac", "Alice-relay length, km"}, PCQKD_DOUBLE(protocol.l_ac)},
      {{"protocol.l_bc", "Bob-relay length, km"}, PCQKD_DOUBLE(protocol.l_bc)},
      {{"protocol.gamma", "fibre loss, dB/km"}, PCQKD_DOUBLE(protocol.gamma)},
      {{"protocol.eps_a", "Alice excess noise, SNU"}, PCQKD_DOUBLE(protocol.eps_a)},
      {{"protocol.eps_b", "Bob excess noise, SNU"}, PCQKD_DOUBLE(protocol.eps_b)},
      {{"protocol.beta", "reconciliation efficiency"}, PCQKD_DOUBLE(protocol.beta)},
      {{"protocol.gain", "relay gain g, or 'optimal' for g^2 = 2/T_B"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         if (v == "optimal") {
           c.protocol.gain.reset();
         } else {
           c.protocol.gain = to_double(f, v);
         }
       }},

      {{"sweep.variable", "swept quantity: L, d, tc or variance"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.sweep.variable = one_of(f, v, {"L", "d", "tc", "variance"});
       }},
      {{"sweep.start", "first value"}, PCQKD_DOUBLE(sweep.start)},
      {{"sweep.stop", "last value (inclusive)"}, PCQKD_DOUBLE(sweep.stop)},
      {{"sweep.step", "increment"}, PCQKD_DOUBLE(sweep.step)},

      {{"optimize.mode", "full or fixed-variance (uses state.variance)"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.opt_mode = one_of(f, v, {"full", "fixed-variance"});
       }},
      {{"optimize.families", "comma list of tmsv, 0-pc, 1-pc"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.families.clear();
         std::stringstream ss(v);
         std::string item;
         while (std::getline(ss, item, ',')) c.families.push_back(to_family(f, trim(item)));
         if (c.families.empty()) throw ValidationError(f, "at least one family is required");
       }},
      {{"optimize.free_displacement", "optimise d for the PC families (false pins d = 0)"},
       [](RunConfig& c, const std::string& f, const std::string& v) { c.free_displacement = to_bool(f, v); }},
      {{"optimize.v_min", "variance lower bound"}, PCQKD_DOUBLE(domain.variance.lo)},
      {{"optimize.v_max", "variance upper bound"}, PCQKD_DOUBLE(domain.variance.hi)},
      {{"optimize.d_min", "displacement lower bound"}, PCQKD_DOUBLE(domain.displacement.lo)},
      {{"optimize.d_max", "displacement upper bound"}, PCQKD_DOUBLE(domain.displacement.hi)},
      {{"optimize.tc_min", "T_C lower bound"}, PCQKD_DOUBLE(domain.transmissivity.lo)},
      {{"optimize.tc_max", "T_C upper bound"}, PCQKD_DOUBLE(domain.transmissivity.hi)},
      {{"optimize.v_points", "variance grid points"}, PCQKD_INT(domain.variance_points)},
      {{"optimize.d_points", "displacement grid points"}, PCQKD_INT(domain.displacement_points)},
      {{"optimize.tc_points", "T_C grid points"}, PCQKD_INT(domain.transmissivity_points)},
      {{"optimize.tolerance", "relative simplex tolerance on K"}, PCQKD_DOUBLE(settings.tolerance)},
      {{"optimize.max_evaluations", "simplex evaluations per start"}, PCQKD_INT(settings.max_evaluations)},
      {{"optimize.starts", "simplex starts from the best local grid maxima"}, PCQKD_INT(settings.starts)},
      {{"optimize.refine", "run the simplex after the grid"},
       [](RunConfig& c, const std::string& f, const std::string& v) { c.settings.refine = to_bool(f, v); }},

      {{"maxdist.mode", "state, fixed-variance or full"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         c.dist_mode = one_of(f, v, {"state", "fixed-variance", "full"});
       }},
      {{"maxdist.target", "key rate to reach"}, PCQKD_DOUBLE(target)},
      {{"maxdist.upper_km", "scan limit, km"}, PCQKD_DOUBLE(search.upper_km)},
      {{"maxdist.step_km", "scan step, km"}, PCQKD_DOUBLE(search.step_km)},
      {{"maxdist.tolerance_km", "bisection tolerance, km"}, PCQKD_DOUBLE(search.tolerance_km)},

      {{"output.path", "output file, '-' for stdout"},
       [](RunConfig& c, const std::string& f, const std::string& v) {
         if (v.empty()) throw ValidationError(f, "path must not be empty");
         c.output = v;
       }},

      {{"oracle.cutoff", "Fock cutoff per mode"}, PCQKD_INT(cutoff)},
      {{"oracle.tolerance", "allowed oracle mismatch"}, PCQKD_DOUBLE(oracle_tolerance)},
      {{"oracle.exponent_points", "random points for the quadrature check"}, PCQKD_INT(exponent_points)},
  };
  return defs;
}

#undef PCQKD_DOUBLE
#undef PCQKD_INT

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

void validate(const RunConfig& c) {
  // the series path is sized for at most kDefaultMaxCatalysisOrder photons
  require(c.m_max >= 0 && c.m_max <= kDefaultMaxCatalysisOrder, "state.m_max", "must lie in [0, 3]");
  require(c.m >= 0 && c.m <= c.m_max, "state.m", "must lie in [0, state.m_max]");
  if (c.lambda) require(*c.lambda >= 0.0 && *c.lambda < 1.0, "state.lambda", "must lie in [0, 1)");
  require(c.variance >= 1.0, "state.variance", "must be >= 1");
  require(c.displacement >= 0.0, "state.displacement", "must be >= 0");
  require(c.tc > 0.0 && c.tc <= 1.0, "state.tc", "must lie in (0, 1]");

  const ProtocolParams& p = c.protocol;
  require(p.l_ac >= 0.0, "protocol.l_ac", "must be >= 0");
  require(p.l_bc >= 0.0, "protocol.l_bc", "must be >= 0");
  require(p.gamma > 0.0, "protocol.gamma", "must be > 0");
  require(p.eps_a >= 0.0, "protocol.eps_a", "must be >= 0");
  require(p.eps_b >= 0.0, "protocol.eps_b", "must be >= 0");
  require(p.beta > 0.0 && p.beta <= 1.0, "protocol.beta", "must lie in (0, 1]");
  if (p.gain) require(*p.gain > 0.0, "protocol.gain", "must be > 0");

  const SweepSpec& s = c.sweep;
  require(s.step > 0.0, "sweep.step", "must be > 0");
  require(s.stop >= s.start, "sweep.stop", "must be >= sweep.start");
  require((s.stop - s.start) / s.step <= 1e6, "sweep.step", "too many sweep points");
  if (s.variable == "L" || s.variable == "d") require(s.start >= 0.0, "sweep.start", "must be >= 0");
  if (s.variable == "variance") require(s.start >= 1.0, "sweep.start", "variance must be >= 1");
  if (s.variable == "tc") {
    require(s.start > 0.0, "sweep.start", "T_C must be > 0");
    require(s.stop <= 1.0, "sweep.stop", "T_C must be <= 1");
  }

  const OptDomain& d = c.domain;
  require(d.variance.lo >= 1.0, "optimize.v_min", "must be >= 1");
  require(d.variance.hi >= d.variance.lo, "optimize.v_max", "must be >= optimize.v_min");
  require(d.displacement.lo >= 0.0, "optimize.d_min", "must be >= 0");
  require(d.displacement.hi >= d.displacement.lo, "optimize.d_max", "must be >= optimize.d_min");
  require(d.transmissivity.lo > 0.0, "optimize.tc_min", "must be > 0");
  require(d.transmissivity.hi <= 1.0, "optimize.tc_max", "must be <= 1");
  require(d.transmissivity.hi >= d.transmissivity.lo, "optimize.tc_max", "must be >= optimize.tc_min");
  require(d.variance_points >= 1 && d.variance_points <= 10000, "optimize.v_points", "must lie in [1, 10000]");
  require(d.displacement_points >= 1 && d.displacement_points <= 10000, "optimize.d_points",
          "must lie in [1, 10000]");
  require(d.transmissivity_points >= 1 && d.transmissivity_points <= 10000, "optimize.tc_points",
          "must lie in [1, 10000]");
  require(c.settings.tolerance > 0.0, "optimize.tolerance", "must be > 0");
  require(c.settings.max_evaluations >= 1, "optimize.max_evaluations", "must be >= 1");
  require(c.settings.starts >= 1, "optimize.starts", "must be >= 1");
  if (c.opt_mode == "fixed-variance" || c.dist_mode == "fixed-variance") {
    require(c.variance >= d.variance.lo && c.variance <= d.variance.hi, "state.variance",
            "must lie inside [optimize.v_min, optimize.v_max] for fixed-variance runs");
  }

  require(c.target > 0.0, "maxdist.target", "must be > 0");
  require(c.search.upper_km > 0.0, "maxdist.upper_km", "must be > 0");
  require(c.search.step_km > 0.0, "maxdist.step_km", "must be > 0");
  require(c.search.tolerance_km > 0.0, "maxdist.tolerance_km", "must be > 0");

  require(c.cutoff >= 8 && c.cutoff <= 400, "oracle.cutoff", "must lie in [8, 400]");
  require(c.oracle_tolerance > 0.0, "oracle.tolerance", "must be > 0");
  require(c.exponent_points >= 1 && c.exponent_points <= 1000, "oracle.exponent_points", "must lie in [1, 1000]");
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& d : key_defs()) out.push_back(d.key);
    return out;
  }();
  return keys;
}

ConfigEntries parse_config_text(const std::string& text) {
  ConfigEntries out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(where, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ValidationError(where, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(where, "missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full) != 0) throw ValidationError(full, "given twice");
    out[full] = value;
  }
  return out;
}

ConfigEntries load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Tmsv:
      return "tmsv";
    case Family::ZeroPc:
      return "0-pc";
    case Family::OnePc:
      return "1-pc";
  }
  return "?";
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
  return out;
}

CatalysisParams RunConfig::catalysis() const {
  if (lambda) return {*lambda, displacement, tc, m};
  return CatalysisParams::from_variance(variance, displacement, tc, m);
}

OptDomain RunConfig::family_domain(Family f, bool fixed_variance) const {
  OptDomain d = domain;
  if (f == Family::Tmsv) {
    d.fixed_displacement = 0.0;
    d.fixed_transmissivity = 1.0;
  } else if (!free_displacement) {
    d.fixed_displacement = 0.0;
  }
  if (fixed_variance) d.fixed_variance = lambda ? catalysis().variance() : variance;
  return d;
}

RunConfig build_config(const ConfigEntries& entries) {
  RunConfig c;
  const auto& defs = key_defs();
  for (const auto& [key, value] : entries) {
    auto it = std::find_if(defs.begin(), defs.end(), [&](const KeyDef& d) { return d.key.name == key; });
    if (it == defs.end()) throw ValidationError(key, "unknown key");
    it->set(c, key, value);
  }
  validate(c);
  return c;
}

}  // namespace pcqkd
