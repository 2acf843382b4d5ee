#include "pcqkd/commands.hpp"

#include "pcqkd/errors.hpp"
#include "pcqkd/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pcqkd {

namespace {

class CsvRow {
 public:
  CsvRow& operator<<(double v) { return add(format_number(v)); }
  CsvRow& operator<<(const std::string& s) { return add(s); }
  CsvRow& operator<<(const char* s) { return add(s); }
  void write(std::ostream& out) const { out << line_ << '\n'; }

 private:
  CsvRow& add(const std::string& cell) {
    if (!first_) line_ += ',';
    line_ += cell;
    first_ = false;
    return *this;
  }
  std::string line_;
  bool first_ = true;
};

CatalysisParams checked_state(const RunConfig& cfg) {
  const CatalysisParams p = cfg.catalysis();
  try {
    p.validate(cfg.m_max);
  } catch (const DomainError& e) {
    throw ValidationError("state", e.what());
  }
  return p;
}

// L sweeps run over the total length L_AB with L_BC held fixed.
std::vector<double> length_sweep(const RunConfig& cfg, const char* command) {
  if (cfg.sweep.variable != "L") {
    throw ValidationError("sweep.variable", std::string(command) + " sweeps L only");
  }
  if (cfg.sweep.start < cfg.protocol.l_bc) {
    throw ValidationError("sweep.start", "must be >= protocol.l_bc");
  }
  return cfg.sweep.values();
}

ProtocolParams at_length(const RunConfig& cfg, double total) {
  ProtocolParams p = cfg.protocol;
  p.l_ac = total - p.l_bc;
  return p;
}

int family_order(Family f) { return f == Family::OnePc ? 1 : 0; }

std::ostream& open_output(const RunConfig& cfg, std::ostream& fallback, std::ofstream& file) {
  if (cfg.output == "-") return fallback;
  file.open(cfg.output, std::ios::binary);
  if (!file) throw ValidationError("output.path", "cannot write '" + cfg.output + "'");
  return file;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void cmd_state(const RunConfig& cfg, std::ostream& out) {
  const CatalysisParams p = checked_state(cfg);
  const CatalyzedState s = moments(p);
  CsvRow head;
  head << "m" << "lambda" << "V" << "d" << "T_C" << "mean_q1" << "mean_p1" << "mean_q2" << "mean_p2" << "VA_q"
       << "VA_p" << "VB_q" << "VB_p" << "VC_q" << "VC_p" << "P";
  head.write(out);
  CsvRow row;
  row << std::to_string(p.m) << p.lambda << p.variance() << p.d << p.tc;
  for (int i = 0; i < 4; ++i) row << s.mean(i);
  row << s.va_q() << s.va_p() << s.vb_q() << s.vb_p() << s.vc_q() << s.vc_p() << s.success_prob;
  row.write(out);
}

void cmd_keyrate(const RunConfig& cfg, std::ostream& out) {
  const CatalysisParams p = checked_state(cfg);
  const auto lengths = length_sweep(cfg, "keyrate");
  const CatalyzedState s = moments(p);
  CsvRow head;
  head << "L_km" << "I_AB" << "chi_BE" << "P" << "K";
  head.write(out);
  for (double length : lengths) {
    const KeyRateReport r = key_rate(s, at_length(cfg, length));
    CsvRow row;
    row << length << r.i_ab << r.chi_be << r.success_prob << r.key_rate;
    row.write(out);
  }
}

void cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  const auto lengths = length_sweep(cfg, "optimize");
  const bool fixed = cfg.opt_mode == "fixed-variance";

  // results[f][i]: family f at lengths[i]
  std::vector<std::vector<std::pair<OptResult, double>>> results;
  for (Family f : cfg.families) {
    const KeyRateLandscape land(family_order(f), cfg.family_domain(f, fixed));
    auto& col = results.emplace_back();
    for (double length : lengths) {
      OptResult r = land.maximize(at_length(cfg, length), cfg.settings);
      double prob = 0.0;
      if (std::isfinite(r.key_rate)) prob = land.state_at(r.best).success_prob;
      col.emplace_back(std::move(r), prob);
    }
  }

  CsvRow head;
  head << "L_km" << "family" << "V" << "d" << "T_C" << "P" << "K";
  head.write(out);
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    for (std::size_t f = 0; f < cfg.families.size(); ++f) {
      const auto& [r, prob] = results[f][i];
      CsvRow row;
      row << lengths[i] << family_name(cfg.families[f]) << r.best.variance << r.best.displacement
          << r.best.transmissivity << prob << r.key_rate;
      row.write(out);
    }
  }
}

void cmd_maxdist(const RunConfig& cfg, std::ostream& out) {
  if (cfg.protocol.l_bc != 0.0) {
    throw ValidationError("protocol.l_bc", "maxdist places the relay at Bob; must be 0");
  }
  const bool swept = cfg.sweep.variable != "L";
  const std::vector<double> values = swept ? cfg.sweep.values() : std::vector<double>{0.0};

  struct Job {
    std::string label;
    int m;
    OptDomain domain;
  };
  std::vector<Job> jobs;
  if (cfg.dist_mode == "state") {
    const CatalysisParams p = checked_state(cfg);
    OptDomain d;
    d.fixed_variance = p.variance();
    d.fixed_displacement = p.d;
    d.fixed_transmissivity = p.tc;
    jobs.push_back({"state", p.m, d});
  } else {
    for (Family f : cfg.families) {
      jobs.push_back({family_name(f), family_order(f), cfg.family_domain(f, cfg.dist_mode == "fixed-variance")});
    }
  }

  CsvRow head;
  head << "label";
  if (swept) head << "sweep_" + cfg.sweep.variable;
  head << "L_max_km" << "V" << "d" << "T_C" << "K";
  head.write(out);

  for (const Job& job : jobs) {
    for (double value : values) {
      OptDomain dom = job.domain;
      const bool tmsv = job.label == "tmsv";
      if (swept && cfg.sweep.variable == "variance") dom.fixed_variance = value;
      if (swept && cfg.sweep.variable == "d" && !tmsv) dom.fixed_displacement = value;
      if (swept && cfg.sweep.variable == "tc" && !tmsv) dom.fixed_transmissivity = value;

      CsvRow row;
      row << job.label;
      if (swept) row << value;
      try {
        const KeyRateLandscape land(job.m, dom);
        const DistanceResult r = max_distance(cfg.target, land, cfg.protocol, cfg.settings, cfg.search);
        const OptPoint& x = r.at_distance.best;
        row << r.distance_km << x.variance << x.displacement << x.transmissivity << r.at_distance.key_rate;
      } catch (const NoDistanceError&) {
        row << "none" << "" << "" << "" << "";
      }
      row.write(out);
    }
  }
}

bool cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.cutoff = cfg.cutoff;
  opt.oracle_tolerance = cfg.oracle_tolerance;
  opt.exponent_points = cfg.exponent_points;
  const auto rows = run_verification(opt);

  CsvRow head;
  head << "check" << "delta" << "tolerance" << "status";
  head.write(out);
  bool ok = true;
  for (const auto& r : rows) {
    CsvRow row;
    row << r.label << r.delta << r.tolerance << (r.pass() ? "ok" : "MISMATCH");
    row.write(out);
    ok = ok && r.pass();
  }
  return ok;
}

int run_command(const std::string& name, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::ofstream file;
    std::ostream& dest = open_output(cfg, out, file);
    if (name == "state") {
      cmd_state(cfg, dest);
    } else if (name == "keyrate") {
      cmd_keyrate(cfg, dest);
    } else if (name == "optimize") {
      cmd_optimize(cfg, dest);
    } else if (name == "maxdist") {
      cmd_maxdist(cfg, dest);
    } else if (name == "verify") {
      if (!cmd_verify(cfg, dest)) {
        err << "verify: oracle mismatch beyond tolerance\n";
        return kExitIntegrity;
      }
    } else {
      throw ValidationError("command", "unknown subcommand '" + name + "'");
    }
    dest.flush();
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CutoffError& e) {
    err << "integrity: oracle.cutoff: " << e.what() << " (try " << e.suggested_cutoff() << ")\n";
    return kExitIntegrity;
  } catch (const IntegrityError& e) {
    err << "integrity: " << e.what() << '\n';
    return kExitIntegrity;
  } catch (const std::exception& e) {
    err << "integrity: " << e.what() << '\n';
    return kExitIntegrity;
  }
}

}  // namespace pcqkd
