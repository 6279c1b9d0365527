// Copyright 2026 The optoforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "optoforce_cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iostream>
#include <list>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "optoforce/cavity.hpp"
#include "optoforce/config.hpp"
#include "optoforce/constants.hpp"
#include "optoforce/detection.hpp"
#include "optoforce/dynamics.hpp"
#include "optoforce/errors.hpp"
#include "optoforce/optimize.hpp"
#include "optoforce/oracle.hpp"
#include "output.hpp"
#include "svg.hpp"

#ifndef OPTOFORCE_VERSION
#define OPTOFORCE_VERSION "0.0.0"
#endif

namespace optoforce::cli {

namespace {

using json = nlohmann::json;

// Subcommand options that can be replayed from a manifest. A value given on
// the command line wins over the manifest.
class Bindings {
 public:
  template <typename T>
  CLI::Option* add(CLI::App* app, const std::string& flag, const std::string& name, T& var,
                   const std::string& help) {
    CLI::Option* o = app->add_option(flag, var, help)->capture_default_str();
    items_.push_back({name, o, [&var] { return json(var); },
                      [&var](const json& j) { var = j.get<T>(); }});
    return o;
  }

  CLI::Option* flag(CLI::App* app, const std::string& flag, const std::string& name, bool& var,
                    const std::string& help) {
    CLI::Option* o = app->add_flag(flag, var, help);
    items_.push_back({name, o, [&var] { return json(var); },
                      [&var](const json& j) { var = j.get<bool>(); }});
    return o;
  }

  void replay(const json& options) {
    if (!options.is_object()) return;
    for (auto& item : items_) {
      if (item.option->count() == 0 && options.contains(item.name)) {
        try {
          item.set(options.at(item.name));
        } catch (const json::exception&) {
          throw ConfigError(item.name, "manifest option has the wrong type");
        }
      }
    }
  }

  json dump() const {
    json j = json::object();
    for (const auto& item : items_) j[item.name] = item.get();
    return j;
  }

 private:
  struct Item {
    std::string name;
    CLI::Option* option;
    std::function<json()> get;
    std::function<void(const json&)> set;
  };
  std::vector<Item> items_;
};

struct Subcommand {
  std::string name;
  CLI::App* app = nullptr;
  Bindings bind;

  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  std::string svg;
  double efficiency = 1.0;
  double xi = 0.0;
  double theta_offset = 0.0;
  double theta = 0.0;
  CLI::Option* efficiency_opt = nullptr;
  CLI::Option* xi_opt = nullptr;
  CLI::Option* theta_offset_opt = nullptr;
  CLI::Option* theta_opt = nullptr;

  // spectrum / squeezing
  double wmin = 0.0;
  double wmax = 0.0;
  int points = 400;
  bool linear = false;
  std::string convention = "direct";
  // cavity-sweep
  double xmax = 0.0;
  // optimize
  bool check = false;
  std::string spectrum_out;
  // sweep
  std::string param;
  std::string range;
  // montecarlo / validate
  std::uint64_t seed = 1;
  double dt = 0.0;
  double duration = 0.0;
  int ntraj = 64;
  std::string observable = "S";
  int segment = 8192;
  int stride = 16;
  double burn_in = 0.0;
  double tolerance = 0.05;
  double band = 0.0;
  std::string report;
  std::string rows;
};

struct Resolved {
  json parameters;
  Config config;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path + ": " + e.what());
  }
}

bool is_manifest(const json& j) {
  return j.is_object() && j.contains("tool") && j.contains("config") && j["config"].is_object();
}

Resolved resolve(Subcommand& sub) {
  json file = read_json(sub.config_path);
  json parameters = file;
  if (is_manifest(file)) {
    parameters = file["config"];
    if (file.contains("options")) sub.bind.replay(file["options"]);
  }
  for (const auto& assignment : sub.sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("--set", "expected key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    apply_override(parameters, key, value);
  }
  if (sub.efficiency_opt->count()) apply_override(parameters, "efficiency", sub.efficiency);
  if (sub.xi_opt->count()) apply_override(parameters, "xi", sub.xi);
  if (sub.theta_offset_opt->count()) {
    apply_override(parameters, "theta_offset_rad", sub.theta_offset);
  }
  if (sub.theta_opt->count()) apply_override(parameters, "theta_rad", sub.theta);
  return {parameters, parse_config(parameters)};
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

int thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OPTOFORCE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v <= 0) {
      throw ConfigError("OPTOFORCE_THREADS", "must be a positive integer");
    }
    return static_cast<int>(std::min<long>(v, hw));
  }
  return static_cast<int>(hw);
}

detection::Convention parse_convention(const std::string& s) {
  if (s == "direct") return detection::Convention::kDirect;
  if (s == "symmetrized") return detection::Convention::kSymmetrized;
  throw ConfigError("convention", "expected direct or symmetrized");
}

// 0 followed by `points` samples between wmin and wmax (defaults 1e-4 and
// 10 omega_m), log spaced unless linear.
std::vector<double> frequency_grid(const Subcommand& sub, double omega_m) {
  const double lo = sub.wmin > 0.0 ? sub.wmin : 1e-4 * omega_m;
  const double hi = sub.wmax > 0.0 ? sub.wmax : 10.0 * omega_m;
  if (!(hi > lo)) throw ConfigError("wmax", "must exceed wmin");
  if (sub.points < 2) throw ConfigError("points", "need at least 2");
  std::vector<double> grid{0.0};
  for (int i = 0; i < sub.points; ++i) {
    const double t = static_cast<double>(i) / (sub.points - 1);
    grid.push_back(sub.linear ? lo + t * (hi - lo)
                              : std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  return grid;
}

std::vector<double> linspace_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("range", "expected a:b:n");
  double a = 0, b = 0;
  long n = 0;
  try {
    std::size_t pos = 0;
    a = std::stod(parts[0], &pos);
    if (pos != parts[0].size()) throw std::invalid_argument("a");
    b = std::stod(parts[1], &pos);
    if (pos != parts[1].size()) throw std::invalid_argument("b");
    n = std::stol(parts[2], &pos);
    if (pos != parts[2].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw ConfigError("range", "expected numbers in a:b:n, got '" + text + "'");
  }
  if (n < 1) throw ConfigError("range", "n must be at least 1");
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / double(n - 1));
  return v;
}

class Emitter {
 public:
  Emitter(Subcommand& sub, const std::vector<std::string>& args, std::ostream& out,
          std::ostream& err)
      : sub_(sub), args_(args), out_(out), err_(err) {}

  // Primary artifact: --out if given, else stdout.
  void primary(std::string content) {
    if (sub_.out.empty()) {
      stdout_payload_ = std::move(content);
    } else {
      files_.add(sub_.out, std::move(content));
    }
  }
  void extra(const std::string& path, std::string content) {
    if (!path.empty()) files_.add(path, std::move(content));
  }
  void summary(std::string line) { summary_ = std::move(line); }

  void finish(const Resolved& resolved, json extra_manifest = json::object()) {
    if (!sub_.out.empty()) {
      json manifest = {
          {"tool", "optoforce"},
          {"version", OPTOFORCE_VERSION},
          {"subcommand", sub_.name},
          {"argv", args_},
          {"timestamp", timestamp()},
          {"config", resolved.parameters},
          {"derived_inputs", json::object()},
          {"options", sub_.bind.dump()},
      };
      for (auto& [k, v] : extra_manifest.items()) manifest[k] = v;
      auto outputs = files_.paths();
      const std::string manifest_path = sub_.out + ".manifest.json";
      outputs.push_back(manifest_path);
      manifest["outputs"] = outputs;
      files_.add(manifest_path, manifest.dump(2) + "\n");
    }
    files_.commit();
    out_ << stdout_payload_;
    (sub_.out.empty() ? err_ : out_) << summary_ << '\n';
  }

 private:
  Subcommand& sub_;
  const std::vector<std::string>& args_;
  std::ostream& out_;
  std::ostream& err_;
  OutputSet files_;
  std::string stdout_payload_;
  std::string summary_;
};

std::string sci(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// --- subcommands ------------------------------------------------------------

void cmd_cavity_sweep(Subcommand& sub, const Resolved& r, Emitter& emit) {
  const CavityParams& cav = r.config.system.cavity;
  const double xmax = sub.xmax > 0.0 ? sub.xmax : cav.wavelength() / 100.0;
  if (sub.points < 2) throw ConfigError("points", "need at least 2");
  std::vector<double> xs;
  for (int i = 0; i < sub.points; ++i) xs.push_back(-xmax + 2.0 * xmax * i / (sub.points - 1));
  const cavity::ModeStructure m = cavity::sweep(cav, xs);

  CsvTable table({"x_m", "splitting_rad_s", "omega_plus_rad_s", "omega_minus_rad_s"});
  for (std::size_t i = 0; i < m.x.size(); ++i) {
    table.add_row({m.x[i], m.splitting[i], m.omega_plus[i], m.omega_minus[i]});
  }
  emit.primary(table.str());
  if (!sub.svg.empty()) {
    std::vector<double> x, split, matched;
    for (std::size_t i = 0; i < m.x.size(); ++i) {
      if (m.x[i] <= 0.0) continue;
      x.push_back(m.x[i]);
      split.push_back(m.splitting[i]);
      matched.push_back(m.omega_plus[i] - m.omega_minus[i]);
    }
    emit.extra(sub.svg, loglog_svg("normal-mode splitting", "x (m)", x,
                                   {{"exact", split}, {"2 sqrt(f^2 x^2 + g^2)", matched}}));
  }
  emit.summary("cavity-sweep: " + std::to_string(m.x.size()) + " points, splitting at x=0 " +
               sci(cavity::splitting(cav.reflectivity, 0.0, cav.wavenumber(),
                                     cav.subcavity_length)) +
               " rad/s");
}

void cmd_stability(Subcommand&, const Resolved& r, Emitter& emit) {
  const DerivedQuantities d = derive(r.config.system, r.config.op);
  const auto rep = dynamics::stability(d);
  const json j = {
      {"stable", rep.stable},
      {"pump_ratio", rep.pump_ratio},
      {"minors", rep.hurwitz_minors},
      {"characteristic_coefficients", rep.characteristic_coefficients},
      {"rate_scale_rad_s", rep.rate_scale},
      {"threshold_stable", rep.threshold_stable},
  };
  emit.primary(j.dump(2) + "\n");
  emit.summary(std::string("stability: ") + (rep.stable ? "stable" : "unstable") +
               ", alpha^2/alpha0^2 = " + sci(rep.pump_ratio));
}

// Spectra only exist about a stable steady state.
DerivedQuantities stable_point(const Resolved& r) {
  const DerivedQuantities d = derive(r.config.system, r.config.op);
  const auto rep = dynamics::stability(d);
  if (!rep.stable) {
    throw StabilityError("operating point is unstable (alpha^2/alpha0^2 = " +
                             sci(rep.pump_ratio) + "), no stationary spectrum",
                         rep.pump_ratio);
  }
  return d;
}

void cmd_spectrum(Subcommand& sub, const Resolved& r, Emitter& emit) {
  const DerivedQuantities d = stable_point(r);
  const auto grid = frequency_grid(sub, d.omega_m);
  const auto spec = detection::sensitivity(d, grid, parse_convention(sub.convention));

  CsvTable table({"omega_rad_s", "total_N2_per_Hz", "thermal_N2_per_Hz", "backaction_N2_per_Hz",
                  "imprecision_N2_per_Hz", "cross_N2_per_Hz", "detection_loss_N2_per_Hz",
                  "amplitude_N_per_rtHz", "sql_N2_per_Hz"});
  std::vector<double> total, sql;
  for (const auto& p : spec.points) {
    const double s = detection::sql_reference(d, p.omega);
    table.add_row({p.omega, p.total, p.thermal, p.backaction, p.imprecision, p.cross,
                   p.detection_loss, p.amplitude(), s});
    total.push_back(p.total);
    sql.push_back(s);
  }
  emit.primary(table.str());
  if (!sub.svg.empty()) {
    std::vector<double> thermal, back, imp;
    for (const auto& p : spec.points) {
      thermal.push_back(p.thermal);
      back.push_back(p.backaction);
      imp.push_back(p.imprecision);
    }
    emit.extra(sub.svg, loglog_svg("force noise eta (N^2/Hz)", "omega (rad/s)", grid,
                                   {{"total", total},
                                    {"thermal", thermal},
                                    {"backaction", back},
                                    {"imprecision", imp},
                                    {"SQL", sql}}));
  }
  const double ratio = spec.points.front().total / sql.front();
  emit.summary("spectrum: eta(0) = " + sci(spec.points.front().total) + " N^2/Hz, " +
               sci(-10.0 * std::log10(ratio)) + " dB below the SQL");
}

void cmd_squeezing(Subcommand& sub, const Resolved& r, Emitter& emit) {
  const DerivedQuantities d = stable_point(r);
  const auto grid = frequency_grid(sub, d.omega_m);
  const auto spec = detection::squeezing_spectrum(d, grid, parse_convention(sub.convention));
  CsvTable table({"omega_rad_s", "S_total", "S_thermal", "S_backaction", "S_imprecision",
                  "S_cross", "S_detection_loss", "dB_rel_unity", "dB_rel_vacuum"});
  std::vector<double> total;
  for (const auto& p : spec.points) {
    table.add_row({p.omega, p.total, p.thermal, p.backaction, p.imprecision, p.cross,
                   p.detection_loss, p.db_rel_unity(), p.db_rel_vacuum()});
    total.push_back(p.total);
  }
  emit.primary(table.str());
  if (!sub.svg.empty()) {
    emit.extra(sub.svg,
               loglog_svg("squeezing spectrum", "omega (rad/s)", grid,
                          {{"S", total},
                           {"vacuum 1/2", std::vector<double>(grid.size(), 0.5)}}));
  }
  const auto& dc = spec.points.front();
  emit.summary("squeezing: S(0) = " + sci(dc.total) + " (" + sci(dc.db_rel_unity()) +
               " dB rel. unity, " + sci(dc.db_rel_vacuum()) + " dB rel. vacuum)");
}

double configured_xi(const Config& c) {
  if (const auto* off = std::get_if<CriticalOffset>(&c.op.homodyne)) return off->xi;
  // Angle given: offset from theta0 at the optimal detuning Delta = 2 kappa.
  const double kappa = c.system.cavity.kappa();
  const double theta = std::get<HomodyneAngle>(c.op.homodyne).radians;
  return xi_from_offset(theta - critical_angle(kappa, 2.0 * kappa), kappa, 2.0 * kappa);
}

json to_json(const optimize::SearchResult& s) {
  return {{"theta_rad", s.theta},
          {"theta_offset_rad", s.theta_offset},
          {"pump_ratio", s.pump_ratio},
          {"Delta_over_kappa", s.delta_over_kappa},
          {"xi", s.xi},
          {"eta_dc_N2_per_Hz", s.eta_dc},
          {"pump_pinned", s.pump_pinned},
          {"xi_pinned", s.xi_pinned},
          {"detuning_pinned", s.detuning_pinned}};
}

void cmd_optimize(Subcommand& sub, const Resolved& r, Emitter& emit) {
  const SystemParams& system = r.config.system;
  const double xi = configured_xi(r.config);
  const auto o = optimize::analytic_optimum(system, xi);
  json j = {
      {"xi", o.xi},
      {"xi_evaluated", o.xi_evaluated},
      {"theta_star_rad", o.theta_star},
      {"theta0_rad", o.theta0},
      {"alpha_star_sq", o.alpha_star_sq},
      {"alpha0_sq", o.alpha0_sq},
      {"Delta_star_rad_s", o.Delta_star},
      {"P_opt_W", o.P_opt},
      {"P_circ_W", o.P_circ},
      {"eta_dc_N2_per_Hz", o.eta_dc},
      {"eta_dc_closed_form_N2_per_Hz", o.eta_dc_closed_form},
      {"sql_dc_N2_per_Hz", o.sql_dc},
      {"eta_dc_over_sql", o.eta_dc / o.sql_dc},
      {"bandwidth_est_rad_s", o.bandwidth_est},
      {"bandwidth_measured_rad_s", o.bandwidth_measured},
      {"non_monotone", o.non_monotone},
      {"stable", o.stable},
  };
  if (sub.check) {
    const auto g = optimize::numeric_global_check(system);
    j["numeric_check"] = {{"free", to_json(g.free)},
                          {"branch", to_json(g.branch)},
                          {"theta_analytic_rad", g.theta_analytic},
                          {"eta_analytic_N2_per_Hz", g.eta_analytic}};
  }
  if (!sub.spectrum_out.empty()) {
    OperatingPoint op;
    op.pump = OptimalPump{PumpRule::kNearCritical};
    op.detuning = EffectiveDetuning{o.Delta_star};
    op.homodyne = CriticalOffset{o.xi_evaluated};
    op.efficiency = r.config.op.efficiency;
    const DerivedQuantities d = derive(system, op);
    const auto grid = frequency_grid(sub, d.omega_m);
    CsvTable table({"omega_rad_s", "total_N2_per_Hz", "sql_N2_per_Hz"});
    for (double w : grid) {
      table.add_row({w, detection::sensitivity_at(d, w).total, detection::sql_reference(d, w)});
    }
    emit.extra(sub.spectrum_out, table.str());
  }
  emit.primary(j.dump(2) + "\n");
  emit.summary("optimize: P_opt = " + sci(o.P_opt) + " W, P_circ = " + sci(o.P_circ) +
               " W, eta(0)/SQL = " + sci(o.eta_dc / o.sql_dc));
}

void cmd_sweep(Subcommand& sub, const Resolved& r, Emitter& emit) {
  const SystemParams& system = r.config.system;
  const DerivedQuantities base = derive(system, r.config.op);
  const double ratio = base.detuning / base.kappa;
  const double xi = std::max(base.xi, optimize::kXiFloor);
  const auto values = linspace_range(sub.range);

  std::string column;
  if (sub.param == "kappa") {
    column = "kappa_over_omega_m";
  } else if (sub.param == "xi") {
    column = "xi_swept";
  } else if (sub.param == "delta") {
    column = "Delta_over_kappa";
  } else {
    throw ConfigError("param", "expected kappa, xi or delta");
  }
  CsvTable table({column, "kappa_rad_s", "detuning_rad_s", "xi", "eta_dc_N2_per_Hz",
                  "eta_dc_over_sql", "bandwidth_est_rad_s", "bandwidth_measured_rad_s",
                  "bandwidth_ratio", "non_monotone"});
  std::vector<double> xs, measured, estimate;
  for (double v : values) {
    optimize::SweepRow row;
    if (sub.param == "kappa") {
      row = optimize::sweep_point(system, v * base.omega_m, ratio, xi);
    } else if (sub.param == "xi") {
      row = optimize::sweep_point(system, base.kappa, ratio, v);
    } else {
      row = optimize::sweep_point(system, base.kappa, v, xi);
    }
    table.add_row({v, row.kappa, row.detuning, row.xi, row.eta_dc, row.eta_dc_over_sql,
                   row.bandwidth_est, row.bandwidth_measured,
                   row.bandwidth_measured / row.bandwidth_est, row.non_monotone ? 1.0 : 0.0});
    xs.push_back(v);
    measured.push_back(row.bandwidth_measured);
    estimate.push_back(row.bandwidth_est);
  }
  emit.primary(table.str());
  if (!sub.svg.empty()) {
    emit.extra(sub.svg, loglog_svg("bandwidth vs " + column, column, xs,
                                   {{"measured", measured}, {"estimate", estimate}}));
  }
  emit.summary("sweep: " + std::to_string(values.size()) + " points over " + column);
}

oracle::SimulationConfig simulation_config(const Subcommand& sub, const DerivedQuantities& d) {
  oracle::SimulationConfig c = oracle::default_config(d);
  if (sub.dt > 0.0) c.dt = sub.dt;
  c.n_steps = sub.duration > 0.0 ? std::llround(sub.duration / c.dt) : std::int64_t{1} << 20;
  c.n_trajectories = sub.ntraj;
  c.rng_seed = sub.seed;
  c.record = {oracle::parse_observable(sub.observable)};
  if (sub.burn_in > 0.0) c.burn_in = sub.burn_in;
  c.record_stride = sub.stride;
  c.segment_length = sub.segment;
  c.max_threads = thread_cap();
  return c;
}

json to_json(const oracle::ValidationReport& v, const oracle::SimulationConfig& c) {
  return {{"pass", v.pass},
          {"tolerance", v.tolerance},
          {"band_max_rad_s", v.band_max},
          {"max_deviation_signal", v.max_deviation_signal},
          {"max_deviation_force", v.max_deviation_force},
          {"omega_worst_signal_rad_s", v.omega_worst_signal},
          {"omega_worst_force_rad_s", v.omega_worst_force},
          {"agreement_band_signal_rad_s", v.agreement_band_signal},
          {"agreement_band_force_rad_s", v.agreement_band_force},
          {"n_bins", v.n_bins},
          {"n_segments", v.n_segments},
          {"seed", c.rng_seed},
          {"n_trajectories", c.n_trajectories},
          {"n_steps", c.n_steps},
          {"dt_s", c.dt}};
}

std::string comparison_csv(const oracle::ValidationReport& v) {
  CsvTable t({"omega_rad_s", "mc_S_s", "mc_S_stderr_s", "analytic_S_s", "mc_force_N2_per_Hz",
              "analytic_eta_N2_per_Hz"});
  for (const auto& row : v.rows) {
    t.add_row({row.omega, row.mc_signal, row.mc_signal_stderr, row.analytic_signal, row.mc_force,
               row.analytic_force});
  }
  return t.str();
}

std::string psd_unit(oracle::Observable o) {
  switch (o) {
    case oracle::Observable::kX: return "m2_s";
    case oracle::Observable::kP: return "kg2_m2_per_s";
    default: return "s";
  }
}

void cmd_montecarlo(Subcommand& sub, const Resolved& r, Emitter& emit) {
  DerivedQuantities d = derive(r.config.system, r.config.op);
  const auto config = simulation_config(sub, d);
  const oracle::Observable obs = config.record.front();
  oracle::PSDEstimate psd;
  if (obs == oracle::Observable::kSignal) {
    psd = oracle::simulate_signal_psd(d, config);
  } else {
    psd = oracle::estimate_psd(oracle::simulate(d, config), obs);
  }
  const std::string name = "psd_" + oracle::to_string(obs) + "_" + psd_unit(obs);
  CsvTable table({"omega_rad_s", name, name + "_stderr"});
  for (std::size_t k = 0; k < psd.omega.size(); ++k) {
    table.add_row({psd.omega[k], psd.psd[k], psd.std_error[k]});
  }
  emit.primary(table.str());

  std::string line = "montecarlo: " + std::to_string(psd.n_segments) + " segments, variance " +
                     sci(psd.integrated_variance());
  if (obs == oracle::Observable::kSignal) {
    const double band = sub.band > 0.0 ? sub.band : oracle::default_band(d);
    const auto v = oracle::compare(psd, d, band, sub.tolerance);
    const std::string report_path =
        !sub.report.empty() ? sub.report : (sub.out.empty() ? "" : sub.out + ".report.json");
    const std::string report = to_json(v, config).dump(2) + "\n";
    if (report_path.empty()) {
      line += "\n" + report;
    } else {
      emit.extra(report_path, report);
    }
    line += ", max deviation vs analytic " + sci(v.max_deviation_signal);
  }
  emit.summary(line);
}

int cmd_validate(Subcommand& sub, const Resolved& r, Emitter& emit) {
  sub.observable = "S";
  const DerivedQuantities d = derive(r.config.system, r.config.op);
  const auto config = simulation_config(sub, d);
  oracle::ValidationOptions options;
  options.tolerance = sub.tolerance;
  options.band_max = sub.band;
  const auto v = oracle::validate(d, config, options);
  emit.primary(to_json(v, config).dump(2) + "\n");
  emit.extra(sub.rows, comparison_csv(v));
  if (!sub.svg.empty()) {
    std::vector<double> w, mc, an;
    for (const auto& row : v.rows) {
      w.push_back(row.omega);
      mc.push_back(row.mc_signal);
      an.push_back(row.analytic_signal);
    }
    emit.extra(sub.svg, loglog_svg("homodyne record PSD", "omega (rad/s)", w,
                                   {{"Monte Carlo", mc}, {"analytic", an}}));
  }
  emit.summary(std::string("validate: ") + (v.pass ? "PASS" : "FAIL") + ", max deviation " +
               sci(v.max_deviation_signal) + " (signal), " + sci(v.max_deviation_force) +
               " (force) over " + std::to_string(v.n_bins) + " bins up to " + sci(v.band_max) +
               " rad/s");
  return v.pass ? kOk : kValidationFailed;
}

void add_common(Subcommand& s) {
  CLI::App* a = s.app;
  a->add_option("--config", s.config_path, "parameter JSON file or run manifest")->required();
  a->add_option("--set", s.sets, "override a parameter, key=value (repeatable)");
  a->add_option("--out", s.out, "output file (default: stdout)");
  a->add_option("--svg", s.svg, "also write a log-log SVG plot");
  s.efficiency_opt = a->add_option("--efficiency", s.efficiency, "detection efficiency P");
  s.xi_opt = a->add_option("--xi", s.xi, "critical offset xi");
  s.theta_offset_opt =
      a->add_option("--theta-offset", s.theta_offset, "homodyne offset theta - theta0 (rad)");
  s.theta_opt = a->add_option("--theta", s.theta, "homodyne angle (rad)");
}

void add_grid(Subcommand& s) {
  s.bind.add(s.app, "--wmin", "wmin", s.wmin, "lowest nonzero frequency, rad/s (0: 1e-4 omega_m)");
  s.bind.add(s.app, "--wmax", "wmax", s.wmax, "highest frequency, rad/s (0: 10 omega_m)");
  s.bind.add(s.app, "--points", "points", s.points, "grid points besides omega = 0");
  s.bind.flag(s.app, "--linear", "linear", s.linear, "linear instead of log spacing");
}

void add_simulation(Subcommand& s) {
  s.bind.add(s.app, "--seed", "seed", s.seed, "RNG seed");
  s.bind.add(s.app, "--dt", "dt", s.dt, "integration step, s (0: largest allowed)");
  s.bind.add(s.app, "--duration", "duration", s.duration,
             "recorded time per trajectory, s (0: 2^20 steps)");
  s.bind.add(s.app, "--ntraj", "ntraj", s.ntraj, "number of trajectories");
  s.bind.add(s.app, "--segment", "segment", s.segment, "Welch segment length (power of two)");
  s.bind.add(s.app, "--stride", "stride", s.stride, "integration steps per record sample");
  s.bind.add(s.app, "--burn-in", "burn_in", s.burn_in, "burn-in, s (0: shortest allowed)");
  s.bind.add(s.app, "--tolerance", "tolerance", s.tolerance, "relative tolerance per bin");
  s.bind.add(s.app, "--band", "band", s.band, "upper comparison frequency, rad/s (0: 3x bandwidth)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"optoforce: force-sensing noise of a membrane-in-the-middle optomechanical system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", OPTOFORCE_VERSION);

  std::list<Subcommand> subs;
  const auto make = [&](const std::string& name, const std::string& help) -> Subcommand& {
    Subcommand& s = subs.emplace_back();
    s.name = name;
    s.app = app.add_subcommand(name, help);
    add_common(s);
    return s;
  };

  Subcommand& cavity_sweep = make("cavity-sweep", "normal-mode splitting versus displacement");
  cavity_sweep.bind.add(cavity_sweep.app, "--xmax", "xmax", cavity_sweep.xmax,
                        "largest |x|, m (0: lambda/100)");
  cavity_sweep.points = 201;
  cavity_sweep.bind.add(cavity_sweep.app, "--points", "points", cavity_sweep.points,
                        "number of displacements");

  make("stability", "Routh-Hurwitz report as JSON");

  for (const char* name : {"spectrum", "squeezing"}) {
    Subcommand& s = make(name, std::string(name) == "spectrum" ? "force noise eta(omega) as CSV"
                                                               : "squeezing spectrum as CSV");
    add_grid(s);
    s.bind.add(s.app, "--convention", "convention", s.convention, "direct | symmetrized");
  }

  Subcommand& opt = make("optimize", "optimal operating point as JSON");
  opt.bind.flag(opt.app, "--check", "check", opt.check, "run the numeric global search too");
  opt.bind.add(opt.app, "--spectrum-out", "spectrum_out", opt.spectrum_out,
               "write eta(omega) at the optimum to this CSV");
  add_grid(opt);

  Subcommand& sweep = make("sweep", "bandwidth and DC noise along one parameter");
  sweep.bind.add(sweep.app, "--param", "param", sweep.param, "kappa | xi | delta")->required();
  sweep.bind.add(sweep.app, "--range", "range", sweep.range,
                 "a:b:n (kappa in units of omega_m, delta as Delta/kappa)")
      ->required();

  Subcommand& mc = make("montecarlo", "Langevin Monte Carlo PSD as CSV");
  add_simulation(mc);
  mc.bind.add(mc.app, "--observable", "observable", mc.observable, "x | p | X | Y | S");
  mc.app->add_option("--report", mc.report, "validation report path (S only)");

  Subcommand& val = make("validate", "Monte Carlo versus closed forms; exit 1 on disagreement");
  add_simulation(val);
  val.app->add_option("--rows", val.rows, "per-bin comparison CSV");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  Subcommand* chosen = nullptr;
  for (auto& s : subs) {
    if (s.app->parsed()) chosen = &s;
  }
  if (chosen == nullptr) return kConfigError;

  try {
    Resolved resolved = resolve(*chosen);
    Emitter emit(*chosen, args, out, err);
    int code = kOk;
    json extra = json::object();
    const std::string& n = chosen->name;
    if (n == "cavity-sweep") {
      cmd_cavity_sweep(*chosen, resolved, emit);
    } else if (n == "stability") {
      cmd_stability(*chosen, resolved, emit);
    } else if (n == "spectrum") {
      cmd_spectrum(*chosen, resolved, emit);
    } else if (n == "squeezing") {
      cmd_squeezing(*chosen, resolved, emit);
    } else if (n == "optimize") {
      cmd_optimize(*chosen, resolved, emit);
    } else if (n == "sweep") {
      cmd_sweep(*chosen, resolved, emit);
    } else if (n == "montecarlo") {
      cmd_montecarlo(*chosen, resolved, emit);
      extra["seed"] = chosen->seed;
    } else if (n == "validate") {
      code = cmd_validate(*chosen, resolved, emit);
      extra["seed"] = chosen->seed;
    }
    DerivedQuantities derived;
    try {
      derived = derive(resolved.config.system, resolved.config.op);
      extra["derived_inputs"] = optoforce::to_json(derived);
    } catch (const Error&) {
      // optimize accepts xi = 0, where the operating point itself is invalid.
    }
    emit.finish(resolved, extra);
    return code;
  } catch (const ConfigError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kConfigError;
  } catch (const PhysicsError& e) {
    err << "error: rejected operating point: " << e.what() << '\n';
    return kPhysicsError;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace optoforce::cli
