#include "lieavg/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "lieavg/analysis.hpp"
#include "lieavg/coeffs.hpp"
#include "lieavg/config.hpp"
#include "lieavg/errors.hpp"
#include "lieavg/lbs.hpp"
#include "lieavg/presets.hpp"
#include "lieavg/sim.hpp"
#include "lieavg/system.hpp"

namespace lieavg::cli {

using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

// Validation failure carrying the full report.
struct ValidationFailed : std::runtime_error {
  ordered_json report;
  explicit ValidationFailed(ordered_json r) : std::runtime_error("validation failed"), report(std::move(r)) {}
};

// Numeric divergence after all outputs were written.
struct Diverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// NaN and infinity become null.
ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json report_json(const ValidationReport& rep) {
  ordered_json j;
  j["ok"] = rep.ok();
  j["checks"] = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["channel"] = c.channel;
    e["passed"] = c.passed;
    e["measured"] = ordered_json::object();
    for (const auto& [k, v] : c.measured) e["measured"][k] = num(v);
    e["message"] = c.message;
    j["checks"].push_back(e);
  }
  j["caveats"] = rep.caveats;
  return j;
}

ordered_json interval_json(const Interval& iv) {
  return {{"lo", num(iv.lo)}, {"hi", num(iv.hi)}, {"lo_closed", iv.lo_closed}, {"empty", iv.empty()}};
}

ordered_json design_json(const DesignReport& d) {
  ordered_json j;
  j["m"] = d.m;
  j["r"] = d.r;
  j["p"] = d.p;
  j["omega"] = num(d.omega);
  j["p_star"] = num(d.p_star);
  j["epsilon"] = num(d.epsilon);
  j["canonical_range"] = interval_json(d.canonical_range);
  j["unit_order_range"] = interval_json(d.unit_order_range);
  j["unit_order_feasible"] = d.unit_order_feasible;
  j["half_order_bound"] = num(d.half_order_bound);
  j["half_order_feasible"] = d.half_order_feasible;
  j["order_bound"] = ordered_json::array();
  for (const auto& v : d.order_bound) {
    j["order_bound"].push_back({{"r", v.r},
                                {"p_star", interval_json(v.p_star)},
                                {"p_star_feasible", v.p_star_feasible},
                                {"limit_bounded", v.limit_bounded},
                                {"unbounded_terms", v.unbounded_terms},
                                {"holds", v.holds}});
  }
  j["order_bound_holds"] = d.order_bound_holds;
  j["joint_infeasible"] = d.joint_infeasible;
  j["sum_rule"] = {{"residual", num(d.sum_rule_residual)},    {"sum_ok", d.sum_rule_sum_ok},
                   {"near_miss", d.sum_rule_near_miss},       {"order_ok", d.sum_rule_order_ok},
                   {"limit_bounded", d.sum_rule_limit_bounded}, {"holds", d.sum_rule_holds}};
  j["complete_averaging"] = d.complete_averaging;
  j["asymptote_order"] = d.asymptote_order;
  j["family_summary"] = ordered_json::object();
  for (const auto& [fam, counts] : d.family_summary) {
    ordered_json c = ordered_json::object();
    for (const auto& [cls, n] : counts) c[cls] = n;
    j["family_summary"][fam] = c;
  }
  return j;
}

// Options shared by every system-consuming subcommand.
struct Common {
  std::string config;
  std::string preset;
  std::string out;
  bool no_meta = false;
  std::optional<double> omega;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::vector<double> x0;
  int grid = 4096;
};

void add_common(CLI::App* sub, Common& c, bool needs_out) {
  auto* src = sub->add_option_group("source");
  src->add_option("--config", c.config, "JSON system config");
  src->add_option("--preset", c.preset, "built-in preset name instead of a config file");
  src->require_option(1);
  auto* o = sub->add_option("--out", c.out, "output path");
  if (needs_out) o->required();
  sub->add_flag("--no-meta", c.no_meta, "omit the metadata block from JSON outputs");
  sub->add_option("--omega", c.omega, "override omega");
  sub->add_option("--t-final", c.t_final, "override the simulation horizon");
  sub->add_option("--dt", c.dt, "override the user step");
  sub->add_option("--x0", c.x0, "override the initial state")->delimiter(',');
  sub->add_option("--grid", c.grid, "initial quadrature intervals per period")->check(CLI::Range(8, 1 << 20));
}

struct Loaded {
  Config cfg;
  std::shared_ptr<const ControlAffineSystem> sys;
  QuadratureOptions quad;
};

Loaded load(const Common& c, bool check = true) {
  Loaded l;
  l.cfg = c.config.empty() ? build_preset(c.preset).config : load_config(c.config);
  if (c.omega) l.cfg.system.omega = *c.omega;
  if (c.t_final) l.cfg.simulation.t_final = *c.t_final;
  if (c.dt) l.cfg.simulation.dt = *c.dt;
  if (!c.x0.empty()) l.cfg.simulation.x0 = c.x0;
  if (static_cast<int>(l.cfg.simulation.x0.size()) != l.cfg.system.n)
    throw ConfigError("initial state must have n entries");
  if (!(l.cfg.simulation.t_final > 0.0) || !(l.cfg.simulation.dt > 0.0))
    throw ConfigError("t_final and dt must be positive");
  if (check) {
    ValidationReport rep = validate(l.cfg.system);
    if (!rep.ok()) throw ValidationFailed(report_json(rep));
  }
  l.sys = std::make_shared<const ControlAffineSystem>(l.cfg.system);
  l.quad.initial_grid = c.grid;
  l.quad.max_grid = std::max(l.quad.max_grid, c.grid);
  return l;
}

void add_meta(ordered_json& j, const Common& c) {
  if (c.no_meta) return;
  j["meta"] = {{"tool", "lieavg"}, {"version", kVersion}, {"generated_at", iso_now()}};
}

// "original" -> 0, "lbs:R" -> R.
int parse_model(const std::string& m) {
  if (m == "original") return 0;
  if (m.rfind("lbs:", 0) == 0 && m.size() == 5 && m[4] >= '1' && m[4] <= '4') return m[4] - '0';
  throw ConfigError("model must be 'original' or 'lbs:R' with R in 1..4");
}

std::string summary_path(const std::string& out) {
  const auto dot = out.find_last_of('.');
  const auto slash = out.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return out + ".json";
  return out.substr(0, dot) + ".json";
}

std::string csv_string(const std::function<void(std::ostream&)>& f) {
  std::ostringstream ss;
  f(ss);
  return ss.str();
}

int cmd_validate(const Common& c, std::ostream& err) {
  Config cfg = c.config.empty() ? build_preset(c.preset).config : load_config(c.config);
  if (c.omega) cfg.system.omega = *c.omega;
  ValidationReport rep = validate(cfg.system);
  ordered_json j = report_json(rep);
  add_meta(j, c);
  if (!c.out.empty()) write_file(c.out, dump(j));
  if (!rep.ok()) {
    err << dump(report_json(rep));
    return kConfigError;
  }
  return kOk;
}

int cmd_coeffs(const Common& c, int order) {
  Loaded l = load(c);
  CoefficientTable t = build_table(*l.sys, order, l.quad);
  write_file(c.out, csv_string([&](std::ostream& os) { t.write_csv(os); }));
  return kOk;
}

int cmd_assemble(const Common& c, int order, bool asymptote, bool no_prune) {
  Loaded l = load(c);
  CoefficientTable t = build_table(*l.sys, std::max(order, 1), l.quad);
  AssembleOptions opt;
  opt.prune = !no_prune;
  AveragedSystem avg = asymptote ? assemble_asymptote(*l.sys, order, t) : assemble(l.sys, order, t, l.sys->omega(), opt);
  ordered_json j;
  j["system"] = l.cfg.system.name;
  j["order"] = order;
  j["omega"] = asymptote ? ordered_json(nullptr) : ordered_json(l.sys->omega());
  j["asymptote"] = asymptote;
  j["period_multiple"] = t.period.multiple.str();
  j["terms"] = ordered_json::array();
  for (const auto& term : avg.terms()) {
    j["terms"].push_back({{"family", family_name(term.coeff.family)},
                          {"indices", term.coeff.indices},
                          {"bracket", to_string(term.expr)},
                          {"value", num(term.coeff.value)},
                          {"omega_exponent", num(term.coeff.omega_exponent)},
                          {"class", boundedness_name(term.coeff.cls)},
                          {"weight", num(term.weight)}});
  }
  add_meta(j, c);
  write_file(c.out, dump(j));
  return kOk;
}

int cmd_simulate(const Common& c, const std::string& model) {
  const int r = parse_model(model);
  Loaded l = load(c);
  const auto& sim = l.cfg.simulation;
  Trajectory tr;
  if (r == 0) {
    tr = simulate_original(*l.sys, sim.x0, sim.t_final, sim.dt);
  } else {
    CoefficientTable t = build_table(*l.sys, std::max(r, 1), l.quad);
    AveragedSystem avg = assemble(l.sys, r, t, l.sys->omega());
    tr = simulate_lbs(avg, sim.x0, sim.t_final, oscillatory_step(*l.sys, sim.dt));
  }
  write_file(c.out, csv_string([&](std::ostream& os) { write_csv(tr, os); }));
  if (tr.diverged) throw Diverged("trajectory diverged at t = " + format_double(tr.divergence_time) + ": " +
                                  tr.divergence_reason);
  return kOk;
}

int cmd_compare(const Common& c, int order, const std::string& summary) {
  Loaded l = load(c);
  const auto& sim = l.cfg.simulation;
  CoefficientTable t = build_table(*l.sys, std::max(order, 1), l.quad);
  ComparisonRun run = run_comparison(*l.sys, order, t, sim.x0, sim.t_final, sim.dt);
  write_file(c.out, csv_string([&](std::ostream& os) {
               os << "t,distance\n";
               for (const auto& [tt, d] : distance_series(run.original, run.lbs))
                 os << format_double(tt) << ',' << format_double(d) << '\n';
             }));
  ordered_json j;
  j["system"] = l.cfg.system.name;
  j["order"] = order;
  j["omega"] = l.sys->omega();
  j["t_final"] = sim.t_final;
  j["dt"] = oscillatory_step(*l.sys, sim.dt);
  j["samples"] = run.original.size();
  j["d_sup"] = num(run.distance.sup);
  j["d_rms"] = num(run.distance.rms);
  j["original_diverged"] = run.original.diverged;
  j["lbs_diverged"] = run.lbs.diverged;
  add_meta(j, c);
  write_file(summary.empty() ? summary_path(c.out) : summary, dump(j));
  if (run.original.diverged || run.lbs.diverged) throw Diverged("a trajectory diverged");
  return kOk;
}

int cmd_check(const Common& c, int order) {
  Loaded l = load(c);
  DesignReport d = check_design(*l.sys, order, l.quad);
  ordered_json j{{"system", l.cfg.system.name}};
  j.update(design_json(d));
  add_meta(j, c);
  write_file(c.out, dump(j));
  return kOk;
}

int cmd_sweep(const Common& c, int order, const std::vector<double>& omegas, const std::string& summary,
              int threads) {
  Loaded l = load(c);
  SweepOptions opt;
  opt.t_final = l.cfg.simulation.t_final;
  opt.dt = l.cfg.simulation.dt;
  opt.threads = threads;
  opt.quadrature = l.quad;
  SweepResult res = sweep_omega(*l.sys, order, omegas, l.cfg.simulation.x0, opt);
  write_file(c.out, csv_string([&](std::ostream& os) {
               os << "omega,epsilon,d_sup,d_rms\n";
               for (const auto& p : res.points)
                 os << format_double(p.omega) << ',' << format_double(p.epsilon) << ',' << format_double(p.d_sup)
                    << ',' << format_double(p.d_rms) << '\n';
             }));
  ordered_json j;
  j["system"] = l.cfg.system.name;
  j["order"] = order;
  j["points"] = ordered_json::array();
  for (const auto& p : res.points)
    j["points"].push_back({{"omega", p.omega},
                           {"epsilon", num(p.epsilon)},
                           {"d_sup", num(p.d_sup)},
                           {"d_rms", num(p.d_rms)},
                           {"ok", p.ok},
                           {"error", p.error}});
  j["slope"] = num(res.slope);
  j["slope_lo"] = num(res.slope_lo);
  j["slope_hi"] = num(res.slope_hi);
  j["fit_points"] = res.fit_points;
  j["strictly_decreasing"] = res.strictly_decreasing;
  add_meta(j, c);
  write_file(summary.empty() ? summary_path(c.out) : summary, dump(j));
  return kOk;
}

int cmd_efforts(const Common& c, bool full_state) {
  Loaded l = load(c);
  const auto& sim = l.cfg.simulation;
  Trajectory tr = simulate_original(*l.sys, sim.x0, sim.t_final, sim.dt);
  Efforts e = efforts(tr, full_state || sim.full_state_effort);
  write_file(c.out, csv_string([&](std::ostream& os) {
               os << "t,control_effort,state_effort\n";
               for (std::size_t i = 0; i < e.t.size(); ++i)
                 os << format_double(e.t[i]) << ',' << format_double(e.control[i]) << ','
                    << format_double(e.state[i]) << '\n';
             }));
  if (tr.diverged) throw Diverged("trajectory diverged at t = " + format_double(tr.divergence_time));
  return kOk;
}

void error_json(std::ostream& err, const std::string& kind, const std::string& msg) {
  err << dump(ordered_json{{"error", kind}, {"message", msg}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order Lie bracket averaging of control-affine systems", "lieavg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string preset_name, emit;
  auto* preset = app.add_subcommand("preset", "write a built-in example as a JSON config");
  preset->add_option("--name", preset_name, "preset name")->required();
  preset->add_option("--emit-config,--out", emit, "config output path")->required();

  Common c;
  int order = 2;
  auto* validate_cmd = app.add_subcommand("validate", "check smoothness and waveform assumptions");
  add_common(validate_cmd, c, false);

  auto* coeffs = app.add_subcommand("coeffs", "coefficient table as CSV");
  add_common(coeffs, c, true);
  coeffs->add_option("--order", order, "truncation order r")->check(CLI::Range(1, 4));

  bool asymptote = false, no_prune = false;
  auto* assemble_cmd = app.add_subcommand("assemble", "averaged system terms as JSON");
  add_common(assemble_cmd, c, true);
  assemble_cmd->add_option("--order", order, "truncation order r")->check(CLI::Range(1, 4));
  assemble_cmd->add_flag("--asymptote", asymptote, "omega -> infinity limit");
  assemble_cmd->add_flag("--no-prune", no_prune, "keep identically vanishing brackets");

  std::string model = "original";
  auto* simulate = app.add_subcommand("simulate", "trajectory CSV");
  add_common(simulate, c, true);
  simulate->add_option("--model", model, "original or lbs:R");

  std::string summary;
  auto* compare = app.add_subcommand("compare", "distance between original and averaged trajectories");
  add_common(compare, c, true);
  compare->add_option("--order", order, "truncation order r")->check(CLI::Range(1, 4));
  compare->add_option("--summary", summary, "summary JSON path (default: --out with .json)");

  auto* check = app.add_subcommand("check", "design conditions as JSON");
  add_common(check, c, true);
  check->add_option("--order", order, "truncation order r")->check(CLI::Range(1, 4));

  std::vector<double> omegas;
  int threads = 0;
  auto* sweep = app.add_subcommand("sweep", "distance versus omega");
  add_common(sweep, c, true);
  sweep->add_option("--order", order, "truncation order r")->check(CLI::Range(1, 4));
  sweep->add_option("--omegas", omegas, "comma-separated omega values")->delimiter(',')->required();
  sweep->add_option("--summary", summary, "summary JSON path (default: --out with .json)");
  sweep->add_option("--threads", threads, "worker threads (0: LIEAVG_THREADS or all cores)");

  bool full_state = false;
  auto* efforts_cmd = app.add_subcommand("efforts", "cumulative control and state effort CSV");
  add_common(efforts_cmd, c, true);
  efforts_cmd->add_flag("--full-state", full_state, "state effort over |x|^2");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    error_json(err, "usage", e.what());
    return kConfigError;
  }

  try {
    if (preset->parsed()) {
      save_config(build_preset(preset_name).config, emit);
      return kOk;
    }
    if (validate_cmd->parsed()) return cmd_validate(c, err);
    if (coeffs->parsed()) return cmd_coeffs(c, order);
    if (assemble_cmd->parsed()) return cmd_assemble(c, order, asymptote, no_prune);
    if (simulate->parsed()) return cmd_simulate(c, model);
    if (compare->parsed()) return cmd_compare(c, order, summary);
    if (check->parsed()) return cmd_check(c, order);
    if (sweep->parsed()) return cmd_sweep(c, order, omegas, summary, threads);
    if (efforts_cmd->parsed()) return cmd_efforts(c, full_state);
  } catch (const ValidationFailed& e) {
    err << dump(e.report);
    return kConfigError;
  } catch (const Diverged& e) {
    error_json(err, "diverged", e.what());
    return kDiverged;
  } catch (const std::exception& e) {
    error_json(err, "config", e.what());
    return kConfigError;
  }
  return kConfigError;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace lieavg::cli
