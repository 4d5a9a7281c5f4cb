// dirwave command-line front end. Talks to the library through the C API only.
#include "dirwave/dirwave.h"

#include "CLI11.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum Exit { ok = 0, config_error = 1, point_failures = 2 };

struct Failure {
  dw_status status;
  std::string message;
};

void check(dw_status s, const char *what) {
  if (s != DW_OK)
    throw Failure{s, std::string(what) + ": " + dw_last_error()};
}

// Owning wrapper for library-allocated strings.
struct LibString {
  char *p = nullptr;
  ~LibString() { dw_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
  dw_sweep_config *c = nullptr;
  ConfigHandle() { check(dw_sweep_config_create(&c), "config"); }
  ~ConfigHandle() { dw_sweep_config_free(c); }
  void set(const std::string &k, const std::string &v) {
    check(dw_sweep_config_set(c, k.c_str(), v.c_str()), "config");
  }
};

struct StateHandle {
  dw_state *s = nullptr;
  ~StateHandle() { dw_state_free(s); }
};

struct UnitsHandle {
  dw_units *u = nullptr;
  ~UnitsHandle() { dw_units_free(u); }
};

// Shortest round-trip form.
std::string num(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

struct Globals {
  std::string config;
  std::string out;
  std::string format = "json";
  bool desk_scale = false;
  bool format_given = false;
};

// Point selection shared by the single-point commands; flags override the config file.
struct PointArgs {
  std::optional<double> e0, g, h, omega, wavelength, phase;
  std::optional<std::string> branch, constants;
  std::optional<int> order;

  void add(CLI::App *cmd) {
    cmd->add_option("--e0", e0, "E0 = 2 / g");
    cmd->add_option("--g", g, "g-factor (alternative to --e0)");
    cmd->add_option("--amplitude", h, "normalized wave amplitude h");
    cmd->add_option("--omega", omega, "normalized frequency (desk scale)");
    cmd->add_option("--wavelength", wavelength, "wavelength in cm (physical scale)");
    cmd->add_option("--branch", branch, "singular-plus | singular-minus | regular");
    cmd->add_option("--phase", phase, "phase Omega (t - z)");
    cmd->add_option("--order", order, "Gauss-Hermite order");
    cmd->add_option("--constants", constants, "constants override file");
  }

  void apply(ConfigHandle &cfg) const {
    if (e0)
      cfg.set("e0_values", num(*e0));
    if (g)
      cfg.set("g_values", num(*g));
    if (h)
      cfg.set("h", num(*h));
    if (omega)
      cfg.set("omega", num(*omega));
    if (wavelength)
      cfg.set("wavelength", num(*wavelength));
    if (branch)
      cfg.set("branch", *branch);
    if (phase)
      cfg.set("phases", num(*phase));
    if (order)
      cfg.set("quad_order", std::to_string(*order));
    if (constants)
      cfg.set("constants", *constants);
  }
};

struct Point {
  dw_params params{};
  int branch = DW_BRANCH_SINGULAR_PLUS;
  double phase = 0.0;
  int order = 48;
};

void load_config(ConfigHandle &cfg, const Globals &g) {
  if (!g.config.empty())
    check(dw_sweep_config_load(cfg.c, g.config.c_str()), "config");
  if (g.desk_scale)
    cfg.set("desk_scale", "1");
}

Point resolve_point(const Globals &g, const PointArgs &a) {
  ConfigHandle cfg;
  load_config(cfg, g);
  a.apply(cfg);
  Point p;
  check(dw_sweep_config_point(cfg.c, 0, &p.params, &p.branch, &p.phase, &p.order), "config");
  return p;
}

void emit(const Globals &g, const std::string &text) {
  if (g.out.empty() || g.out == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n')
      std::cout << '\n';
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f)
    throw Failure{DW_ERR_IO, "cannot write " + g.out};
  f << text;
  if (!text.empty() && text.back() != '\n')
    f << '\n';
}

std::string params_json(const dw_params &p) {
  std::ostringstream o;
  o << "{\"omega\": " << num(p.omega) << ", \"h\": " << num(p.h) << ", \"hz\": " << num(p.hz)
    << ", \"e0\": " << num(p.e0) << "}";
  return o.str();
}

int cmd_solve(const Globals &g, const PointArgs &a, std::optional<double> p_override) {
  const auto pt = resolve_point(g, a);
  double p = 0.0;
  check(dw_singular_momentum(pt.params.e0, pt.params.omega, &p), "solve");
  if (p_override)
    p = *p_override;
  dw_root roots[3];
  check(dw_solve(pt.params.h, pt.params.e0, p, pt.params.omega, roots), "solve");
  std::ostringstream o;
  if (g.format == "csv") {
    o << "index,energy,offset,p,lab_energy,residual,branch,converged\n";
    for (int i = 0; i < 3; ++i)
      o << i << ',' << num(roots[i].energy) << ',' << num(roots[i].offset) << ','
        << num(roots[i].p) << ',' << num(roots[i].lab_energy) << ',' << num(roots[i].residual)
        << ',' << dw_branch_name(roots[i].branch) << ',' << roots[i].converged << '\n';
  } else {
    o << "{\n  \"params\": " << params_json(pt.params) << ",\n  \"p\": " << num(p)
      << ",\n  \"roots\": [\n";
    for (int i = 0; i < 3; ++i)
      o << "    {\"energy\": " << num(roots[i].energy) << ", \"offset\": "
        << num(roots[i].offset) << ", \"lab_energy\": " << num(roots[i].lab_energy)
        << ", \"residual\": " << num(roots[i].residual) << ", \"branch\": \""
        << dw_branch_name(roots[i].branch) << "\", \"converged\": "
        << (roots[i].converged ? "true" : "false") << "}" << (i < 2 ? ",\n" : "\n");
    o << "  ]\n}\n";
  }
  emit(g, o.str());
  return ok;
}

void make_state(const Point &pt, StateHandle &st) {
  check(dw_state_create(&pt.params, pt.branch, &st.s), "state");
}

int cmd_wavefunction(const Globals &g, const PointArgs &a, const std::vector<double> &at) {
  const auto pt = resolve_point(g, a);
  StateHandle st;
  make_state(pt, st);
  LibString js;
  check(dw_state_to_json(st.s, &js.p), "wavefunction");
  std::string text = js.str();
  if (!at.empty()) {
    if (at.size() != 4)
      throw Failure{DW_ERR_INVALID_ARGUMENT, "--at expects t,x,y,z"};
    double v[8];
    check(dw_state_evaluate(st.s, at[0], at[1], at[2], at[3], 0, v, 8), "evaluate");
    std::ostringstream o;
    o << "{\n\"state\": " << text << ",\n\"point\": [" << num(at[0]) << ", " << num(at[1])
      << ", " << num(at[2]) << ", " << num(at[3]) << "],\n\"psi\": [";
    for (int k = 0; k < 4; ++k)
      o << "[" << num(v[2 * k]) << ", " << num(v[2 * k + 1]) << "]" << (k < 3 ? ", " : "");
    o << "]\n}\n";
    text = o.str();
  }
  emit(g, text);
  return ok;
}

int cmd_residual(const Globals &g, const PointArgs &a, const std::string &mode, double step,
                 const std::string &signs) {
  const auto pt = resolve_point(g, a);
  StateHandle st;
  make_state(pt, st);
  int sg[4] = {1, 1, 1, 1};
  const int *sp = nullptr;
  if (!signs.empty()) {
    if (signs.size() != 4)
      throw Failure{DW_ERR_INVALID_ARGUMENT, "--signs expects four of + or -"};
    for (int i = 0; i < 4; ++i) {
      if (signs[i] != '+' && signs[i] != '-')
        throw Failure{DW_ERR_INVALID_ARGUMENT, "--signs expects four of + or -"};
      sg[i] = signs[i] == '+' ? 1 : -1;
    }
    sp = sg;
  }
  dw_residual_result r{};
  LibString js;
  check(dw_residual(st.s, sp, mode == "fd" ? 1 : 0, step, &r, &js.p), "residual");
  if (g.format == "csv") {
    std::ostringstream o;
    o << "relative_residual,convergence_ratio,points\n"
      << num(r.relative_residual) << ',' << num(r.convergence_ratio) << ',' << r.points << '\n';
    emit(g, o.str());
  } else {
    emit(g, js.str());
  }
  return ok;
}

int cmd_audit(const Globals &g, const PointArgs &a) {
  const auto pt = resolve_point(g, a);
  StateHandle st;
  make_state(pt, st);
  int unique = 0;
  LibString js, csv;
  check(dw_convention_audit(st.s, &unique, &js.p, &csv.p), "audit");
  emit(g, g.format == "csv" ? csv.str() : js.str());
  if (!unique)
    std::cerr << "audit: more than one convention class passes\n";
  return ok;
}

int cmd_observe(const Globals &g, const PointArgs &a) {
  const auto pt = resolve_point(g, a);
  StateHandle st;
  make_state(pt, st);
  dw_observables ob{};
  LibString js;
  check(dw_observe(st.s, pt.phase, pt.order, &ob, &js.p), "observe");
  if (g.format == "csv") {
    std::ostringstream o;
    o << "phase,norm,diameter_wavelengths,energy_time,energy_hamiltonian,"
         "px,py,pz,kx,ky,kz,sx,sy,sz\n"
      << num(pt.phase) << ',' << num(ob.norm) << ',' << num(ob.diameter_wavelengths) << ','
      << num(ob.energy_time) << ',' << num(ob.energy_hamiltonian);
    for (double v : ob.momentum_canonical)
      o << ',' << num(v);
    for (double v : ob.momentum_kinetic)
      o << ',' << num(v);
    for (double v : ob.spin)
      o << ',' << num(v);
    o << '\n';
    emit(g, o.str());
  } else {
    emit(g, js.str());
  }
  return ok;
}

int cmd_sweep(Globals g, const PointArgs &a, std::optional<int> threads) {
  ConfigHandle cfg;
  load_config(cfg, g);
  a.apply(cfg);
  if (threads)
    cfg.set("threads", std::to_string(*threads));
  LibString csv_path, json_path;
  check(dw_sweep_config_get(cfg.c, "csv", &csv_path.p), "config");
  check(dw_sweep_config_get(cfg.c, "json", &json_path.p), "config");
  LibString csv, js;
  int failures = 0;
  check(dw_sweep_run(cfg.c, &csv.p, &js.p, &failures), "sweep");

  if (g.out.empty() && !csv_path.str().empty() && g.format == "csv")
    g.out = csv_path.str();
  if (!g.format_given)
    g.format = "csv";
  emit(g, g.format == "json" ? js.str() : csv.str());
  if (!json_path.str().empty()) {
    std::ofstream f(json_path.str(), std::ios::binary);
    if (!f)
      throw Failure{DW_ERR_IO, "cannot write " + json_path.str()};
    f << js.str() << '\n';
  }
  if (failures > 0) {
    std::cerr << "sweep: " << failures << " point(s) failed; see error columns\n";
    return point_failures;
  }
  return ok;
}

int cmd_extract(const Globals &g, const std::string &input, const std::string &column,
                double value, const std::string &branch) {
  std::ifstream f(input, std::ios::binary);
  if (!f)
    throw Failure{DW_ERR_IO, "cannot read " + input};
  std::stringstream buf;
  buf << f.rdbuf();
  dw_g_estimate est{};
  check(dw_extract_g(buf.str().c_str(), column.c_str(), value, branch.c_str(), &est),
        "extract-g");
  std::ostringstream o;
  if (g.format == "csv") {
    o << "g,lower_g,upper_g,lower_row,upper_row\n"
      << num(est.g) << ',' << num(est.lower_g) << ',' << num(est.upper_g) << ','
      << est.lower_row << ',' << est.upper_row << '\n';
  } else {
    o << "{\"column\": \"" << column << "\", \"observed\": " << num(value)
      << ", \"g\": " << num(est.g) << ", \"bracket\": [" << num(est.lower_g) << ", "
      << num(est.upper_g) << "], \"rows\": [" << est.lower_row << ", " << est.upper_row
      << "]}\n";
  }
  emit(g, o.str());
  return ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Localized Dirac states in a rotating field: solve, audit, observe, sweep"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(dw_version()));

  Globals g;
  app.add_option("--config", g.config, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out, "output file (default stdout)");
  auto *fmt = app.add_option("--format", g.format, "csv | json")
                  ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--desk-scale", g.desk_scale, "use the normalized --omega instead of a wavelength");

  PointArgs solve_a, wave_a, res_a, audit_a, obs_a, sweep_a;

  auto *solve = app.add_subcommand("solve", "roots of the characteristic cubic");
  solve_a.add(solve);
  std::optional<double> p_override;
  solve->add_option("--p", p_override, "longitudinal momentum (default: singular pair)");

  auto *wave = app.add_subcommand("wavefunction", "assemble a state; optionally evaluate it");
  wave_a.add(wave);
  std::vector<double> at;
  wave->add_option("--at", at, "t,x,y,z")->delimiter(',');

  auto *res = app.add_subcommand("residual", "Dirac residual on a sample grid");
  res_a.add(res);
  std::string mode = "analytic", signs;
  double step = 0.0;
  res->add_option("--mode", mode, "analytic | fd")->check(CLI::IsMember({"analytic", "fd"}));
  res->add_option("--step", step, "finite-difference step in envelope widths");
  res->add_option("--signs", signs, "time,space,coupling,mass signs, e.g. ++-+");

  auto *audit = app.add_subcommand("audit", "residual under all 16 sign conventions");
  audit_a.add(audit);

  auto *obs = app.add_subcommand("observe", "quadrature expectation values");
  obs_a.add(obs);

  auto *sweep = app.add_subcommand("sweep", "tabulate observables over an E0 grid");
  sweep_a.add(sweep);
  std::optional<int> threads;
  sweep->add_option("--threads", threads, "worker threads");

  auto *extract = app.add_subcommand("extract-g", "invert a sweep column for g");
  std::string input, column, branch = "singular-plus";
  double value = 0.0;
  extract->add_option("--input", input, "sweep CSV")->required()->check(CLI::ExistingFile);
  extract->add_option("--column", column, "observable column")->required();
  extract->add_option("--value", value, "observed value")->required();
  extract->add_option("--branch", branch, "branch label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : config_error;
  }
  g.format_given = fmt->count() > 0;

  try {
    if (*solve)
      return cmd_solve(g, solve_a, p_override);
    if (*wave)
      return cmd_wavefunction(g, wave_a, at);
    if (*res)
      return cmd_residual(g, res_a, mode, step, signs);
    if (*audit)
      return cmd_audit(g, audit_a);
    if (*obs)
      return cmd_observe(g, obs_a);
    if (*sweep)
      return cmd_sweep(g, sweep_a, threads);
    if (*extract)
      return cmd_extract(g, input, column, value, branch);
  } catch (const Failure &f) {
    std::cerr << "dirwave: " << f.message << '\n';
    return config_error;
  }
  return config_error;
}
