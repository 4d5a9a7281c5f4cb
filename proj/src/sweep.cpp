#include "dirwave/sweep.hpp"

#include "dirwave/error.hpp"
#include "dirwave/numeric.hpp"
#include "dirwave/observables.hpp"
#include "dirwave/residual.hpp"
#include "dirwave/wavefunction.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

namespace dirwave {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    out.push_back(trim(item));
  return out;
}

double to_double(const std::string &key, const std::string &v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size())
      return x;
  } catch (const std::exception &) {
  }
  throw Error(ErrorCode::invalid_argument, "config key '" + key + "': '" + v + "' is not a number");
}

int to_int(const std::string &key, const std::string &v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    throw Error(ErrorCode::invalid_argument, "config key '" + key + "': expected an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string &key, const std::string &v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on")
    return true;
  if (v == "0" || v == "false" || v == "no" || v == "off")
    return false;
  throw Error(ErrorCode::invalid_argument, "config key '" + key + "': expected a boolean");
}

std::vector<double> to_list(const std::string &key, const std::string &v) {
  std::vector<double> out;
  for (const auto &item : split(v, ','))
    if (!item.empty())
      out.push_back(to_double(key, item));
  return out;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

SweepRow closed_form_columns(SweepRow row) {
  const auto t = ClosedFormTargets::for_g(row.g);
  row.diameter_closed = t.diameter_wavelengths;
  row.energy_closed = t.energy;
  row.pz_closed = t.longitudinal_momentum;
  row.momentum_closed = t.transverse_momentum;
  row.spin_closed = t.spin_amplitude;
  row.ratio_closed = t.ratio;
  return row;
}

std::vector<SweepRow> sweep_point(const SweepConfig &cfg, double omega, double e0) {
  std::vector<SweepRow> rows;
  SweepRow base;
  base.e0 = e0;
  base.g = g_from_e0(e0);
  base = closed_form_columns(base);

  std::array<SolutionBranch, 3> roots{};
  NormalizedParams params;
  try {
    params = NormalizedParams::from_e0(e0, cfg.h, omega);
    roots = solve_and_classify(CharacteristicProblem::singular(cfg.h, e0, omega));
    for (int i = 0; i < 3; ++i)
      base.roots[i] = roots[i].energy;
  } catch (const Error &e) {
    for (Branch b : cfg.branches)
      for (double ph : cfg.phases) {
        SweepRow r = base;
        r.branch = b;
        r.phase = ph;
        r.error_code = static_cast<int>(e.code());
        r.error = e.what();
        rows.push_back(r);
      }
    return rows;
  }

  for (Branch b : cfg.branches) {
    const auto it = std::find_if(roots.begin(), roots.end(),
                                 [b](const SolutionBranch &r) { return r.label == b; });
    for (double ph : cfg.phases) {
      SweepRow r = base;
      r.branch = b;
      r.phase = ph;
      if (it == roots.end()) {
        r.error_code = static_cast<int>(ErrorCode::invalid_argument);
        r.error = "no root labelled " + std::string(branch_name(b));
        rows.push_back(r);
        continue;
      }
      try {
        r.p = it->p;
        r.lab_energy = it->lab_energy;
        const auto state = assemble_state(params, *it);
        r.d = state.envelope.d;
        r.d2 = state.envelope.d2;
        r.residual = dirac_residual(state, SampleGrid{}).relative_residual;
        if (cfg.desk_scale) {
          QuadratureSpec q;
          q.order = cfg.quad_order;
          q.check_convergence = false;
          const auto loc = localization_report(state, q);
          const auto dyn = dynamical_expectations(state, ph, q);
          r.source = "quadrature";
          r.diameter = loc.diameter_wavelengths;
          r.energy = dyn.energy_time;
          r.pz = dyn.momentum_canonical[2];
          r.transverse_momentum = dyn.transverse_canonical();
          r.spin_amplitude = dyn.spin_amplitude();
          r.ratio = spin_momentum_ratio(dyn, r.g).value;
        } else {
          r.source = "closed-form";
          r.diameter = r.diameter_closed;
          r.energy = r.energy_closed;
          r.pz = r.pz_closed;
          r.transverse_momentum = r.momentum_closed;
          r.spin_amplitude = r.spin_closed;
          r.ratio = r.ratio_closed;
        }
      } catch (const Error &e) {
        r.error_code = static_cast<int>(e.code());
        r.error = e.what();
      }
      rows.push_back(r);
    }
  }
  return rows;
}

} // namespace

void SweepConfig::set(const std::string &raw_key, const std::string &raw_value) {
  const auto key = trim(raw_key);
  const auto v = trim(raw_value);
  if (key == "e0_values") {
    e0_grid = to_list(key, v);
  } else if (key == "g_values") {
    e0_grid.clear();
    for (double g : to_list(key, v)) {
      if (!(g > 0.0))
        throw Error(ErrorCode::invalid_argument, "config g_values: g must be positive");
      e0_grid.push_back(e0_from_g(g));
    }
  } else if (key == "e0_min") {
    e0_min_ = to_double(key, v);
  } else if (key == "e0_max") {
    e0_max_ = to_double(key, v);
  } else if (key == "points") {
    points_ = to_int(key, v);
  } else if (key == "h") {
    h = to_double(key, v);
  } else if (key == "wavelength") {
    wavelength = to_double(key, v);
  } else if (key == "omega") {
    omega = to_double(key, v);
  } else if (key == "desk_scale") {
    desk_scale = to_bool(key, v);
  } else if (key == "branch") {
    branches.clear();
    if (v == "all") {
      branches = {Branch::singular_plus, Branch::singular_minus, Branch::regular};
    } else {
      for (const auto &b : split(v, ','))
        branches.push_back(parse_branch(b));
    }
  } else if (key == "phases") {
    phases = to_list(key, v);
  } else if (key == "quad_order") {
    quad_order = to_int(key, v);
  } else if (key == "threads") {
    threads = to_int(key, v);
  } else if (key == "constants") {
    constants_path = v;
  } else if (key == "csv") {
    csv_path = v;
  } else if (key == "json") {
    json_path = v;
  } else {
    throw Error(ErrorCode::invalid_argument, "config: unknown key '" + key + "'");
  }
}

void SweepConfig::read(std::istream &in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::invalid_argument,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void SweepConfig::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io, "cannot open config file " + path);
  read(in);
}

void SweepConfig::finalize() {
  if (points_ > 0) {
    if (points_ < 2 && e0_min_ != e0_max_)
      throw Error(ErrorCode::invalid_argument, "config: points must be >= 2 for a range");
    e0_grid.clear();
    for (int i = 0; i < points_; ++i)
      e0_grid.push_back(points_ == 1 ? e0_min_
                                     : e0_min_ + (e0_max_ - e0_min_) * i / (points_ - 1));
    points_ = 0;
  }
  if (e0_grid.empty())
    throw Error(ErrorCode::invalid_argument, "config: empty E0 grid");
  for (double e0 : e0_grid)
    if (!(e0 > 0.0) || !std::isfinite(e0))
      throw Error(ErrorCode::invalid_argument, "config: every E0 must be positive");
  if (e0_grid.size() > 1) {
    const bool up = e0_grid[1] > e0_grid[0];
    for (std::size_t i = 1; i < e0_grid.size(); ++i)
      if (up ? !(e0_grid[i] > e0_grid[i - 1]) : !(e0_grid[i] < e0_grid[i - 1]))
        throw Error(ErrorCode::invalid_argument, "config: E0 grid must be strictly monotonic");
  }
  if (!(h >= 0.0))
    throw Error(ErrorCode::invalid_argument, "config: h must be non-negative");
  if (!(wavelength > 0.0))
    throw Error(ErrorCode::invalid_argument, "config: wavelength must be positive");
  if (desk_scale && !(omega > 0.0))
    throw Error(ErrorCode::invalid_argument, "config: omega must be positive");
  if (branches.empty())
    throw Error(ErrorCode::invalid_argument, "config: no branch selected");
  if (phases.empty())
    throw Error(ErrorCode::invalid_argument, "config: no phase selected");
  if (quad_order < 32)
    throw Error(ErrorCode::invalid_argument, "config: quad_order must be >= 32");
  if (threads < 1)
    throw Error(ErrorCode::invalid_argument, "config: threads must be >= 1");
}

double SweepConfig::effective_omega(const UnitsContext &ctx) const {
  return desk_scale ? omega : ctx.omega();
}

std::string sweep_csv_header() {
  return "e0,g,root_lo,root_mid,root_hi,branch,phase,p,lab_energy,d,d2,residual,"
         "diameter,energy,pz,transverse_momentum,spin_amplitude,ratio,source,"
         "diameter_closed,energy_closed,pz_closed,momentum_closed,spin_closed,ratio_closed,"
         "delta_diameter,delta_energy,delta_pz,delta_momentum,delta_spin,delta_ratio,"
         "error_code,error";
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  os << sweep_csv_header() << '\n';
  auto f = [](double v) { return format_double(v); };
  for (const auto &r : rows) {
    const bool ok = r.error_code == 0;
    auto m = [&](double v) { return ok ? f(v) : std::string(); };
    auto delta = [&](double a, double b) { return ok ? f(a - b) : std::string(); };
    os << f(r.e0) << ',' << f(r.g) << ',' << f(r.roots[0]) << ',' << f(r.roots[1]) << ','
       << f(r.roots[2]) << ',' << branch_name(r.branch) << ',' << f(r.phase) << ','
       << m(r.p) << ',' << m(r.lab_energy) << ',' << m(r.d) << ',' << m(r.d2) << ','
       << m(r.residual) << ',' << m(r.diameter) << ',' << m(r.energy) << ',' << m(r.pz) << ','
       << m(r.transverse_momentum) << ',' << m(r.spin_amplitude) << ',' << m(r.ratio) << ','
       << r.source << ',' << f(r.diameter_closed) << ',' << f(r.energy_closed) << ','
       << f(r.pz_closed) << ',' << f(r.momentum_closed) << ',' << f(r.spin_closed) << ','
       << f(r.ratio_closed) << ',' << delta(r.diameter, r.diameter_closed) << ','
       << delta(r.energy, r.energy_closed) << ',' << delta(r.pz, r.pz_closed) << ','
       << delta(r.transverse_momentum, r.momentum_closed) << ','
       << delta(r.spin_amplitude, r.spin_closed) << ',' << delta(r.ratio, r.ratio_closed)
       << ',' << r.error_code << ',' << csv_safe(r.error) << '\n';
  }
  return os.str();
}

std::string SweepResult::summary_json(const SweepConfig &cfg) const {
  nlohmann::json branches = nlohmann::json::array();
  for (Branch b : cfg.branches)
    branches.push_back(branch_name(b));
  double max_residual = 0.0;
  for (const auto &r : rows)
    if (r.error_code == 0)
      max_residual = std::max(max_residual, r.residual);
  nlohmann::json j{
      {"schema_version", 1},
      {"rows", rows.size()},
      {"grid_points", cfg.e0_grid.size()},
      {"failures", failures},
      {"max_residual", max_residual},
      {"config",
       {{"e0_grid", cfg.e0_grid},
        {"h", cfg.h},
        {"wavelength", cfg.wavelength},
        {"omega", cfg.omega},
        {"desk_scale", cfg.desk_scale},
        {"branches", branches},
        {"phases", cfg.phases},
        {"quad_order", cfg.quad_order}}},
      {"columns", split(sweep_csv_header(), ',')},
  };
  return j.dump(2);
}

SweepResult run_sweep(const SweepConfig &cfg_in) {
  SweepConfig cfg = cfg_in;
  cfg.finalize();
  const auto k = cfg.constants_path.empty()
                     ? codata2018_electron()
                     : load_constants(cfg.constants_path, codata2018_electron());
  const auto ctx = UnitsContext::from_wavelength(cfg.wavelength, k);
  const double omega = cfg.effective_omega(ctx);

  const std::size_t n = cfg.e0_grid.size();
  std::vector<std::vector<SweepRow>> per_point(n);
  const int workers = std::min<int>(cfg.threads, static_cast<int>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      per_point[i] = sweep_point(cfg, omega, cfg.e0_grid[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++)
          per_point[i] = sweep_point(cfg, omega, cfg.e0_grid[i]);
      });
  }

  SweepResult res;
  for (auto &rows : per_point)
    for (auto &r : rows) {
      if (r.error_code != 0)
        ++res.failures;
      res.rows.push_back(std::move(r));
    }
  return res;
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw Error(ErrorCode::invalid_argument, "monotone cubic: need >= 2 matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw Error(ErrorCode::invalid_argument, "monotone cubic: x must increase strictly");
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  m_.assign(n, 0.0);
  if (n == 2) {
    m_[0] = m_[1] = delta[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0)
      continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    m_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  // Shape-preserving three-point end slopes.
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0)
      m = 0.0;
    else if (d0 * d1 <= 0.0 && std::abs(m) > std::abs(3.0 * d0))
      m = 3.0 * d0;
    return m;
  };
  m_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  m_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

double MonotoneCubic::eval(std::size_t k, double x) const {
  const double hk = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / hk;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[k] + (t3 - 2 * t2 + t) * hk * m_[k] +
         (-2 * t3 + 3 * t2) * y_[k + 1] + (t3 - t2) * hk * m_[k + 1];
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front())
    return eval(0, x);
  if (x >= x_.back())
    return eval(x_.size() - 2, x);
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return eval(static_cast<std::size_t>(it - x_.begin()) - 1, x);
}

double MonotoneCubic::invert_in_segment(std::size_t k, double y) const {
  double lo = x_[k], hi = x_[k + 1];
  const bool increasing = y_[k + 1] > y_[k];
  // Monotone on the segment, so bisection converges to the unique crossing.
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = eval(k, mid);
    if ((f < y) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

GEstimate extract_g(const std::string &csv, const std::string &column, double observed,
                    const std::string &branch) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line))
    throw Error(ErrorCode::invalid_argument, "extract_g: empty CSV");
  const auto header = split(line, ',');
  auto col_index = [&](const std::string &name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw Error(ErrorCode::invalid_argument, "extract_g: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto gi = col_index("g");
  const auto ci = col_index(column);
  const auto bi = col_index("branch");

  struct Sample {
    double g, y;
    std::size_t row;
  };
  std::vector<Sample> samples;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty())
      continue;
    const auto cells = split(line, ',');
    if (cells.size() > std::max({gi, ci, bi}) && cells[bi] == branch && !cells[ci].empty())
      samples.push_back({to_double("g", cells[gi]), to_double(column, cells[ci]), row});
    ++row;
  }
  if (samples.size() < 2)
    throw Error(ErrorCode::invalid_argument,
                "extract_g: fewer than two usable rows for branch " + branch);
  std::sort(samples.begin(), samples.end(),
            [](const Sample &a, const Sample &b) { return a.g < b.g; });

  std::vector<double> gs, ys;
  for (const auto &s : samples) {
    gs.push_back(s.g);
    ys.push_back(s.y);
  }
  const bool increasing = ys[1] > ys[0];
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (increasing ? !(ys[i] > ys[i - 1]) : !(ys[i] < ys[i - 1]))
      throw Error(ErrorCode::non_monotone,
                  "extract_g: column '" + column + "' is not strictly monotone in g");
  const double ymin = std::min(ys.front(), ys.back());
  const double ymax = std::max(ys.front(), ys.back());
  if (!(observed >= ymin && observed <= ymax))
    throw Error(ErrorCode::out_of_range,
                "extract_g: observed value outside the sweep range of '" + column +
                    "'; refusing to extrapolate");

  const MonotoneCubic spline(gs, ys);
  std::size_t k = 0;
  while (k + 2 < ys.size() &&
         !((observed >= std::min(ys[k], ys[k + 1])) && (observed <= std::max(ys[k], ys[k + 1]))))
    ++k;
  GEstimate est;
  est.g = spline.invert_in_segment(k, observed);
  est.lower_row = samples[k].row;
  est.upper_row = samples[k + 1].row;
  est.lower_g = gs[k];
  est.upper_g = gs[k + 1];
  est.note = "monotone cubic inverse interpolation between g = " + format_double(gs[k]) +
             " and g = " + format_double(gs[k + 1]);
  return est;
}

} // namespace dirwave
