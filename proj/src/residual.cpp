#include "dirwave/residual.hpp"

#include "dirwave/error.hpp"
#include "dirwave/numeric.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dirwave {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

dirac::Spinor combine(const WaveState &state, const FieldPoint &pt,
                      const dirac::Spinor &psi,
                      const std::array<dirac::Spinor, 4> &grad,
                      const ConventionSpec &conv) {
  const auto A = vector_potential(state.params, pt);
  dirac::Spinor space = dirac::Spinor::Zero();
  dirac::Spinor coupling = dirac::Spinor::Zero();
  for (int j = 0; j < 3; ++j) {
    space += dirac::alpha(j) * grad[j + 1];
    coupling += A[j] * (dirac::alpha(j) * psi);
  }
  return double(conv.time) * (-I * grad[0]) + double(conv.space) * (-I * space) +
         double(conv.coupling) * (-coupling) + double(conv.mass) * (dirac::beta() * psi);
}

std::array<dirac::Spinor, 4> fd_gradient(const WaveState &state, const FieldPoint &pt,
                                         double step) {
  std::array<dirac::Spinor, 4> g;
  for (int mu = 0; mu < 4; ++mu) {
    FieldPoint a = pt, b = pt;
    double *pa = mu == 0 ? &a.t : mu == 1 ? &a.x : mu == 2 ? &a.y : &a.z;
    double *pb = mu == 0 ? &b.t : mu == 1 ? &b.x : mu == 2 ? &b.y : &b.z;
    *pa += step;
    *pb -= step;
    g[mu] = (evaluate_psi(state, a).value - evaluate_psi(state, b).value) / (2.0 * step);
  }
  return g;
}

double residual_norm(const WaveState &state, const std::vector<FieldPoint> &pts,
                     const ConventionSpec &conv, bool fd, double step) {
  std::vector<double> num(pts.size()), den(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto ev = evaluate_psi(state, pts[i], !fd);
    const auto grad = fd ? fd_gradient(state, pts[i], step) : ev.gradient;
    num[i] = combine(state, pts[i], ev.value, grad, conv).squaredNorm();
    den[i] = ev.value.squaredNorm();
  }
  return std::sqrt(pairwise_sum(num) / pairwise_sum(den));
}

} // namespace

int ConventionSpec::index() const {
  return (time < 0 ? 8 : 0) | (space < 0 ? 4 : 0) | (coupling < 0 ? 2 : 0) |
         (mass < 0 ? 1 : 0);
}

ConventionSpec ConventionSpec::from_index(int i) {
  if (i < 0 || i > 15)
    throw Error(ErrorCode::invalid_argument, "convention index must be 0..15");
  return {(i & 8) ? -1 : 1, (i & 4) ? -1 : 1, (i & 2) ? -1 : 1, (i & 1) ? -1 : 1};
}

std::string ConventionSpec::label() const {
  auto s = [](int v) { return v > 0 ? '+' : '-'; };
  return std::string{s(time), s(space), s(coupling), s(mass)};
}

std::vector<FieldPoint> SampleGrid::points(const WaveState &state) const {
  if (nx < 1 || ny < 1 || nt < 1 || nz < 1)
    throw Error(ErrorCode::invalid_argument, "sample grid: counts must be positive");
  const double om = state.params.omega;
  const double w = state.envelope.width();
  const double yc = state.envelope.center();
  const double period = 2.0 * std::numbers::pi / om;
  auto lin = [this](int i, int n) {
    return n == 1 ? 0.0 : -span + 2.0 * span * i / (n - 1);
  };
  std::vector<FieldPoint> out;
  out.reserve(std::size_t(nx) * ny * nt * nz);
  for (int it = 0; it < nt; ++it)
    for (int iz = 0; iz < nz; ++iz)
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy) {
          const double t = t0 + period * it / nt;
          const double z = z0 + period * iz / nz;
          out.push_back(from_rotated(w * lin(ix, nx), yc + w * lin(iy, ny), t, z, om));
        }
  return out;
}

dirac::Spinor apply_operator(const WaveState &state, const FieldPoint &pt,
                             const ConventionSpec &conv) {
  const auto ev = evaluate_psi(state, pt, true);
  return combine(state, pt, ev.value, ev.gradient, conv);
}

ResidualReport dirac_residual(const WaveState &state, const SampleGrid &grid,
                              const ResidualOptions &opts) {
  ResidualReport rep;
  rep.mode = opts.mode;
  rep.convention = opts.convention;
  rep.points = grid.points(state);
  if (grid.span > 6.0)
    rep.warnings.push_back("grid extends beyond 6 envelope widths; residual dominated by underflow noise");

  const bool fd = opts.mode == DerivativeMode::finite_difference;
  if (fd) {
    rep.step = opts.fd_step * state.envelope.width();
    const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());
    double scale = 1.0;
    for (const auto &p : rep.points)
      scale = std::max({scale, std::abs(p.t), std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    if (rep.step < cbrt_eps * scale)
      rep.warnings.push_back("finite-difference step below cancellation guard");
  }

  std::vector<double> num, den;
  for (const auto &pt : rep.points) {
    const auto ev = evaluate_psi(state, pt, !fd);
    const auto grad = fd ? fd_gradient(state, pt, rep.step) : ev.gradient;
    const auto r = combine(state, pt, ev.value, grad, opts.convention);
    rep.residuals.push_back(r);
    const double rn = r.squaredNorm(), pn = ev.value.squaredNorm();
    num.push_back(rn);
    den.push_back(pn);
    rep.point_relative.push_back(pn > 0.0 ? std::sqrt(rn / pn) : 0.0);
  }
  rep.relative_residual = std::sqrt(pairwise_sum(num) / pairwise_sum(den));
  if (fd)
    rep.convergence_ratio =
        rep.relative_residual /
        residual_norm(state, rep.points, opts.convention, true, 0.5 * rep.step);
  return rep;
}

FdConvergence fd_convergence(const WaveState &state, const SampleGrid &grid,
                             double step, const ConventionSpec &conv) {
  const auto pts = grid.points(state);
  const double abs_step = step * state.envelope.width();
  FdConvergence c{};
  c.coarse = residual_norm(state, pts, conv, true, abs_step);
  c.fine = residual_norm(state, pts, conv, true, 0.5 * abs_step);
  c.ratio = c.coarse / c.fine;
  c.order = std::log2(c.ratio);
  return c;
}

bool AuditTable::unique() const {
  if (classes.empty() || passing_classes != 1)
    return false;
  for (std::size_t i = 1; i < classes.size(); ++i)
    if (!(classes[i].residual > fail_threshold))
      return false;
  return true;
}

std::string AuditTable::to_csv() const {
  std::ostringstream os;
  os << "time,space,coupling,mass,residual_norm\n";
  for (const auto &r : rows)
    os << r.convention.time << ',' << r.convention.space << ',' << r.convention.coupling
       << ',' << r.convention.mass << ',' << format_double(r.residual) << '\n';
  return os.str();
}

AuditTable convention_audit(const WaveState &state, const SampleGrid &grid) {
  const auto pts = grid.points(state);
  AuditTable t;
  for (int i = 0; i < 16; ++i) {
    const auto conv = ConventionSpec::from_index(i);
    t.rows.push_back({conv, residual_norm(state, pts, conv, false, 0.0)});
  }
  auto by_residual = [](const AuditRow &a, const AuditRow &b) {
    if (a.residual != b.residual)
      return a.residual < b.residual;
    return a.convention.index() < b.convention.index();
  };
  for (const auto &r : t.rows)
    if (r.convention.time > 0) {
      const auto &neg = t.rows[r.convention.negated().index()];
      t.classes.push_back({r.convention, std::max(r.residual, neg.residual)});
    }
  std::sort(t.rows.begin(), t.rows.end(), by_residual);
  std::sort(t.classes.begin(), t.classes.end(), by_residual);
  for (const auto &c : t.classes)
    if (c.residual < t.pass_threshold)
      ++t.passing_classes;
  if (t.passing_classes == 0)
    throw Error(ErrorCode::no_convention,
                "convention audit: no sign convention annihilates the state (assembly bug)");
  t.winner = t.classes.front().convention;
  return t;
}

void to_json(nlohmann::json &j, const ResidualReport &r) {
  auto max_point = r.point_relative.empty()
                       ? 0.0
                       : *std::max_element(r.point_relative.begin(), r.point_relative.end());
  j = nlohmann::json{
      {"mode", r.mode == DerivativeMode::analytic ? "analytic" : "finite-difference"},
      {"convention", r.convention.label()},
      {"points", r.points.size()},
      {"relative_residual", r.relative_residual},
      {"max_point_relative", max_point},
      {"step", r.step},
      {"warnings", r.warnings},
  };
  if (r.convergence_ratio)
    j["convergence_ratio"] = *r.convergence_ratio;
}

void to_json(nlohmann::json &j, const AuditTable &t) {
  auto rows = nlohmann::json::array();
  for (const auto &r : t.rows)
    rows.push_back({{"convention", r.convention.label()},
                    {"time", r.convention.time},
                    {"space", r.convention.space},
                    {"coupling", r.convention.coupling},
                    {"mass", r.convention.mass},
                    {"residual", r.residual}});
  auto classes = nlohmann::json::array();
  for (const auto &c : t.classes)
    classes.push_back({{"convention", c.convention.label()}, {"residual", c.residual}});
  j = nlohmann::json{{"rows", rows},
                     {"classes", classes},
                     {"winner", t.winner.label()},
                     {"passing_classes", t.passing_classes},
                     {"unique", t.unique()}};
}

} // namespace dirwave
