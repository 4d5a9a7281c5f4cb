#include "dirwave/observables.hpp"

#include "dirwave/error.hpp"
#include "dirwave/numeric.hpp"
#include "dirwave/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace dirwave {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

struct Node {
  FieldPoint pt;
  double xr, yr;
  double weight; // quadrature weight including exp(xi^2 + eta^2) and Jacobian
  PsiValue psi;
};

// Tensor Gauss-Hermite lattice centered on the envelope in rotated coordinates.
std::vector<Node> lattice(const WaveState &state, double phase, int order) {
  const GaussHermite gh(order);
  const auto &env = state.envelope;
  const double om = state.params.omega;
  const double scale = 1.0 / std::sqrt(env.d);
  const double t = phase / om;
  std::vector<Node> nodes;
  nodes.reserve(std::size_t(order) * order);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      const double xi = gh.nodes[i], eta = gh.nodes[j];
      Node n;
      n.xr = scale * xi;
      n.yr = env.center() + scale * eta;
      n.pt = from_rotated(n.xr, n.yr, t, 0.0, om);
      n.weight = gh.weights[i] * gh.weights[j] * std::exp(xi * xi + eta * eta) * scale * scale;
      n.psi = evaluate_psi(state, n.pt, true);
      nodes.push_back(std::move(n));
    }
  return nodes;
}

double integrate(const std::vector<Node> &nodes, const std::function<double(const Node &)> &f) {
  std::vector<double> terms(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    terms[i] = nodes[i].weight * f(nodes[i]);
  return pairwise_sum(terms);
}

double density(const Node &n) { return n.psi.value.squaredNorm(); }

double expect(const dirac::Spinor &psi, const dirac::Spinor &op_psi) {
  return psi.dot(op_psi).real(); // dot conjugates the first argument
}

LocalizationReport localization_at(const WaveState &state, int order) {
  const auto nodes = lattice(state, 0.0, order);
  LocalizationReport r;
  r.norm = integrate(nodes, density);
  auto mean = [&](auto coord) {
    return integrate(nodes, [&](const Node &n) { return coord(n) * density(n); }) / r.norm;
  };
  auto central = [&](auto coord, double m) {
    return integrate(nodes, [&](const Node &n) {
             const double dx = coord(n) - m;
             return dx * dx * density(n);
           }) / r.norm;
  };
  const auto xr = [](const Node &n) { return n.xr; };
  const auto yr = [](const Node &n) { return n.yr; };
  const auto xl = [](const Node &n) { return n.pt.x; };
  const auto yl = [](const Node &n) { return n.pt.y; };
  r.center_rotated = {mean(xr), mean(yr)};
  r.variance_rotated = {central(xr, r.center_rotated[0]), central(yr, r.center_rotated[1])};
  r.center_lab = {mean(xl), mean(yl)};
  r.variance_lab = {central(xl, r.center_lab[0]), central(yl, r.center_lab[1])};
  r.mean_r2 = integrate(nodes, [](const Node &n) {
                return (n.pt.x * n.pt.x + n.pt.y * n.pt.y) * density(n);
              }) / r.norm;
  r.diameter = 2.0 * std::sqrt(r.mean_r2);
  r.diameter_wavelengths = r.diameter * state.params.omega / (2.0 * std::numbers::pi);

  for (int axis = 0; axis < 2; ++axis) {
    const int mu = axis + 1;
    const double pmean =
        integrate(nodes, [&](const Node &n) { return expect(n.psi.value, -I * n.psi.gradient[mu]); }) /
        r.norm;
    const double pvar = integrate(nodes, [&](const Node &n) {
                          return (-I * n.psi.gradient[mu] - pmean * n.psi.value).squaredNorm();
                        }) / r.norm;
    r.uncertainty[axis] = std::sqrt(r.variance_lab[axis] * pvar);
  }
  return r;
}

DynamicalReport dynamics_at(const WaveState &state, double phase, int order) {
  const auto nodes = lattice(state, phase, order);
  DynamicalReport r;
  r.phase = phase;
  const double norm = integrate(nodes, density);
  auto avg = [&](auto f) { return integrate(nodes, f) / norm; };

  r.energy_time = avg([](const Node &n) { return expect(n.psi.value, I * n.psi.gradient[0]); });
  r.energy_hamiltonian = avg([&](const Node &n) {
    const auto A = vector_potential(state.params, n.pt);
    dirac::Spinor hpsi = dirac::beta() * n.psi.value;
    for (int j = 0; j < 3; ++j)
      hpsi += dirac::alpha(j) * (-I * n.psi.gradient[j + 1] - A[j] * n.psi.value);
    return expect(n.psi.value, hpsi);
  });
  for (int j = 0; j < 3; ++j) {
    r.momentum_canonical[j] =
        avg([&](const Node &n) { return expect(n.psi.value, -I * n.psi.gradient[j + 1]); });
    const double a = avg([&](const Node &n) {
      return vector_potential(state.params, n.pt)[j] * density(n);
    });
    r.momentum_kinetic[j] = r.momentum_canonical[j] - a;
    r.spin[j] = avg([&](const Node &n) {
      return (-0.5 * I * n.psi.value.dot(dirac::sigma(j) * n.psi.value)).real();
    });
  }
  return r;
}

double rel_delta(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

bool close(double value, double target, double tol) {
  return std::abs(value - target) <= tol * std::max(std::abs(target), 1e-300);
}

} // namespace

ClosedFormTargets ClosedFormTargets::for_g(double g) {
  if (!(g > 0.0))
    throw Error(ErrorCode::invalid_argument, "closed forms: g must be positive");
  const double root = std::sqrt(4.0 + g * g);
  return {g,
          std::sqrt(1.0 + 0.25 * g * g) / std::numbers::pi,
          0.5 * g + 2.0 / g,
          root / (2.0 * g),
          0.5 * g,
          g / (2.0 * root),
          0.0,
          g * g / (4.0 + g * g)};
}

double DynamicalReport::transverse_canonical() const {
  return std::hypot(momentum_canonical[0], momentum_canonical[1]);
}

double DynamicalReport::transverse_kinetic() const {
  return std::hypot(momentum_kinetic[0], momentum_kinetic[1]);
}

double DynamicalReport::spin_amplitude() const { return std::hypot(spin[0], spin[1]); }

LocalizationReport localization_report(const WaveState &state, const QuadratureSpec &q) {
  if (q.order < 32)
    throw Error(ErrorCode::invalid_argument, "localization: quadrature order must be >= 32");
  auto r = localization_at(state, q.order);
  if (q.check_convergence) {
    const auto r2 = localization_at(state, 2 * q.order);
    const double deltas[] = {
        rel_delta(r.norm, r2.norm),
        rel_delta(r.center_rotated[1], r2.center_rotated[1]),
        rel_delta(r.variance_rotated[0], r2.variance_rotated[0]),
        rel_delta(r.variance_rotated[1], r2.variance_rotated[1]),
        rel_delta(r.mean_r2, r2.mean_r2),
        rel_delta(r.uncertainty[0], r2.uncertainty[0]),
        rel_delta(r.uncertainty[1], r2.uncertainty[1]),
    };
    r.convergence_delta = *std::max_element(std::begin(deltas), std::end(deltas));
    r.converged = r.convergence_delta <= q.convergence_tol;
  }
  return r;
}

DynamicalReport dynamical_expectations(const WaveState &state, double phase,
                                       const QuadratureSpec &q) {
  if (q.order < 32)
    throw Error(ErrorCode::invalid_argument, "dynamics: quadrature order must be >= 32");
  auto r = dynamics_at(state, phase, q.order);
  if (q.check_convergence) {
    const auto r2 = dynamics_at(state, phase, 2 * q.order);
    double delta = std::max(rel_delta(r.energy_time, r2.energy_time),
                            rel_delta(r.energy_hamiltonian, r2.energy_hamiltonian));
    for (int j = 0; j < 3; ++j)
      delta = std::max({delta, rel_delta(r.momentum_canonical[j], r2.momentum_canonical[j]),
                        rel_delta(r.momentum_kinetic[j], r2.momentum_kinetic[j]),
                        rel_delta(r.spin[j], r2.spin[j])});
    r.convergence_delta = delta;
    r.converged = delta <= q.convergence_tol;
  }
  return r;
}

ExpectationReport expectation_report(const WaveState &state, double phase,
                                     const QuadratureSpec &q) {
  ExpectationReport rep;
  rep.branch = state.branch.label;
  rep.g = g_from_e0(state.params.e0);
  rep.h = state.params.h;
  rep.omega = state.params.omega;
  rep.localization = localization_report(state, q);
  rep.dynamics = dynamical_expectations(state, phase, q);
  rep.targets = ClosedFormTargets::for_g(rep.g);
  rep.tolerance = 10.0 * (rep.h + rep.omega);
  rep.targets_apply =
      state.branch.label == Branch::singular_plus || state.branch.label == Branch::singular_minus;

  const auto &d = rep.dynamics;
  const auto &t = rep.targets;
  const double tol = rep.tolerance;
  auto match = [](bool a, bool b) {
    return a && b ? OperatorMatch::both
           : a    ? OperatorMatch::first
           : b    ? OperatorMatch::second
                  : OperatorMatch::none;
  };
  rep.energy_match = match(close(d.energy_time, t.energy, tol),
                           close(d.energy_hamiltonian, t.energy, tol));
  rep.momentum_match =
      match(close(d.transverse_canonical(), t.transverse_momentum, tol) &&
                close(d.momentum_canonical[2], t.longitudinal_momentum, tol),
            close(d.transverse_kinetic(), t.transverse_momentum, tol) &&
                close(d.momentum_kinetic[2], t.longitudinal_momentum, tol));
  rep.spin_match = close(d.spin_amplitude(), t.spin_amplitude, tol) &&
                   std::abs(d.spin[2]) <= tol;
  rep.diameter_match = close(rep.localization.diameter_wavelengths, t.diameter_wavelengths, tol);

  if (rep.targets_apply) {
    if (rep.energy_match == OperatorMatch::none)
      rep.discrepancies.push_back("energy: neither <i d/dt> nor <H> matches g/2 + 2/g");
    if (rep.momentum_match == OperatorMatch::none)
      rep.discrepancies.push_back("momentum: neither canonical nor kinetic matches");
    if (!rep.spin_match)
      rep.discrepancies.push_back("spin: amplitude differs from g/(2 sqrt(4+g^2))");
    if (!rep.diameter_match)
      rep.discrepancies.push_back("diameter: differs from (lambda/pi) sqrt(1+(g/2)^2)");
  }
  return rep;
}

SpinMomentumRatio spin_momentum_ratio(const DynamicalReport &dyn, double g) {
  const double amp = dyn.transverse_canonical();
  if (!(amp > 0.0))
    throw Error(ErrorCode::invalid_argument, "spin/momentum ratio: transverse momentum vanishes");
  SpinMomentumRatio r;
  r.target = ClosedFormTargets::for_g(g).ratio;
  const double node_tol = 1e-8 * amp;
  if (std::abs(dyn.momentum_canonical[0]) > node_tol)
    r.ratio_x = dyn.spin[0] / dyn.momentum_canonical[0];
  if (std::abs(dyn.momentum_canonical[1]) > node_tol)
    r.ratio_y = dyn.spin[1] / dyn.momentum_canonical[1];
  r.value = r.ratio_x ? *r.ratio_x : *r.ratio_y;
  if (r.ratio_x && r.ratio_y)
    r.component_disagreement = std::abs(*r.ratio_x - *r.ratio_y) / std::abs(*r.ratio_x);
  r.relative_error = std::abs(r.value - r.target) / r.target;
  return r;
}

SuppressionExponent suppression_exponent(const GaussianEnvelope &env,
                                         const UnitsContext &ctx) {
  const double e0 = 2.0 * env.d / ctx.omega();
  return {2.0 * env.d2 * env.d2 / env.d,
          (e0 * e0 + 1.0) / e0 * ctx.wavelength() /
              (2.0 * std::numbers::pi * ctx.compton_wavelength())};
}

std::string_view operator_match_name(OperatorMatch m) {
  switch (m) {
  case OperatorMatch::first:
    return "first";
  case OperatorMatch::second:
    return "second";
  case OperatorMatch::both:
    return "both";
  case OperatorMatch::none:
    break;
  }
  return "none";
}

void to_json(nlohmann::json &j, const ClosedFormTargets &t) {
  j = nlohmann::json{{"g", t.g},
                     {"diameter_wavelengths", t.diameter_wavelengths},
                     {"energy", t.energy},
                     {"transverse_momentum", t.transverse_momentum},
                     {"longitudinal_momentum", t.longitudinal_momentum},
                     {"spin_amplitude", t.spin_amplitude},
                     {"spin_z", t.spin_z},
                     {"ratio", t.ratio}};
}

void to_json(nlohmann::json &j, const ExpectationReport &r) {
  const auto &l = r.localization;
  const auto &d = r.dynamics;
  j = nlohmann::json{
      {"branch", branch_name(r.branch)},
      {"g", r.g},
      {"h", r.h},
      {"omega", r.omega},
      {"phase", d.phase},
      {"localization",
       {{"norm", l.norm},
        {"center_rotated", l.center_rotated},
        {"variance_rotated", l.variance_rotated},
        {"center_lab", l.center_lab},
        {"variance_lab", l.variance_lab},
        {"mean_r2", l.mean_r2},
        {"diameter", l.diameter},
        {"diameter_wavelengths", l.diameter_wavelengths},
        {"uncertainty", l.uncertainty},
        {"converged", l.converged},
        {"convergence_delta", l.convergence_delta}}},
      {"dynamics",
       {{"energy_time", d.energy_time},
        {"energy_hamiltonian", d.energy_hamiltonian},
        {"momentum_canonical", d.momentum_canonical},
        {"momentum_kinetic", d.momentum_kinetic},
        {"spin", d.spin},
        {"converged", d.converged},
        {"convergence_delta", d.convergence_delta}}},
      {"targets", r.targets},
      {"targets_apply", r.targets_apply},
      {"tolerance", r.tolerance},
      {"energy_match", operator_match_name(r.energy_match)},
      {"momentum_match", operator_match_name(r.momentum_match)},
      {"spin_match", r.spin_match},
      {"diameter_match", r.diameter_match},
      {"discrepancies", r.discrepancies},
  };
}

std::string expectation_csv_header() {
  return "branch,g,h,omega,phase,norm,center_x,center_y,diameter_wavelengths,"
         "uncertainty_x,uncertainty_y,energy_time,energy_hamiltonian,"
         "px_canonical,py_canonical,pz_canonical,px_kinetic,py_kinetic,pz_kinetic,"
         "s1,s2,s3,energy_match,momentum_match,spin_match,diameter_match";
}

std::string expectation_csv_row(const ExpectationReport &r) {
  const auto &l = r.localization;
  const auto &d = r.dynamics;
  std::ostringstream os;
  auto f = [](double v) { return format_double(v); };
  os << branch_name(r.branch) << ',' << f(r.g) << ',' << f(r.h) << ',' << f(r.omega) << ','
     << f(d.phase) << ',' << f(l.norm) << ',' << f(l.center_rotated[0]) << ','
     << f(l.center_rotated[1]) << ',' << f(l.diameter_wavelengths) << ','
     << f(l.uncertainty[0]) << ',' << f(l.uncertainty[1]) << ',' << f(d.energy_time) << ','
     << f(d.energy_hamiltonian);
  for (double v : d.momentum_canonical)
    os << ',' << f(v);
  for (double v : d.momentum_kinetic)
    os << ',' << f(v);
  for (double v : d.spin)
    os << ',' << f(v);
  os << ',' << operator_match_name(r.energy_match) << ','
     << operator_match_name(r.momentum_match) << ',' << (r.spin_match ? 1 : 0) << ','
     << (r.diameter_match ? 1 : 0);
  return os.str();
}

} // namespace dirwave
