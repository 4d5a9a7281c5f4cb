#include "dirwave/wavefunction.hpp"

#include "dirwave/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace dirwave {

namespace {

using cd = std::complex<double>;

bool singular_label(Branch b) {
  return b == Branch::singular_plus || b == Branch::singular_minus;
}

double spinor_bracket(double h, double energy, double offset) {
  return h * h * energy * energy + (energy * energy + 1.0) * offset * offset;
}

// |psi|^2 of the unnormalized spinor is twice the bracket.
constexpr double kSpinorWeight = 2.0;

} // namespace

double GaussianEnvelope::norm() const { return std::exp(log_norm); }

double GaussianEnvelope::width() const { return 1.0 / std::sqrt(2.0 * d); }

GaussianEnvelope envelope_params(const NormalizedParams &params,
                                 const SolutionBranch &branch) {
  GaussianEnvelope env;
  env.d = params.d();
  if (!(env.d > 0.0))
    throw Error(ErrorCode::non_localizable, "envelope: d = -Hz/2 must be positive");
  if (params.h == 0.0) {
    if (singular_label(branch.label)) {
      // h -> 0 limit of the singular pair.
      const double s = branch.label == Branch::singular_plus ? 1.0 : -1.0;
      env.d2 = s * 0.5 * std::sqrt(params.e0 * params.e0 + 1.0);
    } else if (branch.offset == 0.0) {
      throw Error(ErrorCode::envelope_singular,
                  "envelope singular: E = E0 at h = 0 without a singular-branch label");
    } else {
      env.d2 = 0.0;
    }
    return env;
  }
  if (branch.offset == 0.0)
    throw Error(ErrorCode::envelope_singular,
                "envelope singular: E = E0 with h > 0 is a pole of d2");
  env.d2 = params.e0 * params.h / (2.0 * branch.offset);
  return env;
}

double log_normalization_constant(double h, double energy, double offset,
                                  double d, double d2) {
  if (!(d > 0.0))
    throw Error(ErrorCode::invalid_argument, "normalization: d must be positive");
  const double bracket = spinor_bracket(h, energy, offset);
  if (!(bracket > 0.0))
    throw Error(ErrorCode::null_spinor, "normalization: null spinor (bracket = 0)");
  const double exponent = d2 * d2 / d;
  if (!std::isfinite(exponent))
    throw Error(ErrorCode::overflow,
                "normalization: d2^2/d is beyond the representable range "
                "(suppression exponent of the spin-oscillation superposition)");
  return -0.5 * (std::log(kSpinorWeight * bracket) + std::log(std::numbers::pi / d) + exponent);
}

double normalization_constant(double h, double energy, double offset, double d,
                              double d2) {
  const double logn = log_normalization_constant(h, energy, offset, d, d2);
  const double n = std::exp(logn);
  if (!(n >= std::numeric_limits<double>::min()))
    throw Error(ErrorCode::overflow,
                "normalization: N underflows (exp(d2^2/d) is the physical suppression "
                "factor); use log_normalization_constant");
  return n;
}

Eigen::Vector4d ground_spinor(double h, double energy, double offset, double norm) {
  Eigen::Vector4d s;
  s << h * energy, -(energy + 1.0) * offset, h * energy, -(energy - 1.0) * offset;
  return norm * s;
}

WaveState assemble_state(const NormalizedParams &params, const SolutionBranch &branch) {
  WaveState st;
  st.params = params;
  st.branch = branch;
  st.envelope = envelope_params(params, branch);
  if (params.h == 0.0 && singular_label(branch.label)) {
    // Spinor divided by h; (E - E0)/h -> +-E1.
    const double e0 = params.e0;
    const double e1 = (branch.label == Branch::singular_plus ? 1.0 : -1.0) *
                      first_order_coefficient(e0);
    st.direction << e0, -(e0 + 1.0) * e1, e0, -(e0 - 1.0) * e1;
    const double weight = st.direction.squaredNorm();
    const auto &env = st.envelope;
    st.envelope.log_norm =
        -0.5 * (std::log(weight) + std::log(std::numbers::pi / env.d) + env.d2 * env.d2 / env.d);
    return st;
  }
  st.envelope.log_norm = log_normalization_constant(
      params.h, branch.energy, branch.offset, st.envelope.d, st.envelope.d2);
  st.direction = ground_spinor(params.h, branch.energy, branch.offset, 1.0);
  return st;
}

WaveState assemble_branch(const NormalizedParams &params, Branch label) {
  const auto prob = CharacteristicProblem::singular(params.h, params.e0, params.omega);
  for (const auto &r : solve_and_classify(prob))
    if (r.label == label)
      return assemble_state(params, r);
  throw Error(ErrorCode::invalid_argument,
              "no root with label " + std::string(branch_name(label)));
}

std::array<double, 2> FieldPoint::rotated(double omega) const {
  const double th = phase(omega);
  const double c = std::cos(th), s = std::sin(th);
  return {x * c + y * s, -x * s + y * c};
}

FieldPoint from_rotated(double xr, double yr, double t, double z, double omega) {
  const double th = omega * (t - z);
  const double c = std::cos(th), s = std::sin(th);
  return {t, xr * c - yr * s, xr * s + yr * c, z};
}

PsiValue evaluate_psi(const WaveState &state, const FieldPoint &pt, bool derivatives) {
  const auto &par = state.params;
  const auto &env = state.envelope;
  const double om = par.omega;
  const double th = pt.phase(om);
  const double c = std::cos(th), s = std::sin(th);
  const double xr = pt.x * c + pt.y * s;
  const double yr = -pt.x * s + pt.y * c;
  const double r2 = pt.x * pt.x + pt.y * pt.y;

  const double E = state.branch.lab_energy;
  const double p = state.branch.p;
  // log N folded into the real exponent keeps the product representable.
  const double re = env.log_norm - 0.5 * env.d * r2 + env.d2 * yr;
  const double im = -E * pt.t + p * pt.z - env.d2 * xr;
  const cd common = std::exp(cd{re, im});
  // exp(-alpha1 alpha2 theta / 2): e^{-i theta/2} on components 0, 2, e^{+i theta/2} on 1, 3.
  const cd up = std::exp(cd{0.0, -0.5 * th});
  const cd dn = std::conj(up);

  PsiValue out;
  const std::array<cd, 4> phase{up, dn, up, dn};
  for (int k = 0; k < 4; ++k)
    out.value[k] = common * phase[k] * state.direction[k];

  if (!derivatives)
    return out;

  const cd i{0.0, 1.0};
  const cd dD_dtheta = -i * env.d2 * yr - env.d2 * xr;
  const std::array<cd, 4> dS{
      -i * E + om * dD_dtheta,
      -env.d * pt.x - i * env.d2 * c - env.d2 * s,
      -env.d * pt.y - i * env.d2 * s + env.d2 * c,
      i * p - om * dD_dtheta,
  };
  for (int k = 0; k < 4; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const cd dphase_t = -i * sign * 0.5 * om;
    const std::array<cd, 4> total{dS[0] + dphase_t, dS[1], dS[2], dS[3] - dphase_t};
    for (int mu = 0; mu < 4; ++mu)
      out.gradient[mu][k] = total[mu] * out.value[k];
  }
  return out;
}

std::array<double, 3> vector_potential(const NormalizedParams &params,
                                       const FieldPoint &pt) {
  const double th = pt.phase(params.omega);
  return {-0.5 * params.hz * pt.y + params.h * std::cos(th),
          0.5 * params.hz * pt.x + params.h * std::sin(th), 0.0};
}

void to_json(nlohmann::json &j, const SolutionBranch &b) {
  j = nlohmann::json{{"energy", b.energy},       {"offset", b.offset},
                     {"branch", branch_name(b.label)}, {"p", b.p},
                     {"lab_energy", b.lab_energy}, {"residual", b.residual},
                     {"converged", b.converged}};
  if (!b.diagnostic.empty())
    j["diagnostic"] = b.diagnostic;
}

void to_json(nlohmann::json &j, const WaveState &s) {
  const auto spinor = s.spinor();
  j = nlohmann::json{
      {"representation", dirac::representation},
      {"omega", s.params.omega},
      {"h", s.params.h},
      {"hz", s.params.hz},
      {"e0", s.params.e0},
      {"g", g_from_e0(s.params.e0)},
      {"branch", s.branch},
      {"d", s.envelope.d},
      {"d2", s.envelope.d2},
      {"log_norm", s.envelope.log_norm},
      {"norm", s.envelope.norm()},
      {"spinor", {spinor[0], spinor[1], spinor[2], spinor[3]}},
      {"spinor_direction",
       {s.direction[0], s.direction[1], s.direction[2], s.direction[3]}},
  };
}

} // namespace dirwave
