#include "dirwave/dirwave.h"

#include "dirwave/error.hpp"
#include "dirwave/observables.hpp"
#include "dirwave/residual.hpp"
#include "dirwave/sweep.hpp"
#include "dirwave/units.hpp"
#include "dirwave/wavefunction.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct dw_units {
  dirwave::UnitsContext ctx;
};

struct dw_state {
  dirwave::WaveState state;
};

struct dw_sweep_config {
  dirwave::SweepConfig cfg;
};

namespace {

thread_local std::string last_error;

template <class F> dw_status guarded(F &&f) {
  try {
    f();
    return DW_OK;
  } catch (const dirwave::Error &e) {
    last_error = e.what();
    return static_cast<dw_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc &) {
    last_error = "out of memory";
  } catch (const std::exception &e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return DW_ERR_INTERNAL;
}

void require(const void *p, const char *what) {
  if (!p)
    throw dirwave::Error(dirwave::ErrorCode::invalid_argument,
                         std::string(what) + " must not be NULL");
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dirwave::PhysicalConstants constants_from(const char *path) {
  return path ? dirwave::load_constants(path, dirwave::codata2018_electron())
              : dirwave::codata2018_electron();
}

dw_params to_c(const dirwave::NormalizedParams &p) { return {p.omega, p.h, p.hz, p.e0}; }

dirwave::NormalizedParams from_c(const dw_params &p) {
  // Re-validate: callers may hand-build the struct.
  auto q = dirwave::NormalizedParams::from_e0(p.e0, p.h, p.omega);
  if (std::abs(p.hz - q.hz) > 1e-12 * std::abs(q.hz))
    throw dirwave::Error(dirwave::ErrorCode::invalid_argument,
                         "params: hz must equal -e0 * omega");
  return q;
}

dirwave::Branch branch_from_c(int b) {
  switch (b) {
  case DW_BRANCH_SINGULAR_PLUS:
    return dirwave::Branch::singular_plus;
  case DW_BRANCH_SINGULAR_MINUS:
    return dirwave::Branch::singular_minus;
  case DW_BRANCH_REGULAR:
    return dirwave::Branch::regular;
  case DW_BRANCH_DEGENERATE:
    return dirwave::Branch::degenerate;
  case DW_BRANCH_UNCLASSIFIED:
    return dirwave::Branch::unclassified;
  default:
    throw dirwave::Error(dirwave::ErrorCode::invalid_argument, "unknown branch code");
  }
}

int branch_to_c(dirwave::Branch b) {
  switch (b) {
  case dirwave::Branch::singular_plus:
    return DW_BRANCH_SINGULAR_PLUS;
  case dirwave::Branch::singular_minus:
    return DW_BRANCH_SINGULAR_MINUS;
  case dirwave::Branch::regular:
    return DW_BRANCH_REGULAR;
  case dirwave::Branch::degenerate:
    return DW_BRANCH_DEGENERATE;
  case dirwave::Branch::unclassified:
    break;
  }
  return DW_BRANCH_UNCLASSIFIED;
}

} // namespace

extern "C" {

const char *dw_version(void) { return "1.0.0"; }

const char *dw_last_error(void) { return last_error.c_str(); }

void dw_string_free(char *s) { std::free(s); }

const char *dw_branch_name(int branch) {
  try {
    return dirwave::branch_name(branch_from_c(branch)).data();
  } catch (...) {
    return "invalid";
  }
}

dw_status dw_units_create(double wavelength_cm, const char *constants_path, dw_units **out) {
  return guarded([&] {
    require(out, "out");
    *out = new dw_units{
        dirwave::UnitsContext::from_wavelength(wavelength_cm, constants_from(constants_path))};
  });
}

dw_status dw_units_create_from_frequency(double frequency_hz, const char *constants_path,
                                         dw_units **out) {
  return guarded([&] {
    require(out, "out");
    *out = new dw_units{
        dirwave::UnitsContext::from_frequency(frequency_hz, constants_from(constants_path))};
  });
}

void dw_units_free(dw_units *u) { delete u; }

dw_status dw_units_info_get(const dw_units *u, dw_units_info *out) {
  return guarded([&] {
    require(u, "units");
    require(out, "out");
    const auto &c = u->ctx;
    *out = {c.wavelength(), c.frequency(), c.compton_wavelength(), c.bohr_magneton(),
            c.omega()};
  });
}

dw_status dw_normalize_fields(const dw_units *u, double hz_gauss, double amplitude_gauss,
                              dw_params *out) {
  return guarded([&] {
    require(u, "units");
    require(out, "out");
    *out = to_c(dirwave::normalize_fields(hz_gauss, amplitude_gauss, u->ctx));
  });
}

dw_status dw_denormalize_fields(const dw_units *u, const dw_params *p, double *hz_gauss,
                                double *amplitude_gauss) {
  return guarded([&] {
    require(u, "units");
    require(p, "params");
    require(hz_gauss, "hz_gauss");
    require(amplitude_gauss, "amplitude_gauss");
    const dirwave::NormalizedParams np{p->omega, p->h, p->hz, p->e0};
    const auto f = dirwave::denormalize_fields(np, u->ctx);
    *hz_gauss = f.hz;
    *amplitude_gauss = f.amplitude;
  });
}

dw_status dw_params_from_e0(double e0, double h, double omega, dw_params *out) {
  return guarded([&] {
    require(out, "out");
    *out = to_c(dirwave::NormalizedParams::from_e0(e0, h, omega));
  });
}

dw_status dw_resonance_convert(double value, int input_is_g, const dw_units *u,
                               dw_resonance *out) {
  return guarded([&] {
    require(out, "out");
    const auto r = dirwave::resonance_convert(
        value, input_is_g ? dirwave::ResonanceInput::g_factor : dirwave::ResonanceInput::e0,
        u ? &u->ctx : nullptr);
    *out = {r.g, r.e0, r.hz_gauss.has_value() ? 1 : 0, r.angular_frequency.value_or(0.0),
            r.hz_gauss.value_or(0.0)};
  });
}

dw_status dw_solve(double h, double e0, double p, double omega, dw_root out[3]) {
  return guarded([&] {
    require(out, "out");
    const auto roots =
        dirwave::solve_and_classify(dirwave::CharacteristicProblem::make(h, e0, p, omega));
    for (int i = 0; i < 3; ++i)
      out[i] = {roots[i].energy,     roots[i].offset,   roots[i].p,
                roots[i].lab_energy, roots[i].residual, branch_to_c(roots[i].label),
                roots[i].converged ? 1 : 0};
  });
}

dw_status dw_singular_momentum(double e0, double omega, double *p) {
  return guarded([&] {
    require(p, "p");
    *p = dirwave::singular_momentum(e0, omega);
  });
}

dw_status dw_singular_series(double e0, double h, int order, double *plus, double *minus,
                             size_t capacity, size_t *count) {
  return guarded([&] {
    require(count, "count");
    const auto s = dirwave::singular_series(e0, h, order);
    const auto n = s[0].coefficients.size();
    *count = n;
    for (size_t k = 0; k < n && k < capacity; ++k) {
      if (plus)
        plus[k] = s[0].coefficients[k];
      if (minus)
        minus[k] = s[1].coefficients[k];
    }
  });
}

dw_status dw_state_create(const dw_params *p, int branch, dw_state **out) {
  return guarded([&] {
    require(p, "params");
    require(out, "out");
    *out = new dw_state{dirwave::assemble_branch(from_c(*p), branch_from_c(branch))};
  });
}

void dw_state_free(dw_state *s) { delete s; }

dw_status dw_state_info_get(const dw_state *s, dw_state_info *out) {
  return guarded([&] {
    require(s, "state");
    require(out, "out");
    const auto &st = s->state;
    *out = {st.envelope.d,      st.envelope.d2,       st.envelope.log_norm, st.branch.energy,
            st.branch.lab_energy, st.branch.p, branch_to_c(st.branch.label)};
  });
}

dw_status dw_state_evaluate(const dw_state *s, double t, double x, double y, double z,
                            int derivatives, double *out, size_t capacity) {
  return guarded([&] {
    require(s, "state");
    require(out, "out");
    const size_t need = derivatives ? 40 : 8;
    if (capacity < need)
      throw dirwave::Error(dirwave::ErrorCode::invalid_argument,
                           "evaluate: output buffer too small");
    const auto ev = dirwave::evaluate_psi(s->state, {t, x, y, z}, derivatives != 0);
    auto put = [&](size_t block, const dirwave::dirac::Spinor &v) {
      for (int k = 0; k < 4; ++k) {
        out[block * 8 + 2 * k] = v[k].real();
        out[block * 8 + 2 * k + 1] = v[k].imag();
      }
    };
    put(0, ev.value);
    if (derivatives)
      for (size_t mu = 0; mu < 4; ++mu)
        put(mu + 1, ev.gradient[mu]);
  });
}

dw_status dw_state_to_json(const dw_state *s, char **json) {
  return guarded([&] {
    require(s, "state");
    require(json, "json");
    *json = dup_string(nlohmann::json(s->state).dump(2));
  });
}

dw_status dw_residual(const dw_state *s, const int signs[4], int mode, double fd_step,
                      dw_residual_result *out, char **json) {
  return guarded([&] {
    require(s, "state");
    dirwave::ResidualOptions opts;
    if (signs) {
      for (int i = 0; i < 4; ++i)
        if (signs[i] != 1 && signs[i] != -1)
          throw dirwave::Error(dirwave::ErrorCode::invalid_argument, "signs must be +1 or -1");
      opts.convention = {signs[0], signs[1], signs[2], signs[3]};
    }
    opts.mode = mode ? dirwave::DerivativeMode::finite_difference
                     : dirwave::DerivativeMode::analytic;
    if (fd_step > 0.0)
      opts.fd_step = fd_step;
    const auto rep = dirwave::dirac_residual(s->state, {}, opts);
    if (out)
      *out = {rep.relative_residual, rep.convergence_ratio.value_or(0.0), rep.points.size()};
    if (json)
      *json = dup_string(nlohmann::json(rep).dump(2));
  });
}

dw_status dw_convention_audit(const dw_state *s, int *unique, char **json, char **csv) {
  return guarded([&] {
    require(s, "state");
    const auto table = dirwave::convention_audit(s->state);
    if (unique)
      *unique = table.unique() ? 1 : 0;
    if (json)
      *json = dup_string(nlohmann::json(table).dump(2));
    if (csv)
      *csv = dup_string(table.to_csv());
  });
}

dw_status dw_observe(const dw_state *s, double phase, int order, dw_observables *out,
                     char **json) {
  return guarded([&] {
    require(s, "state");
    dirwave::QuadratureSpec q;
    if (order > 0)
      q.order = order;
    const auto rep = dirwave::expectation_report(s->state, phase, q);
    if (out) {
      const auto &l = rep.localization;
      const auto &d = rep.dynamics;
      *out = {l.norm,
              l.center_rotated[0],
              l.center_rotated[1],
              l.diameter_wavelengths,
              l.uncertainty[0],
              l.uncertainty[1],
              d.energy_time,
              d.energy_hamiltonian,
              {d.momentum_canonical[0], d.momentum_canonical[1], d.momentum_canonical[2]},
              {d.momentum_kinetic[0], d.momentum_kinetic[1], d.momentum_kinetic[2]},
              {d.spin[0], d.spin[1], d.spin[2]}};
    }
    if (json)
      *json = dup_string(nlohmann::json(rep).dump(2));
  });
}

dw_status dw_suppression_exponent(const dw_state *s, const dw_units *u, double *direct,
                                  double *closed_form) {
  return guarded([&] {
    require(s, "state");
    require(u, "units");
    const auto e = dirwave::suppression_exponent(s->state.envelope, u->ctx);
    if (direct)
      *direct = e.direct;
    if (closed_form)
      *closed_form = e.closed_form;
  });
}

dw_status dw_sweep_config_create(dw_sweep_config **out) {
  return guarded([&] {
    require(out, "out");
    *out = new dw_sweep_config{};
  });
}

void dw_sweep_config_free(dw_sweep_config *c) { delete c; }

dw_status dw_sweep_config_set(dw_sweep_config *c, const char *key, const char *value) {
  return guarded([&] {
    require(c, "config");
    require(key, "key");
    require(value, "value");
    c->cfg.set(key, value);
  });
}

dw_status dw_sweep_config_load(dw_sweep_config *c, const char *path) {
  return guarded([&] {
    require(c, "config");
    require(path, "path");
    c->cfg.load(path);
  });
}

dw_status dw_sweep_config_get(const dw_sweep_config *c, const char *key, char **value) {
  return guarded([&] {
    require(c, "config");
    require(key, "key");
    require(value, "value");
    const std::string k = key;
    std::string v;
    if (k == "csv")
      v = c->cfg.csv_path;
    else if (k == "json")
      v = c->cfg.json_path;
    else if (k == "constants")
      v = c->cfg.constants_path;
    else if (k == "desk_scale")
      v = c->cfg.desk_scale ? "1" : "0";
    else if (k == "threads")
      v = std::to_string(c->cfg.threads);
    else
      throw dirwave::Error(dirwave::ErrorCode::invalid_argument,
                           "config: key '" + k + "' cannot be read back");
    *value = dup_string(v);
  });
}

dw_status dw_sweep_config_point(const dw_sweep_config *c, size_t index, dw_params *out,
                                int *branch, double *phase, int *quad_order) {
  return guarded([&] {
    require(c, "config");
    require(out, "out");
    auto cfg = c->cfg;
    cfg.finalize();
    if (index >= cfg.e0_grid.size())
      throw dirwave::Error(dirwave::ErrorCode::invalid_argument, "config: grid index out of range");
    const auto ctx = dirwave::UnitsContext::from_wavelength(
        cfg.wavelength, constants_from(cfg.constants_path.empty() ? nullptr
                                                                  : cfg.constants_path.c_str()));
    *out = to_c(dirwave::NormalizedParams::from_e0(cfg.e0_grid[index], cfg.h,
                                                   cfg.effective_omega(ctx)));
    if (branch)
      *branch = branch_to_c(cfg.branches.front());
    if (phase)
      *phase = cfg.phases.front();
    if (quad_order)
      *quad_order = cfg.quad_order;
  });
}

dw_status dw_sweep_run(const dw_sweep_config *c, char **csv, char **json, int *failures) {
  return guarded([&] {
    require(c, "config");
    const auto res = dirwave::run_sweep(c->cfg);
    auto cfg = c->cfg;
    cfg.finalize();
    if (failures)
      *failures = res.failures;
    if (csv)
      *csv = dup_string(res.csv());
    if (json)
      *json = dup_string(res.summary_json(cfg));
  });
}

dw_status dw_extract_g(const char *csv, const char *column, double observed,
                       const char *branch, dw_g_estimate *out) {
  return guarded([&] {
    require(csv, "csv");
    require(column, "column");
    require(out, "out");
    const auto est =
        dirwave::extract_g(csv, column, observed, branch ? branch : "singular-plus");
    *out = {est.g, est.lower_g, est.upper_g, est.lower_row, est.upper_row};
  });
}

} // extern "C"
