#include "dirwave/characteristic.hpp"

#include "dirwave/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dirwave {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kNewtonBudget = 200;

double horner(const std::array<double, 3> &c, double x) {
  return ((x + c[0]) * x + c[1]) * x + c[2];
}

double horner_derivative(const std::array<double, 3> &c, double x) {
  return (3.0 * x + 2.0 * c[0]) * x + c[1];
}

struct Polished {
  double x;
  bool converged;
};

// Newton with bisection fallback. Requires f(lo) > 0 > f(hi) or the reverse.
Polished polish(const std::array<double, 3> &c, double guess, double lo, double hi) {
  double flo = horner(c, lo);
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < kNewtonBudget; ++it) {
    const double fx = horner(c, x);
    if (fx == 0.0)
      return {x, true};
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = horner_derivative(c, x);
    double next = (dfx != 0.0) ? x - fx / dfx : lo;
    if (!(next > lo && next < hi))
      next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 2.0 * kEps * std::abs(x) || hi - lo <= 2.0 * kEps * std::abs(x))
      return {x, true};
  }
  return {x, false};
}

} // namespace

CharacteristicProblem CharacteristicProblem::make(double h, double e0, double p,
                                                  double omega) {
  if (!std::isfinite(h) || !std::isfinite(e0) || !std::isfinite(p) ||
      !std::isfinite(omega))
    throw Error(ErrorCode::non_finite, "characteristic problem: non-finite input");
  if (!(e0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "characteristic problem: E0 must be positive");
  if (!(h >= 0.0))
    throw Error(ErrorCode::invalid_argument, "characteristic problem: h must be non-negative");
  CharacteristicProblem prob{h, e0, p, omega};
  for (double c : prob.coefficients())
    if (!std::isfinite(c))
      throw Error(ErrorCode::non_finite, "characteristic problem: coefficient overflow");
  return prob;
}

CharacteristicProblem CharacteristicProblem::singular(double h, double e0,
                                                      double omega) {
  if (!(e0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "characteristic problem: E0 must be positive");
  return make(h, e0, singular_momentum(e0, omega), omega);
}

std::array<double, 3> CharacteristicProblem::coefficients() const {
  const double aa = a();
  return {aa - e0, -(1.0 + aa * e0 + h * h), e0};
}

std::array<double, 3> CharacteristicProblem::shifted_coefficients() const {
  const double aa = a();
  const double b = std::fma(e0, e0 + aa, -1.0);
  return {2.0 * e0 + aa, b - h * h, -h * h * e0};
}

double CharacteristicProblem::cleared(double energy) const {
  return horner(coefficients(), energy);
}

double CharacteristicProblem::original(double energy, double offset) const {
  return energy * (energy + a()) - 1.0 - energy * h * h / offset;
}

std::string_view branch_name(Branch b) {
  switch (b) {
  case Branch::singular_plus:
    return "singular-plus";
  case Branch::singular_minus:
    return "singular-minus";
  case Branch::regular:
    return "regular";
  case Branch::degenerate:
    return "degenerate";
  case Branch::unclassified:
    break;
  }
  return "unclassified";
}

Branch parse_branch(std::string_view s) {
  for (Branch b : {Branch::singular_plus, Branch::singular_minus, Branch::regular,
                   Branch::degenerate, Branch::unclassified})
    if (branch_name(b) == s)
      return b;
  throw Error(ErrorCode::invalid_argument, "unknown branch '" + std::string(s) + "'");
}

std::array<SolutionBranch, 3> solve_characteristic(const CharacteristicProblem &prob) {
  const auto sc = prob.shifted_coefficients();
  for (double c : sc)
    if (!std::isfinite(c))
      throw Error(ErrorCode::non_finite, "characteristic: non-finite coefficients");

  std::array<double, 3> u{};
  std::array<bool, 3> ok{true, true, true};

  if (prob.h == 0.0) {
    // u (u^2 + B u + C); discriminant B^2 - 4C reduces to a^2 + 4.
    const double aa = prob.a();
    const double disc = std::sqrt(aa * aa + 4.0);
    const double q = -0.5 * (sc[0] + std::copysign(disc, sc[0]));
    u = {0.0, q, sc[1] / q};
  } else {
    Eigen::Matrix3d companion;
    companion << -sc[0], -sc[1], -sc[2], 1.0, 0.0, 0.0, 0.0, 1.0, 0.0;
    Eigen::EigenSolver<Eigen::Matrix3d> es(companion, false);
    std::array<double, 3> guess{};
    for (int i = 0; i < 3; ++i)
      guess[i] = es.eigenvalues()[i].real();
    std::sort(guess.begin(), guess.end());

    const double bound =
        1.0 + std::max({std::abs(sc[0]), std::abs(sc[1]), std::abs(sc[2])});
    const std::array<std::pair<double, double>, 3> brackets{
        std::pair{-bound, -prob.e0}, std::pair{-prob.e0, 0.0}, std::pair{0.0, bound}};
    for (int i = 0; i < 3; ++i) {
      const auto r = polish(sc, guess[i], brackets[i].first, brackets[i].second);
      u[i] = r.x;
      ok[i] = r.converged;
    }
  }
  std::sort(u.begin(), u.end());

  std::array<SolutionBranch, 3> out;
  for (int i = 0; i < 3; ++i) {
    auto &b = out[i];
    b.offset = u[i];
    b.energy = prob.e0 + u[i];
    b.p = prob.p;
    b.lab_energy = b.energy + prob.p;
    b.residual = prob.cleared(b.energy);
    b.converged = ok[i];
    const double bound = 1e-12 * std::max(1.0, std::pow(std::abs(b.energy), 3));
    if (!ok[i])
      b.diagnostic = "Newton polishing did not converge within budget";
    else if (!(std::abs(b.residual) < bound))
      b.diagnostic = "residual above polishing bound";
  }
  return out;
}

std::array<double, 3> resolvent_roots(const CharacteristicProblem &prob) {
  const auto c = prob.coefficients();
  const double B = c[0], C = c[1], D = c[2];
  const double p = C - B * B / 3.0;
  const double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  std::array<double, 3> r{};
  if (p >= 0.0) {
    // Only reachable for exactly coincident roots.
    const double t = std::cbrt(-q);
    r = {t - B / 3.0, t - B / 3.0, t - B / 3.0};
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      r[k] = m * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - B / 3.0;
  }
  std::sort(r.begin(), r.end());
  return r;
}

double VietaCheck::max() const {
  return std::max({sum_error, pairwise_error, product_error});
}

VietaCheck vieta_check(const CharacteristicProblem &prob,
                       const std::array<double, 3> &r) {
  const auto c = prob.coefficients();
  const double sum = r[0] + r[1] + r[2];
  const double sum_mag = std::abs(r[0]) + std::abs(r[1]) + std::abs(r[2]);
  const double pair = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
  const double pair_mag =
      std::abs(r[0] * r[1]) + std::abs(r[0] * r[2]) + std::abs(r[1] * r[2]);
  const double prod = r[0] * r[1] * r[2];
  auto rel = [](double got, double want, double scale) {
    return std::abs(got - want) / std::max({scale, std::abs(want), 1e-300});
  };
  return {rel(sum, -c[0], sum_mag), rel(pair, c[1], pair_mag),
          rel(prod, -c[2], std::abs(prod))};
}

double singular_momentum(double e0, double omega) {
  if (!(e0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "singular momentum: E0 must be positive");
  return 0.5 * (1.0 / e0 - e0) + 0.5 * omega;
}

double singular_energy(double e0, double omega) {
  return e0 + singular_momentum(e0, omega);
}

double first_order_coefficient(double e0) {
  return e0 / std::sqrt(e0 * e0 + 1.0);
}

double SeriesExpansion::evaluate(double h) const {
  double acc = 0.0;
  for (auto k = coefficients.size(); k-- > 0;)
    acc = acc * h + coefficients[k];
  return acc;
}

std::array<SeriesExpansion, 2> singular_series(double e0, double h, int order) {
  if (!(e0 > 0.0))
    throw Error(ErrorCode::invalid_argument, "series: E0 must be positive");
  if (order < 1)
    throw Error(ErrorCode::invalid_argument, "series: order must be >= 1");
  if (!(h > 0.0) || !(h < 0.1 * e0))
    throw Error(ErrorCode::invalid_argument,
                "series: need 0 < h < 0.1 E0 to resolve the singular pair");

  const double e1 = first_order_coefficient(e0);
  std::vector<double> coeff{e0, e1};
  bool truncated = false;
  std::string warning;

  if (order >= 2) {
    constexpr int levels = 6;
    std::array<double, levels> hs{};
    std::array<double, levels> even{}, odd{};
    for (int j = 0; j < levels; ++j) {
      hs[j] = h * std::ldexp(1.0, -j);
      const auto roots = solve_characteristic(CharacteristicProblem::singular(hs[j], e0, 0.0));
      // Singular pair: middle and upper roots straddle E0.
      const double up = roots[2].offset, dn = roots[1].offset;
      even[j] = 0.5 * (up + dn);
      odd[j] = 0.5 * (up - dn);
    }
    for (int k = 2; k <= order; ++k) {
      const auto &series = (k % 2 == 0) ? even : odd;
      std::array<std::array<double, levels>, levels> T{};
      for (int j = 0; j < levels; ++j) {
        double known = 0.0;
        for (int m = k % 2 == 0 ? 2 : 1; m < k; m += 2)
          known += coeff[m] * std::pow(hs[j], m);
        T[j][0] = (series[j] - known) / std::pow(hs[j], k);
      }
      for (int m = 1; m < levels; ++m)
        for (int j = m; j < levels; ++j)
          T[j][m] = T[j][m - 1] +
                    (T[j][m - 1] - T[j - 1][m - 1]) / (std::pow(4.0, m) - 1.0);
      // Pick the diagonal entry with the smallest change from its predecessor;
      // deep entries get dominated by cancellation for high k.
      int best = 1;
      double best_delta = std::abs(T[1][1] - T[0][0]);
      for (int m = 2; m < levels; ++m) {
        const double delta = std::abs(T[m][m] - T[m - 1][m - 1]);
        if (delta < best_delta) {
          best_delta = delta;
          best = m;
        }
      }
      const double est = T[best][best];
      if (!std::isfinite(est) || best_delta > 1e-6 * std::max(1.0, std::abs(est))) {
        truncated = true;
        warning = "series truncated at order " + std::to_string(k - 1) +
                  ": extrapolated coefficient " + std::to_string(k) + " did not converge";
        break;
      }
      coeff.push_back(est);
    }
  }

  SeriesExpansion plus{+1, coeff, truncated, warning};
  SeriesExpansion minus{-1, coeff, truncated, warning};
  for (std::size_t k = 1; k < minus.coefficients.size(); k += 2)
    minus.coefficients[k] = -minus.coefficients[k];
  return {plus, minus};
}

std::array<SolutionBranch, 3> classify_roots(std::array<SolutionBranch, 3> roots,
                                             const CharacteristicProblem &prob) {
  const double p17 = singular_momentum(prob.e0, prob.omega);
  const bool at_singular_momentum =
      std::abs(prob.p - p17) <= 1e-9 * std::max(1.0, std::abs(p17));
  for (auto &r : roots) {
    r.label = Branch::regular;
    r.p = prob.p;
    r.lab_energy = r.energy + prob.p;
  }
  if (!at_singular_momentum)
    return roots;

  const double window = std::max(10.0 * prob.h, 1e-9);
  std::vector<std::size_t> near;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (std::abs(roots[i].offset) < window)
      near.push_back(i);

  const bool split = near.size() == 2 && prob.h > 0.0 &&
                     roots[near[0]].offset < 0.0 && roots[near[1]].offset > 0.0;
  for (std::size_t i : near) {
    if (!split)
      roots[i].label = Branch::degenerate;
    else
      roots[i].label = roots[i].offset > 0.0 ? Branch::singular_plus
                                             : Branch::singular_minus;
  }
  return roots;
}

std::array<SolutionBranch, 3> solve_and_classify(const CharacteristicProblem &prob) {
  return classify_roots(solve_characteristic(prob), prob);
}

} // namespace dirwave
