#include "gjms/sobolev_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "gjms/error.hpp"

namespace gjms {

namespace {

double critical_power(const ProblemParams& params) { return 2.0 * params.n() / (params.n() - 2.0 * params.s()); }

double sum_of_squares(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return sum;
}

struct Projection {
  SpectralCoeffs coeffs;
  double constraint_error = 0.0;
  double grid_min = 0.0;
};

// Synthesize, clamp at zero, rescale to unit critical norm, analyze.
class Projector {
 public:
  Projector(const ProblemParams& params, int L, int M)
      : transform_(make_grid(params.n(), M), L), p_(critical_power(params)) {}

  const ZonalTransform& transform() const { return transform_; }
  double power() const { return p_; }

  Projection operator()(const SpectralCoeffs& c) const {
    std::vector<double> values = transform_.synthesize(c);
    for (double& v : values) v = std::max(v, 0.0);
    const double mass = lp_integral(transform_.grid(), values, p_);
    if (!(mass > 0.0)) throw ConvergenceError("minimize: projection collapsed to the zero function");
    const double scale = std::pow(mass, -1.0 / p_);
    for (double& v : values) v *= scale;
    Projection out;
    out.constraint_error = std::abs(lp_integral(transform_.grid(), values, p_) - 1.0);
    out.grid_min = *std::min_element(values.begin(), values.end());
    out.coeffs = transform_.analyze(values);
    return out;
  }

 private:
  ZonalTransform transform_;
  double p_;
};

std::vector<double> random_coefficients(std::mt19937_64& rng, int degree, double decay_power) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (int l = 0; l <= degree; ++l) c[static_cast<std::size_t>(l)] = normal(rng) / std::pow(1.0 + l, decay_power);
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------

double sharp_constant(const ProblemParams& params) {
  const double a = params.alpha();
  return params.q() * std::pow(surface_area(params.n()), (a - 1.0) / (a + 1.0));
}

double perturbed_constant(const ProblemParams& params) {
  return (1.0 - params.epsilon()) * params.q() * std::pow(surface_area(params.n()), 2.0 * params.s() / params.n());
}

double feasible_constant(int n, double s) { return std::pow(surface_area(n), -(n - 2.0 * s) / (2.0 * n)); }

double perturbed_objective(const SpectralCoeffs& c, const ProblemParams& params) {
  if (c.n != params.n()) throw ConfigError("perturbed_objective: dimension mismatch");
  const double shift = params.epsilon() * params.q();
  double sum = 0.0;
  for (std::size_t l = 0; l < c.coeffs.size(); ++l) {
    sum += (gjms_multiplier(params, static_cast<int>(l)) - shift) * c.coeffs[l] * c.coeffs[l];
  }
  return sum;
}

double OptimizerState::nonconstant_energy() const {
  const double total = sum_of_squares(coeffs.coeffs);
  if (total == 0.0) return 0.0;
  return (total - coeffs.coeffs[0] * coeffs.coeffs[0]) / total;
}

const char* init_name(InitKind kind) {
  switch (kind) {
    case InitKind::noisy_constant: return "noisy_constant";
    case InitKind::pole_bubble: return "pole_bubble";
    case InitKind::constant: return "constant";
  }
  return "unknown";
}

InitKind parse_init(const std::string& name) {
  if (name == "noisy_constant") return InitKind::noisy_constant;
  if (name == "pole_bubble") return InitKind::pole_bubble;
  if (name == "constant") return InitKind::constant;
  throw ConfigError("unknown initialization '" + name + "'");
}

SpectralCoeffs make_init(InitKind kind, const ProblemParams& params, int L, int M, std::uint64_t seed) {
  if (L < 1 || M < L + 1) throw ConfigError("make_init: need 1 <= L < M");
  const ZonalTransform transform(make_grid(params.n(), M), L);
  const auto& nodes = transform.grid().nodes;
  switch (kind) {
    case InitKind::noisy_constant: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      SpectralCoeffs c = SpectralCoeffs::zeros(params.n(), L);
      c.coeffs[0] = 1.0;
      for (int l = 1; l <= L; ++l) c.coeffs[static_cast<std::size_t>(l)] = 0.1 * normal(rng) / (double(l) * l);
      return c;
    }
    case InitKind::pole_bubble: {
      constexpr double b = 0.1;
      std::vector<double> values(nodes.size());
      for (std::size_t j = 0; j < nodes.size(); ++j) {
        const double t = nodes[j];
        values[j] = std::pow(2.0 / (b * b * (1.0 + t) + 1.0 - t), params.half_order_gap());
      }
      return transform.analyze(values);
    }
    case InitKind::constant: {
      SpectralCoeffs c = SpectralCoeffs::zeros(params.n(), L);
      // v = c_0 Y_0 with Y_0 = |S^n|^{-1/2}.
      c.coeffs[0] = feasible_constant(params.n(), params.s()) * std::sqrt(surface_area(params.n()));
      return c;
    }
  }
  throw ConfigError("make_init: unknown kind");
}

OptimizerState minimize(const ProblemParams& params, int L, int M, const SpectralCoeffs& init,
                        const Schedule& schedule) {
  if (!params.is_critical()) throw ConfigError("minimize: alpha must be the critical exponent");
  const double eps = params.epsilon();
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw ConfigError("minimize: epsilon must lie in (0, 1), got " + std::to_string(eps));
  }
  if (L < 1 || M < L + 1) throw ConfigError("minimize: need 1 <= L < M");
  if (init.n != params.n() || init.degree_max != L) throw ConfigError("minimize: initial data has wrong shape");

  const Projector project(params, L, M);
  const ZonalTransform& transform = project.transform();
  const double p = project.power();

  std::vector<double> multiplier(static_cast<std::size_t>(L) + 1);
  std::vector<double> shifted(multiplier.size());
  for (int l = 0; l <= L; ++l) {
    multiplier[static_cast<std::size_t>(l)] = gjms_multiplier(params, l);
    shifted[static_cast<std::size_t>(l)] = multiplier[static_cast<std::size_t>(l)] - eps * params.q();
  }
  const auto objective = [&](const SpectralCoeffs& c) {
    double sum = 0.0;
    for (std::size_t l = 0; l < c.coeffs.size(); ++l) sum += shifted[l] * c.coeffs[l] * c.coeffs[l];
    return sum;
  };
  // Constraint-tangent gradient, preconditioned by 1/alpha_l:
  //   (2 (alpha_l - eps Q) c_l - 2 A [v_+^{p-1}]_l) / alpha_l
  const auto gradient = [&](const SpectralCoeffs& c, double a_value) {
    std::vector<double> values = transform.synthesize(c);
    for (double& v : values) v = std::pow(std::max(v, 0.0), p - 1.0);
    const SpectralCoeffs dual = transform.analyze(values);
    std::vector<double> g(c.coeffs.size());
    for (std::size_t l = 0; l < g.size(); ++l) {
      g[l] = (2.0 * shifted[l] * c.coeffs[l] - 2.0 * a_value * dual.coeffs[l]) / multiplier[l];
    }
    return g;
  };

  OptimizerState state;
  Projection current = project(init);
  state.coeffs = current.coeffs;
  state.objective = objective(state.coeffs);
  state.constraint_error = current.constraint_error;
  state.grid_min = current.grid_min;
  state.worst_constraint_error = current.constraint_error;
  state.history.push_back(state.objective);
  state.step = schedule.initial_step;
  state.status = "iteration_cap";

  int accepts = 0;
  SpectralCoeffs candidate = state.coeffs;
  for (int it = 0; it < schedule.max_iterations; ++it) {
    const std::vector<double> g = gradient(state.coeffs, state.objective);
    state.gradient_norm = std::sqrt(sum_of_squares(g));
    if (state.gradient_norm <= schedule.stationary_gradient * std::sqrt(sum_of_squares(state.coeffs.coeffs))) {
      state.converged = true;
      state.status = "stationary";
      break;
    }

    Projection trial;
    double trial_objective = 0.0;
    bool accepted = false;
    while (state.step >= schedule.min_step) {
      for (std::size_t l = 0; l < g.size(); ++l) candidate.coeffs[l] = state.coeffs.coeffs[l] - state.step * g[l];
      trial = project(candidate);
      trial_objective = objective(trial.coeffs);
      if (trial_objective < state.objective) {
        accepted = true;
        break;
      }
      state.step *= schedule.backtrack;
      accepts = 0;
    }
    if (!accepted) {
      state.status = "stalled";
      break;
    }

    const double rel_change = std::abs(state.objective - trial_objective) / std::abs(state.objective);
    state.coeffs = trial.coeffs;
    state.objective = trial_objective;
    state.constraint_error = trial.constraint_error;
    state.grid_min = trial.grid_min;
    state.worst_constraint_error = std::max(state.worst_constraint_error, trial.constraint_error);
    state.history.push_back(trial_objective);
    state.iteration = it + 1;
    if (++accepts >= schedule.growth_after) {
      state.step *= schedule.growth;
      accepts = 0;
    }
    if (rel_change < schedule.rel_tol) {
      state.converged = true;
      state.status = "converged";
      break;
    }
  }
  return state;
}

OptimizerState minimize(const ProblemParams& params, int L, int M, std::uint64_t seed, const Schedule& schedule) {
  return minimize(params, L, M, make_init(InitKind::noisy_constant, params, L, M, seed), schedule);
}

void to_json(nlohmann::json& j, const OptimizerState& state) {
  j = nlohmann::json{{"coeffs", state.coeffs},
                     {"objective", state.objective},
                     {"step", state.step},
                     {"iteration", state.iteration},
                     {"history", state.history},
                     {"converged", state.converged},
                     {"status", state.status},
                     {"constraint_error", state.constraint_error},
                     {"worst_constraint_error", state.worst_constraint_error},
                     {"grid_min", state.grid_min},
                     {"gradient_norm", state.gradient_norm},
                     {"nonconstant_energy", state.nonconstant_energy()}};
}

// ---------------------------------------------------------------------------

double sobolev_quotient(const SpectralCoeffs& c, const SphereFunction& v, const ProblemParams& params) {
  const double a = params.alpha();
  return quadratic_form(c, params) / std::pow(lp_integral(v.grid, v.values, a + 1.0), 2.0 / (a + 1.0));
}

namespace {

enum class TrialFamily { squared, shifted, clamped };

struct Trial {
  SpectralCoeffs coeffs;
  SphereFunction values;
};

// Nonnegative trial function on the grid together with coefficients that
// represent it exactly (squared, shifted) or up to degree M-1 (clamped).
Trial draw_trial(TrialFamily family, std::mt19937_64& rng, const ZonalTransform& low, const ZonalTransform& full,
                 int L) {
  const int n = low.grid().n;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Trial trial;
  switch (family) {
    case TrialFamily::squared: {
      SpectralCoeffs w = SpectralCoeffs::zeros(n, L);
      const auto half = random_coefficients(rng, L / 2, 1.0);
      std::copy(half.begin(), half.end(), w.coeffs.begin());
      w.coeffs[0] += 3.0 * uniform(rng);
      std::vector<double> values = low.synthesize(w);
      for (double& v : values) v *= v;
      trial.coeffs = low.analyze(values);
      trial.values = SphereFunction{low.grid(), std::move(values)};
      return trial;
    }
    case TrialFamily::shifted: {
      SpectralCoeffs w = SpectralCoeffs::zeros(n, L);
      w.coeffs = random_coefficients(rng, L, 1.0 + uniform(rng));
      std::vector<double> values = low.synthesize(w);
      const double lowest = *std::min_element(values.begin(), values.end());
      const double lift = 2.0 * uniform(rng) * uniform(rng);
      for (double& v : values) v = v - lowest + lift;
      trial.coeffs = low.analyze(values);
      trial.values = SphereFunction{low.grid(), std::move(values)};
      return trial;
    }
    case TrialFamily::clamped: {
      SpectralCoeffs w = SpectralCoeffs::zeros(n, L);
      w.coeffs = random_coefficients(rng, L, 1.0);
      w.coeffs[0] += 3.0 * uniform(rng);
      std::vector<double> values = low.synthesize(w);
      for (double& v : values) v = std::max(v, 0.0);
      if (*std::max_element(values.begin(), values.end()) == 0.0) values.assign(values.size(), 1.0);
      trial.coeffs = full.analyze(values);
      trial.values = SphereFunction{low.grid(), std::move(values)};
      return trial;
    }
  }
  throw ConfigError("draw_trial: unknown family");
}

}  // namespace

InequalityReport verify_inequality(const ProblemParams& params, int trials, std::uint64_t seed, int L, int M) {
  if (trials < 0) throw ConfigError("verify_inequality: negative trial count");
  if (L < 2 || M < L + 1) throw ConfigError("verify_inequality: need 2 <= L < M");
  const ZonalGrid grid = make_grid(params.n(), M);
  const ZonalTransform low(grid, L);
  const ZonalTransform full(grid, M - 1);
  const double sharp = sharp_constant(params);
  const double area = surface_area(params.n());
  const double a = params.alpha();
  const double p_star = critical_power(params);

  std::mt19937_64 rng(seed);
  InequalityReport report;
  report.trials = trials;
  report.min_margin = std::numeric_limits<double>::infinity();
  report.min_holder_slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < trials; ++k) {
    const auto family = static_cast<TrialFamily>(k % 3);
    const Trial trial = draw_trial(family, rng, low, full, L);
    const double margin = sobolev_quotient(trial.coeffs, trial.values, params) - sharp;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_trial = k;
    }
    const double lower = std::pow(area, (a - 1.0) / (a + 1.0)) *
                         std::pow(lp_integral(grid, trial.values.values, a + 1.0), 2.0 / (a + 1.0));
    const double upper = std::pow(area, 2.0 * params.s() / params.n()) *
                         std::pow(lp_integral(grid, trial.values.values, p_star), 2.0 / p_star);
    const double slack = (upper - lower) / upper;
    report.min_holder_slack = std::min(report.min_holder_slack, slack);
    if (slack < -1e-12) ++report.holder_violations;
  }
  return report;
}

double constant_margin(const ProblemParams& params, int M) {
  const ZonalGrid grid = make_grid(params.n(), M);
  SpectralCoeffs c = SpectralCoeffs::zeros(params.n(), 0);
  const double value = feasible_constant(params.n(), params.s());
  c.coeffs[0] = value * std::sqrt(surface_area(params.n()));
  const SphereFunction v{grid, std::vector<double>(grid.nodes.size(), value)};
  return sobolev_quotient(c, v, params) - sharp_constant(params);
}

CoercivityReport coercivity_check(const ProblemParams& params, int trials, std::uint64_t seed, int L, int M) {
  if (trials < 1) throw ConfigError("coercivity_check: need at least one trial");
  const ZonalGrid grid = make_grid(params.n(), M);
  const ZonalTransform low(grid, L);
  const ZonalTransform full(grid, M - 1);
  const double p_star = critical_power(params);
  const double area_factor = std::pow(surface_area(params.n()), 2.0 * params.s() / params.n());

  std::mt19937_64 rng(seed);
  std::vector<double> forms;
  std::vector<double> objectives;
  for (int k = 0; k < trials; ++k) {
    Trial trial = draw_trial(static_cast<TrialFamily>(k % 3), rng, low, full, L);
    const double scale = std::pow(lp_integral(grid, trial.values.values, p_star), -1.0 / p_star);
    for (double& c : trial.coeffs.coeffs) c *= scale;
    forms.push_back(quadratic_form(trial.coeffs, params));
    objectives.push_back(perturbed_objective(trial.coeffs, params));
  }
  CoercivityReport report;
  report.c12 = std::max(0.0, -*std::min_element(forms.begin(), forms.end()) / area_factor);
  report.min_objective = *std::min_element(objectives.begin(), objectives.end());
  report.floor = -(report.c12 + params.epsilon() * params.q()) * area_factor;
  report.holds = report.min_objective >= report.floor;
  return report;
}

}  // namespace gjms
