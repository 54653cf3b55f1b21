#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "gjms/special_functions.hpp"
#include "gjms/sphere_spectral.hpp"

namespace gjms {

/// Q |S^n|^{(alpha-1)/(alpha+1)}.
double sharp_constant(const ProblemParams& params);

/// (1 - eps) Q |S^n|^{2s/n}, the value of the perturbed infimum.
double perturbed_constant(const ProblemParams& params);

/// |S^n|^{-(n-2s)/(2n)}: the constant with unit critical norm.
double feasible_constant(int n, double s);

/// sum_l (alpha_{2s,n}(l) - eps Q) c_l^2.
double perturbed_objective(const SpectralCoeffs& c, const ProblemParams& params);

/// Step and stopping settings for minimize.
struct Schedule {
  double initial_step = 1e-2;
  double backtrack = 0.5;
  double growth = 1.1;
  int growth_after = 10;
  double rel_tol = 1e-10;
  int max_iterations = 100000;
  /// Backtracking gives up below this step.
  double min_step = 1e-30;
  /// A gradient below this fraction of |c| counts as stationary.
  double stationary_gradient = 1e-8;
};

struct OptimizerState {
  SpectralCoeffs coeffs;
  double objective = 0.0;
  double step = 0.0;
  int iteration = 0;
  /// Objective after the initial projection, then after every accepted step.
  std::vector<double> history;
  bool converged = false;
  /// "converged", "stationary", "stalled" or "iteration_cap".
  std::string status;
  /// |integral v^{2n/(n-2s)} - 1| of the last projected grid function.
  double constraint_error = 0.0;
  /// Smallest value of the last projected grid function.
  double grid_min = 0.0;
  /// Largest constraint error seen over all accepted steps.
  double worst_constraint_error = 0.0;
  /// Preconditioned gradient norm at the final iterate.
  double gradient_norm = 0.0;

  /// Fraction of sum c_l^2 carried by l >= 1.
  double nonconstant_energy() const;
};

enum class InitKind { noisy_constant, pole_bubble, constant };

const char* init_name(InitKind kind);
InitKind parse_init(const std::string& name);

/// Initial data on the zonal grid with M nodes, analyzed to degree L.
///   noisy_constant: 1 + 10% random band-limited noise (seeded)
///   pole_bubble:    stereographic transfer of a b = 0.1 bubble, peaked at t = 1
///   constant:       the feasible constant
SpectralCoeffs make_init(InitKind kind, const ProblemParams& params, int L, int M, std::uint64_t seed);

/// Projected gradient descent of the perturbed objective over nonnegative
/// zonal functions with unit critical norm.
///
/// Each candidate is synthesized on the grid, clamped at zero, rescaled to
/// unit critical norm and analyzed back to degree L. The descent direction is
/// the objective gradient projected onto the tangent space of the constraint
/// and divided by alpha_{2s,n}(l). Requires critical alpha and 0 < eps < 1.
OptimizerState minimize(const ProblemParams& params, int L, int M, const SpectralCoeffs& init,
                        const Schedule& schedule = {});

/// Same, started from the noisy constant drawn with `seed`.
OptimizerState minimize(const ProblemParams& params, int L, int M, std::uint64_t seed,
                        const Schedule& schedule = {});

void to_json(nlohmann::json& j, const OptimizerState& state);

// ---------------------------------------------------------------------------
// Inequality checks

struct InequalityReport {
  int trials = 0;
  /// min over trials of quotient - sharp_constant.
  double min_margin = 0.0;
  int worst_trial = -1;
  /// Samples where |S|^{(a-1)/(a+1)} |v|_{a+1}^2 exceeded |S|^{2s/n} |v|_{p*}^2.
  int holder_violations = 0;
  /// min over trials of the relative Holder slack.
  double min_holder_slack = 0.0;
};

/// v P v / (integral v^{alpha+1})^{2/(alpha+1)}, no eps term.
double sobolev_quotient(const SpectralCoeffs& c, const SphereFunction& v, const ProblemParams& params);

/// Random nonnegative band-limited trial functions of degree <= L on M nodes.
/// Families rotate through: squares of random degree-L/2 functions, random
/// functions shifted to a zero minimum, and clamped random functions.
InequalityReport verify_inequality(const ProblemParams& params, int trials, std::uint64_t seed, int L = 24,
                                   int M = 96);

/// Margin of the feasible constant.
double constant_margin(const ProblemParams& params, int M = 96);

struct CoercivityReport {
  /// Measured lower constant: max(0, -min v P v / |S^n|^{2s/n}) over samples.
  double c12 = 0.0;
  double min_objective = 0.0;
  double floor = 0.0;  // -(c12 + eps Q) |S^n|^{2s/n}
  bool holds = false;
};

/// Perturbed objective of random nonnegative feasible functions against the
/// coercivity floor.
CoercivityReport coercivity_check(const ProblemParams& params, int trials, std::uint64_t seed, int L = 24,
                                  int M = 96);

}  // namespace gjms
