#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gjms/conformal.hpp"
#include "gjms/riesz.hpp"
#include "gjms/special_functions.hpp"

namespace gjms {

/// Margins below this (absolute) count as a failure of u_{x,lambda} <= u.
inline constexpr double kDominationSlack = 1e-12;

struct DominationResult {
  bool holds = true;
  double worst_margin = 0.0;  // min over samples of u(y) - u_{x,lambda}(y)
  Point worst_point;
  int samples = 0;
  /// Samples where the sign of the margin disagrees with the closed form.
  int sign_disagreements = 0;
};

/// Normalized bubble u(y) = (2/(1+|y|^2))^{(n-2s)/2} as a point function.
PointFunction standard_bubble(const ProblemParams& params);

/// Compares u with its Kelvin transform on |y - x| >= lambda.
///
/// Points are y = x + lambda (1 + tau) w: shells tau on a geometric ladder from
/// 1e-9 out to |y - x| ~ 1e3 (plus tau = 0), directions w = +-x/|x|, +-e_k and
/// seeded random unit vectors. `samples` is split evenly over the directions.
DominationResult check_domination(const Bubble& bubble, const InversionSpec& spec, const ProblemParams& params,
                                  int samples, std::uint64_t seed);

/// Whether sign(u(y) - u_{x,lambda}(y)) matches
/// sign((lambda^2 - |y-x|^2)(lambda^2 - 1 - |x|^2)); margins within 1e-12 of
/// zero agree with anything.
bool domination_equivalence_residual(std::span<const double> x, double lambda, std::span<const double> y,
                                     const ProblemParams& params);

struct ThresholdResult {
  Point x;
  double lambda_bar_numeric = 0.0;
  double lambda_bar_closed_form = 0.0;
  double abs_gap = 0.0;
  int samples_used = 0;
  /// Coarse scan of the predicate in lambda found a true after a false.
  bool monotone = true;
  int bisection_steps = 0;
};

struct ThresholdOptions {
  int samples = 600;
  std::uint64_t seed = 0;
  /// Points of the coarse monotonicity scan over (0, 2 sqrt(1+|x|^2)].
  int scan_points = 40;
};

/// Largest lambda with u_{x,lambda} <= u, by bisection on (0, 2 sqrt(1+|x|^2)].
/// Requires x != 0 and tol > 0.
ThresholdResult lambda_bar(std::span<const double> x, const ProblemParams& params, double tol,
                           const ThresholdOptions& options = {});

/// integral over lambda <= |z-x| <= outer of K(x, lambda; y, z) dz.
///
/// y is put on an axis through x at distance d = |y - x|, which reduces the
/// integral to rho = |z - x| and the angle phi between z - x and the axis.
/// Refines until two levels agree to options.rel_tol.
double kernel_ring_integral(const InversionSpec& spec, std::span<const double> y, double outer,
                            const ProblemParams& params, const RieszOptions& options = {});

/// Same integral at one refinement level.
double kernel_ring_integral_at_level(int n, double lambda, double d, double outer, double kappa, int level);

std::string threshold_csv(std::span<const ThresholdResult> results);

}  // namespace gjms
