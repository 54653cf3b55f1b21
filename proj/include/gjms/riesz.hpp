#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gjms/conformal.hpp"
#include "gjms/special_functions.hpp"

namespace gjms {

/// Radial representative f(|y|) of a function on R^n.
struct RadialProfile {
  std::function<double(double)> value;
  /// Expected power-law decay f(r) ~ r^{-p} at infinity; drives the tail cut.
  double decay_exponent = std::numeric_limits<double>::infinity();
  /// f vanishes beyond this radius.
  double support_radius = std::numeric_limits<double>::infinity();
  /// Radii where f is not smooth (jumps, kinks); used as panel breaks.
  std::vector<double> breakpoints;
};

struct RieszOptions {
  double rel_tol = 1e-7;
  /// Relative size of the discarded tail, bounded through the decay hint.
  double tail_fraction = 1e-8;
  int max_level = 4;
};

// ---------------------------------------------------------------------------
// Axially symmetric quadrature

/// Refinement level -> (Gauss-Legendre order, panel split factor).
/// Level 0 is order 10, level 1 is order 20, each further level halves panels.
struct LevelSpec {
  int order;
  int split;
};
LevelSpec level_spec(int level);

/// Integrand g(rho, phi) over an axially symmetric region of R^n, where rho is
/// the distance from the axis origin and phi the angle to the axis.
using AxialIntegrand = std::function<double(double rho, double phi)>;
/// Smallest phi-panel width needed at a given rho (near-singular peak at phi=0).
using PhiScale = std::function<double(double rho)>;

/// integral over rho in [lo, hi] of |S^{n-2}| rho^{n-1} integral_0^pi g sin^{n-2}(phi) dphi.
double axial_panel(int n, double lo, double hi, const AxialIntegrand& g, const PhiScale& phi_scale,
                   int level);

/// Sum of axial_panel over consecutive breaks.
double axial_integral(int n, std::span<const double> rho_breaks, const AxialIntegrand& g,
                      const PhiScale& phi_scale, int level);

// ---------------------------------------------------------------------------
// Riesz potentials

/// integral over R^n of |x-y|^{-kappa} F(|y|) dy at |x| = r, 0 < kappa < n, at
/// one fixed quadrature level.
double radial_kernel_integral_at_level(const RadialProfile& f, int n, double kappa, double r, int level,
                                       const RieszOptions& options = {});

/// Same, refined until two successive levels agree to options.rel_tol.
/// Throws ConvergenceError when max_level is reached first.
double radial_kernel_integral(const RadialProfile& f, int n, double kappa, double r,
                              const RieszOptions& options = {});

/// integral over R^n of |x-y|^{2s-n} F(|y|) dy at |x| = r. Rejects s >= n/2.
double riesz_potential_radial(const RadialProfile& f, int n, double s, double r,
                              const RieszOptions& options = {});

/// integral over lambda <= |z-x| <= outer of |y-z|^{-kappa} dz, with
/// d = |y - x|, for 0 < kappa < n.
double ring_riesz_integral(int n, double kappa, double d, double lambda, double outer,
                           const RieszOptions& options = {});

/// eps (2/(1+|y|^2))^{2s} u + (2/(1+|y|^2))^sigma u^alpha.
double weight_F(double u_val, double y_norm, const ProblemParams& params);

/// Radial profile of F_{eps,u} for a bubble centered at the origin.
RadialProfile weight_profile(const ProblemParams& params, const Bubble& bubble);

struct ResidualReport {
  std::vector<double> radii;
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// max over radii of |lhs - rhs| / lhs.
  double rel_error = 0.0;

  double rel_error_at(std::size_t k) const;
};

/// u(r) against gamma * I[F_{eps,u}](r) for a bubble centered at the origin.
/// Radii are evaluated concurrently.
ResidualReport verify_integral_equation(const ProblemParams& params, const Bubble& bubble,
                                        std::span<const double> radii, const RieszOptions& options = {});

/// Amplitude of the constant sphere solution transferred to R^n:
/// (1-eps)^{1/(alpha-1)}, or 1 at eps = 0.
double constant_solution_amplitude(const ProblemParams& params);

struct DecaySample {
  double r;
  double scaled;  // u(r) r^{n-2s}
};

/// u(r) r^{n-2s}, which tends to a 2^{(n-2s)/2} for every scale b.
std::vector<DecaySample> decay_profile(const ProblemParams& params, const Bubble& bubble,
                                       std::span<const double> radii);

std::string residual_report_csv(const ResidualReport& report);
void to_json(nlohmann::json& j, const ResidualReport& report);

}  // namespace gjms
