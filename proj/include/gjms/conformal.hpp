#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gjms/special_functions.hpp"

namespace gjms {

using Point = std::vector<double>;
using PointFunction = std::function<double(std::span<const double>)>;

/// Inputs closer than this to an excluded point are rejected.
inline constexpr double kSingularGuard = 1e-8;

double dot(std::span<const double> a, std::span<const double> b);
double norm_squared(std::span<const double> a);
double distance_squared(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// a (2 / (b^2 + |x - x0|^2))^{(n-2s)/2}.
struct Bubble {
  double amplitude = 1.0;
  double scale = 1.0;
  Point center;

  /// a = b = 1 centered at the origin of R^n.
  static Bubble standard(int n);

  double operator()(const ProblemParams& params, std::span<const double> x) const;
  /// Value at distance r from the center.
  double radial(const ProblemParams& params, double r) const;
};

/// Sphere of inversion: center x, radius lambda > 0.
struct InversionSpec {
  Point center;
  double radius = 1.0;

  static InversionSpec make(Point center, double radius);
  int dimension() const { return static_cast<int>(center.size()); }
};

/// Pullback of the constant v_const under stereographic projection:
/// (2/(1+|x|^2))^{(n-2s)/2} v_const.
double stereo_transfer(double v_const, const ProblemParams& params, std::span<const double> x);

/// Polar coordinate t = cos(theta) on S^n of the point projecting to x.
/// The origin maps to t = 1.
double stereo_polar(std::span<const double> x);
double stereo_polar_radius(double r);

/// Conformal factor (2/(1+r^2))^{(n-2s)/2} that carries a sphere function to R^n.
double stereo_factor(const ProblemParams& params, double r);

/// x + lambda^2 (xi - x) / |xi - x|^2.
Point invert_point(const InversionSpec& spec, std::span<const double> xi);

/// (lambda/|xi - x|)^{n-2s} u(xi^{x,lambda}).
double kelvin_transform(const PointFunction& u, const InversionSpec& spec, const ProblemParams& params,
                        std::span<const double> xi);

/// |z-x| |xi-x| |xi^{x,l} - z^{x,l}| - lambda^2 |xi - z|.
double kelvin_distance_identity(const InversionSpec& spec, std::span<const double> xi,
                                std::span<const double> z);

/// lambda^2 (1+|z|^2) / (|z-x|^2 (1+|z^{x,l}|^2)).
double weight_ratio_L(const InversionSpec& spec, std::span<const double> z);

struct FactorizationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return lhs - rhs; }
};

/// |z-x|^2 (1+|z^{x,l}|^2) - lambda^2 (1+|z|^2) against
/// (|z-x|^2 - lambda^2)(1+|x|^2 - lambda^2).
FactorizationCheck weight_ratio_factorization(const InversionSpec& spec, std::span<const double> z);

struct KernelForms {
  double k1 = 0.0;
  double k2 = 0.0;
};

/// The two closed forms of the moving-spheres kernel, evaluated literally:
///   k1 = |xi-z|^{-k} - (lambda/|xi-x|)^k |xi^{x,l} - z|^{-k}
///   k2 = |xi-z|^{-k} - (lambda/|z-x|)^k |xi - z^{x,l}|^{-k}
/// with k = n - 2s.
KernelForms kernel_forms(const InversionSpec& spec, std::span<const double> xi, std::span<const double> z,
                         const ProblemParams& params);

/// K(x, lambda; xi, z), computed from the positivity factorization so that it
/// is exactly zero on |xi - x| = lambda and keeps full relative accuracy when
/// the two terms nearly cancel.
double kernel_K(const InversionSpec& spec, std::span<const double> xi, std::span<const double> z,
                const ProblemParams& params);

/// Same kernel from the squared distances |xi-z|^2, |xi-x|^2, |z-x|^2.
/// No singularity guards; used inside quadrature loops.
double kernel_from_distances(double xi_z2, double xi_x2, double z_x2, double lambda, double kappa);

/// (|xi-x|/lambda)^2 |xi^{x,l} - z|^2 - |xi-z|^2 against
/// (|z-x|^2 - lambda^2)(|xi-x|^2 - lambda^2)/lambda^2.
FactorizationCheck kernel_positivity_factorization(const InversionSpec& spec, std::span<const double> xi,
                                                   std::span<const double> z);

/// (lambda/|z-x|)^{2n}, the Jacobian of z -> z^{x,lambda}.
double inversion_jacobian(const InversionSpec& spec, std::span<const double> z);

}  // namespace gjms
