#include "gjms/conformal.hpp"

#include <cmath>
#include <string>

#include "gjms/error.hpp"

namespace gjms {

namespace {

void require_same_dimension(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw ConfigError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()) + ")");
  }
}

// |xi - x|^2, rejecting xi within the guard distance of x.
double guarded_distance_squared(std::span<const double> xi, std::span<const double> x, const char* what) {
  require_same_dimension(xi, x, what);
  const double d2 = distance_squared(xi, x);
  if (d2 < kSingularGuard * kSingularGuard) {
    throw SingularInputError(std::string(what) + ": point coincides with the inversion center");
  }
  return d2;
}

double kappa_of(const ProblemParams& params) { return params.n() - 2.0 * params.s(); }

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm_squared(std::span<const double> a) { return dot(a, a); }

double distance_squared(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(distance_squared(a, b));
}

// ---------------------------------------------------------------------------

Bubble Bubble::standard(int n) { return Bubble{1.0, 1.0, Point(static_cast<std::size_t>(n), 0.0)}; }

double Bubble::operator()(const ProblemParams& params, std::span<const double> x) const {
  require_same_dimension(x, center, "Bubble");
  return radial(params, distance(x, center));
}

double Bubble::radial(const ProblemParams& params, double r) const {
  if (!(amplitude > 0.0) || !(scale > 0.0)) throw ConfigError("Bubble: amplitude and scale must be positive");
  return amplitude * std::pow(2.0 / (scale * scale + r * r), params.half_order_gap());
}

InversionSpec InversionSpec::make(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("InversionSpec: radius must be positive, got " + std::to_string(radius));
  }
  if (center.empty()) throw ConfigError("InversionSpec: empty center");
  return InversionSpec{std::move(center), radius};
}

// ---------------------------------------------------------------------------

double stereo_factor(const ProblemParams& params, double r) {
  return std::pow(2.0 / (1.0 + r * r), params.half_order_gap());
}

double stereo_transfer(double v_const, const ProblemParams& params, std::span<const double> x) {
  return stereo_factor(params, std::sqrt(norm_squared(x))) * v_const;
}

double stereo_polar_radius(double r) {
  const double r2 = r * r;
  return (1.0 - r2) / (1.0 + r2);
}

double stereo_polar(std::span<const double> x) { return stereo_polar_radius(std::sqrt(norm_squared(x))); }

// ---------------------------------------------------------------------------

Point invert_point(const InversionSpec& spec, std::span<const double> xi) {
  const double d2 = guarded_distance_squared(xi, spec.center, "invert_point");
  const double factor = spec.radius * spec.radius / d2;
  Point out(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out[i] = spec.center[i] + factor * (xi[i] - spec.center[i]);
  return out;
}

double kelvin_transform(const PointFunction& u, const InversionSpec& spec, const ProblemParams& params,
                        std::span<const double> xi) {
  const double d = std::sqrt(guarded_distance_squared(xi, spec.center, "kelvin_transform"));
  const Point image = invert_point(spec, xi);
  return std::pow(spec.radius / d, kappa_of(params)) * u(image);
}

double kelvin_distance_identity(const InversionSpec& spec, std::span<const double> xi,
                                std::span<const double> z) {
  const double xi_x = std::sqrt(guarded_distance_squared(xi, spec.center, "kelvin_distance_identity"));
  const double z_x = std::sqrt(guarded_distance_squared(z, spec.center, "kelvin_distance_identity"));
  const Point xi_star = invert_point(spec, xi);
  const Point z_star = invert_point(spec, z);
  return z_x * xi_x * distance(xi_star, z_star) - spec.radius * spec.radius * distance(xi, z);
}

double weight_ratio_L(const InversionSpec& spec, std::span<const double> z) {
  const double z_x2 = guarded_distance_squared(z, spec.center, "weight_ratio_L");
  const Point z_star = invert_point(spec, z);
  const double l2 = spec.radius * spec.radius;
  return l2 * (1.0 + norm_squared(z)) / (z_x2 * (1.0 + norm_squared(z_star)));
}

FactorizationCheck weight_ratio_factorization(const InversionSpec& spec, std::span<const double> z) {
  const double z_x2 = guarded_distance_squared(z, spec.center, "weight_ratio_factorization");
  const Point z_star = invert_point(spec, z);
  const double l2 = spec.radius * spec.radius;
  FactorizationCheck check;
  check.lhs = z_x2 * (1.0 + norm_squared(z_star)) - l2 * (1.0 + norm_squared(z));
  check.rhs = (z_x2 - l2) * (1.0 + norm_squared(spec.center) - l2);
  return check;
}

// ---------------------------------------------------------------------------

KernelForms kernel_forms(const InversionSpec& spec, std::span<const double> xi, std::span<const double> z,
                         const ProblemParams& params) {
  const double xi_x = std::sqrt(guarded_distance_squared(xi, spec.center, "kernel_forms"));
  const double z_x = std::sqrt(guarded_distance_squared(z, spec.center, "kernel_forms"));
  const double xi_z = distance(xi, z);
  if (xi_z < kSingularGuard) throw SingularInputError("kernel_forms: xi coincides with z");
  const double kappa = kappa_of(params);
  const double lambda = spec.radius;
  const double direct = std::pow(xi_z, -kappa);
  KernelForms forms;
  forms.k1 = direct - std::pow(lambda / xi_x, kappa) * std::pow(distance(invert_point(spec, xi), z), -kappa);
  forms.k2 = direct - std::pow(lambda / z_x, kappa) * std::pow(distance(xi, invert_point(spec, z)), -kappa);
  return forms;
}

double kernel_from_distances(double xi_z2, double xi_x2, double z_x2, double lambda, double kappa) {
  const double l2 = lambda * lambda;
  // (|xi-x|/l)^2 |xi^{x,l} - z|^2 = |xi - z|^2 + delta
  const double delta = (z_x2 - l2) * (xi_x2 - l2) / l2;
  return -std::pow(xi_z2, -0.5 * kappa) * std::expm1(-0.5 * kappa * std::log1p(delta / xi_z2));
}

double kernel_K(const InversionSpec& spec, std::span<const double> xi, std::span<const double> z,
                const ProblemParams& params) {
  const double xi_x2 = guarded_distance_squared(xi, spec.center, "kernel_K");
  const double z_x2 = guarded_distance_squared(z, spec.center, "kernel_K");
  const double xi_z2 = distance_squared(xi, z);
  if (xi_z2 < kSingularGuard * kSingularGuard) throw SingularInputError("kernel_K: xi coincides with z");
  return kernel_from_distances(xi_z2, xi_x2, z_x2, spec.radius, kappa_of(params));
}

FactorizationCheck kernel_positivity_factorization(const InversionSpec& spec, std::span<const double> xi,
                                                   std::span<const double> z) {
  const double xi_x2 = guarded_distance_squared(xi, spec.center, "kernel_positivity_factorization");
  const double z_x2 = guarded_distance_squared(z, spec.center, "kernel_positivity_factorization");
  const double l2 = spec.radius * spec.radius;
  FactorizationCheck check;
  check.lhs = xi_x2 / l2 * distance_squared(invert_point(spec, xi), z) - distance_squared(xi, z);
  check.rhs = (z_x2 - l2) * (xi_x2 - l2) / l2;
  return check;
}

double inversion_jacobian(const InversionSpec& spec, std::span<const double> z) {
  const double z_x = std::sqrt(guarded_distance_squared(z, spec.center, "inversion_jacobian"));
  return std::pow(spec.radius / z_x, 2.0 * static_cast<double>(z.size()));
}

}  // namespace gjms
