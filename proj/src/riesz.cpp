#include "gjms/riesz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <numbers>
#include <string>

#include "gjms/csv.hpp"
#include "gjms/error.hpp"
#include "gjms/quadrature.hpp"
#include "gjms/sphere_spectral.hpp"

namespace gjms {

namespace {

constexpr double kPi = std::numbers::pi;

// Dyadic grading toward the kernel singularity stops at this relative width.
constexpr double kSingularGrading = 1e-10;
// Far-field panels double in width; give up past this radius.
constexpr double kMaxRadius = 1e30;

const QuadratureRule& rule_of_order(int order) {
  static const QuadratureRule r10 = gauss_legendre(10);
  static const QuadratureRule r20 = gauss_legendre(20);
  if (order == 10) return r10;
  if (order == 20) return r20;
  throw ConfigError("rule_of_order: unsupported order " + std::to_string(order));
}

double int_power(double x, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x;
  return out;
}

// Ascending, duplicate-free union of two sorted break lists.
std::vector<double> merge_breaks(std::vector<double> a, std::span<const double> extra, double lo, double hi) {
  for (double b : extra) {
    if (b > lo && b < hi) a.push_back(b);
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Breaks on [0, 2r] graded toward the singular radius r from both sides.
std::vector<double> near_field_breaks(double r) {
  if (r == 0.0) return graded_toward_lower(0.0, 1.0, 1e-6);
  // Dyadic panels from the origin, so profiles concentrated near 0 are resolved
  // even when r is large.
  std::vector<double> breaks = graded_toward_lower(0.0, 0.5 * r, 0.5);
  breaks.pop_back();
  const double min_width = kSingularGrading * r;
  const auto below = graded_toward_upper(0.5 * r, r, min_width);
  const auto above = graded_toward_lower(r, 2.0 * r, min_width);
  breaks.insert(breaks.end(), below.begin(), below.end());
  breaks.insert(breaks.end(), above.begin() + 1, above.end());
  return breaks;
}

// One-dimensional composite rule at a refinement level.
double line_integral(const std::function<double(double)>& f, std::span<const double> breaks, int level) {
  const LevelSpec spec = level_spec(level);
  const std::vector<double> fine = subdivide(breaks, spec.split);
  return integrate_panels(f, fine, rule_of_order(spec.order));
}

}  // namespace

// ---------------------------------------------------------------------------

LevelSpec level_spec(int level) {
  if (level < 0) throw ConfigError("level_spec: negative level");
  if (level == 0) return {10, 1};
  return {20, 1 << (level - 1)};
}

double axial_panel(int n, double lo, double hi, const AxialIntegrand& g, const PhiScale& phi_scale,
                   int level) {
  if (n < 2) throw ConfigError("axial_panel: need n >= 2");
  const LevelSpec spec = level_spec(level);
  const QuadratureRule& rule = rule_of_order(spec.order);
  const double sphere = surface_area(n - 2);
  const double width = (hi - lo) / spec.split;
  double total = 0.0;
  for (int part = 0; part < spec.split; ++part) {
    const double a = lo + part * width;
    const double half = 0.5 * width;
    const double mid = a + half;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double rho = mid + half * rule.nodes[k];
      const double min_width = std::max(phi_scale(rho), 1e-300);
      const std::vector<double> phi_breaks = subdivide(graded_toward_lower(0.0, kPi, min_width), spec.split);
      const double inner = integrate_panels(
          [&](double phi) { return g(rho, phi) * int_power(std::sin(phi), n - 2); }, phi_breaks, rule);
      panel += rule.weights[k] * int_power(rho, n - 1) * inner;
    }
    total += half * panel;
  }
  return sphere * total;
}

double axial_integral(int n, std::span<const double> rho_breaks, const AxialIntegrand& g,
                      const PhiScale& phi_scale, int level) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < rho_breaks.size(); ++i) {
    if (rho_breaks[i + 1] > rho_breaks[i]) total += axial_panel(n, rho_breaks[i], rho_breaks[i + 1], g, phi_scale, level);
  }
  return total;
}

// ---------------------------------------------------------------------------

double radial_kernel_integral_at_level(const RadialProfile& f, int n, double kappa, double r, int level,
                                       const RieszOptions& options) {
  if (n < 2) throw ConfigError("radial_kernel_integral: need n >= 2");
  if (!(kappa > 0.0) || !(kappa < n)) {
    throw ConfigError("radial_kernel_integral: kernel exponent must lie in (0, n), got " + std::to_string(kappa));
  }
  if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("radial_kernel_integral: radius must be >= 0");
  if (!f.value) throw ConfigError("radial_kernel_integral: empty profile");

  const double support = f.support_radius;
  const bool compact = std::isfinite(support);
  if (!compact) {
    const double q = f.decay_exponent + kappa - (n - 1.0);
    if (!(q > 1.0)) {
      throw ConfigError("radial_kernel_integral: decay exponent " + std::to_string(f.decay_exponent) +
                        " too slow for a convergent potential");
    }
  }

  std::function<double(double, double)> integrand;
  PhiScale phi_scale;
  double cached_rho = -1.0;
  double cached_f = 0.0;
  const auto profile_at = [&](double rho) {
    if (rho != cached_rho) {
      cached_rho = rho;
      cached_f = (compact && rho > support) ? 0.0 : f.value(rho);
    }
    return cached_f;
  };

  // Integral over one rho-interval.
  std::function<double(double, double)> panel;
  if (r == 0.0) {
    panel = [&](double lo, double hi) {
      const std::array<double, 2> br{lo, hi};
      return surface_area(n - 1) *
             line_integral([&](double rho) { return std::pow(rho, n - 1 - kappa) * profile_at(rho); }, br, level);
    };
  } else {
    integrand = [&, r](double rho, double phi) {
      const double fr = profile_at(rho);
      if (fr == 0.0) return 0.0;
      const double sh = std::sin(0.5 * phi);
      const double dist2 = (rho - r) * (rho - r) + 4.0 * r * rho * sh * sh;
      return fr * std::pow(dist2, -0.5 * kappa);
    };
    phi_scale = [r](double rho) { return 0.25 * std::abs(rho - r) / std::sqrt(r * rho); };
    panel = [&](double lo, double hi) { return axial_panel(n, lo, hi, integrand, phi_scale, level); };
  }

  // Near field [0, max(2r, 1)].
  std::vector<double> breaks = near_field_breaks(r);
  double far_start = breaks.back();
  if (far_start < 1.0) {
    breaks.push_back(1.0);
    far_start = 1.0;
  }
  breaks = merge_breaks(std::move(breaks), f.breakpoints, 0.0, far_start);
  if (compact) {
    std::vector<double> clipped;
    for (double b : breaks) {
      if (b < support) clipped.push_back(b);
    }
    clipped.push_back(std::min(support, far_start));
    breaks = std::move(clipped);
  }

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) total += panel(breaks[i], breaks[i + 1]);
  if (compact && support <= far_start) return total;

  double last_break = 0.0;
  for (double b : f.breakpoints) last_break = std::max(last_break, b);

  // Far field: doubling panels until the support ends or the tail is negligible.
  double lo = far_start;
  while (true) {
    double hi = 2.0 * lo;
    if (compact) hi = std::min(hi, support);
    std::vector<double> piece = merge_breaks({lo, hi}, f.breakpoints, lo, hi);
    for (std::size_t i = 0; i + 1 < piece.size(); ++i) total += panel(piece[i], piece[i + 1]);
    lo = hi;
    if (compact) {
      if (lo >= support) return total;
      continue;
    }
    if (lo >= last_break) {
      // g(rho) = |S^{n-1}| rho^{n-1-kappa} F(rho) ~ rho^{-q}; tail ~ g(R) R / (q - 1).
      // Faster-than-power decay: g(R) R still bounds the tail.
      const double q = std::isfinite(f.decay_exponent) ? f.decay_exponent + kappa - (n - 1.0) : 2.0;
      const double tail = surface_area(n - 1) * std::pow(lo, n - kappa) * std::abs(f.value(lo)) / (q - 1.0);
      if (tail <= options.tail_fraction * std::abs(total)) return total;
    }
    if (lo > kMaxRadius) {
      throw ConvergenceError("radial_kernel_integral: tail did not decay by radius " + std::to_string(lo));
    }
  }
}

double radial_kernel_integral(const RadialProfile& f, int n, double kappa, double r, const RieszOptions& options) {
  double previous = radial_kernel_integral_at_level(f, n, kappa, r, 0, options);
  for (int level = 1; level <= options.max_level; ++level) {
    const double current = radial_kernel_integral_at_level(f, n, kappa, r, level, options);
    if (std::abs(current - previous) <= options.rel_tol * std::abs(current)) return current;
    previous = current;
  }
  throw ConvergenceError("radial_kernel_integral: no agreement to " + std::to_string(options.rel_tol) +
                         " after level " + std::to_string(options.max_level) + " at r=" + std::to_string(r));
}

double riesz_potential_radial(const RadialProfile& f, int n, double s, double r, const RieszOptions& options) {
  if (!(s > 0.0) || !(2.0 * s < n)) {
    throw ConfigError("riesz_potential_radial: need 0 < s < n/2, got s=" + std::to_string(s));
  }
  return radial_kernel_integral(f, n, n - 2.0 * s, r, options);
}

double ring_riesz_integral(int n, double kappa, double d, double lambda, double outer, const RieszOptions& options) {
  if (!(lambda > 0.0) || !(outer > lambda)) throw ConfigError("ring_riesz_integral: need 0 < lambda < outer");
  RadialProfile shell;
  shell.value = [lambda, outer](double rho) { return (rho >= lambda && rho <= outer) ? 1.0 : 0.0; };
  shell.support_radius = outer;
  shell.breakpoints = {lambda};
  return radial_kernel_integral(shell, n, kappa, d, options);
}

// ---------------------------------------------------------------------------

double weight_F(double u_val, double y_norm, const ProblemParams& params) {
  const double alpha = params.alpha();
  const bool integer_alpha = alpha == std::floor(alpha);
  if (!integer_alpha && !(u_val > 0.0)) {
    throw ConfigError("weight_F: u must be positive for non-integer alpha, got " + std::to_string(u_val));
  }
  const double w = 2.0 / (1.0 + y_norm * y_norm);
  const double power = integer_alpha ? std::pow(u_val, alpha) : std::exp(alpha * std::log(u_val));
  const double linear = params.epsilon() == 0.0 ? 0.0 : params.epsilon() * std::pow(w, 2.0 * params.s()) * u_val;
  return linear + std::pow(w, params.sigma()) * power;
}

RadialProfile weight_profile(const ProblemParams& params, const Bubble& bubble) {
  for (double c : bubble.center) {
    if (c != 0.0) throw ConfigError("weight_profile: bubble must be centered at the origin");
  }
  RadialProfile profile;
  profile.value = [params, bubble](double rho) { return weight_F(bubble.radial(params, rho), rho, params); };
  profile.decay_exponent = params.n() + 2.0 * params.s();
  return profile;
}

double ResidualReport::rel_error_at(std::size_t k) const { return std::abs(lhs[k] - rhs[k]) / std::abs(lhs[k]); }

ResidualReport verify_integral_equation(const ProblemParams& params, const Bubble& bubble,
                                        std::span<const double> radii, const RieszOptions& options) {
  if (bubble.center.size() != static_cast<std::size_t>(params.n())) {
    throw ConfigError("verify_integral_equation: bubble center must have dimension n");
  }
  const RadialProfile profile = weight_profile(params, bubble);
  const double gamma = params.gamma();

  std::vector<std::future<double>> jobs;
  jobs.reserve(radii.size());
  for (double r : radii) {
    if (!(r >= 0.0)) throw ConfigError("verify_integral_equation: radii must be non-negative");
    jobs.push_back(std::async(std::launch::async, [&profile, &params, &options, r] {
      return riesz_potential_radial(profile, params.n(), params.s(), r, options);
    }));
  }

  ResidualReport report;
  report.radii.assign(radii.begin(), radii.end());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    report.lhs.push_back(bubble.radial(params, radii[k]));
    report.rhs.push_back(gamma * jobs[k].get());
    report.rel_error = std::max(report.rel_error, report.rel_error_at(k));
  }
  return report;
}

double constant_solution_amplitude(const ProblemParams& params) {
  const double eps = params.epsilon();
  if (eps == 0.0) return 1.0;
  if (params.alpha() == 1.0) throw ConfigError("constant_solution_amplitude: alpha = 1 has no constant solution");
  if (!(eps < 1.0)) throw ConfigError("constant_solution_amplitude: need epsilon < 1");
  return std::pow(1.0 - eps, 1.0 / (params.alpha() - 1.0));
}

std::vector<DecaySample> decay_profile(const ProblemParams& params, const Bubble& bubble,
                                       std::span<const double> radii) {
  if (radii.empty() || radii.back() < 1e2) throw ConfigError("decay_profile: last radius must be >= 100");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] > radii[k - 1])) throw ConfigError("decay_profile: radii must increase");
  }
  const double kappa = 2.0 * params.half_order_gap();
  std::vector<DecaySample> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back({r, bubble.radial(params, r) * std::pow(r, kappa)});
  return out;
}

std::string residual_report_csv(const ResidualReport& report) {
  CsvTable table({"r", "lhs", "rhs", "rel_error"});
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    table.add_numeric_row({report.radii[k], report.lhs[k], report.rhs[k], report.rel_error_at(k)});
  }
  return table.str();
}

void to_json(nlohmann::json& j, const ResidualReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < report.radii.size(); ++k) {
    rows.push_back({{"r", report.radii[k]},
                    {"lhs", report.lhs[k]},
                    {"rhs", report.rhs[k]},
                    {"rel_error", report.rel_error_at(k)}});
  }
  j = nlohmann::json{{"rows", rows}, {"max_rel_error", report.rel_error}};
}

}  // namespace gjms
