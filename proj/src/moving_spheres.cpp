#include "gjms/moving_spheres.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "gjms/csv.hpp"
#include "gjms/error.hpp"
#include "gjms/quadrature.hpp"

namespace gjms {

namespace {

constexpr double kInnermostShell = 1e-9;
constexpr double kOutermostRadius = 1e3;
constexpr int kRandomDirections = 4;

std::vector<Point> sample_directions(std::span<const double> x, std::mt19937_64& rng) {
  const std::size_t n = x.size();
  std::vector<Point> dirs;
  for (std::size_t k = 0; k < n; ++k) {
    Point e(n, 0.0);
    e[k] = 1.0;
    dirs.push_back(e);
    e[k] = -1.0;
    dirs.push_back(e);
  }
  const double xn = std::sqrt(norm_squared(x));
  if (xn > 0.0) {
    Point u(x.begin(), x.end());
    for (double& c : u) c /= xn;
    dirs.push_back(u);
    for (double& c : u) c = -c;
    dirs.push_back(u);
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int k = 0; k < kRandomDirections; ++k) {
    Point w(n);
    double len = 0.0;
    do {
      for (double& c : w) c = normal(rng);
      len = std::sqrt(norm_squared(w));
    } while (len < 1e-3);
    for (double& c : w) c /= len;
    dirs.push_back(std::move(w));
  }
  return dirs;
}

// tau = 0 followed by a geometric ladder from 1e-9 up to tau_max.
std::vector<double> shell_ladder(int count, double tau_max) {
  std::vector<double> taus{0.0};
  if (count <= 1) return taus;
  const double lo = std::log(kInnermostShell);
  const double hi = std::log(std::max(tau_max, 10.0 * kInnermostShell));
  for (int k = 0; k < count - 1; ++k) {
    const double f = count == 2 ? 1.0 : static_cast<double>(k) / (count - 2);
    taus.push_back(std::exp(lo + f * (hi - lo)));
  }
  return taus;
}

bool is_standard(const Bubble& bubble) {
  if (bubble.amplitude != 1.0 || bubble.scale != 1.0) return false;
  return std::all_of(bubble.center.begin(), bubble.center.end(), [](double c) { return c == 0.0; });
}

void append(std::vector<double>& out, const std::vector<double>& piece) {
  if (piece.empty()) return;
  const std::size_t skip = (!out.empty() && out.back() == piece.front()) ? 1 : 0;
  out.insert(out.end(), piece.begin() + static_cast<std::ptrdiff_t>(skip), piece.end());
}

}  // namespace

PointFunction standard_bubble(const ProblemParams& params) {
  const double exponent = params.half_order_gap();
  return [exponent](std::span<const double> y) { return std::pow(2.0 / (1.0 + norm_squared(y)), exponent); };
}

DominationResult check_domination(const Bubble& bubble, const InversionSpec& spec, const ProblemParams& params,
                                  int samples, std::uint64_t seed) {
  if (spec.dimension() != params.n() || bubble.center.size() != spec.center.size()) {
    throw ConfigError("check_domination: dimension mismatch");
  }
  if (samples < 1) throw ConfigError("check_domination: need at least one sample");
  std::mt19937_64 rng(seed);
  const std::vector<Point> dirs = sample_directions(spec.center, rng);
  const int per_direction = std::max(2, samples / static_cast<int>(dirs.size()));
  const double lambda = spec.radius;
  const std::vector<double> taus = shell_ladder(per_direction, kOutermostRadius / lambda - 1.0);
  const bool closed_form = is_standard(bubble);

  const PointFunction u = [&bubble, &params](std::span<const double> y) { return bubble(params, y); };
  DominationResult result;
  result.worst_margin = std::numeric_limits<double>::infinity();
  Point y(spec.center.size());
  for (const Point& w : dirs) {
    for (double tau : taus) {
      const double radius = lambda * (1.0 + tau);
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = spec.center[i] + radius * w[i];
      const double margin = u(y) - kelvin_transform(u, spec, params, y);
      ++result.samples;
      if (margin < result.worst_margin) {
        result.worst_margin = margin;
        result.worst_point = y;
      }
      if (margin < -kDominationSlack) result.holds = false;
      if (closed_form && !domination_equivalence_residual(spec.center, lambda, y, params)) {
        ++result.sign_disagreements;
      }
    }
  }
  return result;
}

bool domination_equivalence_residual(std::span<const double> x, double lambda, std::span<const double> y,
                                     const ProblemParams& params) {
  const InversionSpec spec = InversionSpec::make(Point(x.begin(), x.end()), lambda);
  const PointFunction u = standard_bubble(params);
  const double margin = u(y) - kelvin_transform(u, spec, params, y);
  if (std::abs(margin) <= kDominationSlack) return true;
  const double l2 = lambda * lambda;
  const double predicted = (l2 - distance_squared(y, x)) * (l2 - 1.0 - norm_squared(x));
  if (predicted == 0.0) return false;
  return (margin > 0.0) == (predicted > 0.0);
}

ThresholdResult lambda_bar(std::span<const double> x, const ProblemParams& params, double tol,
                           const ThresholdOptions& options) {
  if (!(tol > 0.0)) throw ConfigError("lambda_bar: tolerance must be positive");
  if (x.size() != static_cast<std::size_t>(params.n())) throw ConfigError("lambda_bar: x must have dimension n");
  if (norm_squared(x) == 0.0) throw ConfigError("lambda_bar: x must be nonzero");

  ThresholdResult result;
  result.x.assign(x.begin(), x.end());
  result.lambda_bar_closed_form = std::sqrt(1.0 + norm_squared(x));
  const Bubble bubble = Bubble::standard(params.n());

  std::vector<std::pair<double, bool>> trace;
  const auto dominated = [&](double lambda) {
    const DominationResult d =
        check_domination(bubble, InversionSpec::make(result.x, lambda), params, options.samples, options.seed);
    result.samples_used += d.samples;
    trace.emplace_back(lambda, d.holds);
    return d.holds;
  };

  const double upper = 2.0 * result.lambda_bar_closed_form;
  double lo = 0.0;
  double hi = upper;
  if (dominated(hi)) {
    lo = hi;
  } else {
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      (dominated(mid) ? lo : hi) = mid;
      ++result.bisection_steps;
    }
  }
  result.lambda_bar_numeric = lo;
  result.abs_gap = std::abs(lo - result.lambda_bar_closed_form);

  for (int k = 1; k <= options.scan_points; ++k) dominated(upper * k / options.scan_points);
  std::sort(trace.begin(), trace.end());
  bool seen_failure = false;
  for (const auto& [lambda, holds] : trace) {
    if (!holds) seen_failure = true;
    if (holds && seen_failure) result.monotone = false;
  }
  return result;
}

// ---------------------------------------------------------------------------

double kernel_ring_integral_at_level(int n, double lambda, double d, double outer, double kappa, int level) {
  const double gap = d - lambda;
  const double image = lambda * lambda / d;  // distance of y^{x,lambda} from x
  const double fine = 1e-10 * d;

  // Breaks in rho = |z - x| on [lambda, outer].
  std::vector<double> breaks;
  const double to_singular = std::min(d, outer);
  const double mid = 0.5 * (lambda + to_singular);
  append(breaks, graded_toward_lower(lambda, mid, 1e-4 * gap));
  if (d < outer) {
    append(breaks, graded_toward_upper(mid, d, fine));
    const double near_end = std::min(outer, d + gap);
    append(breaks, graded_toward_lower(d, near_end, fine));
    if (near_end < outer) append(breaks, graded_toward_lower(near_end, outer, gap));
  } else {
    append(breaks, graded_toward_upper(mid, outer, std::max(fine, 1e-4 * (d - outer))));
  }

  const double d2 = d * d;
  const AxialIntegrand g = [&](double rho, double phi) {
    const double sh = std::sin(0.5 * phi);
    const double a2 = (rho - d) * (rho - d) + 4.0 * rho * d * sh * sh;
    return kernel_from_distances(a2, d2, rho * rho, lambda, kappa);
  };
  const PhiScale phi_scale = [&](double rho) {
    const double to_y = std::abs(rho - d) / std::sqrt(rho * d);
    const double to_image = std::abs(rho - image) / std::sqrt(rho * image);
    return 0.25 * std::min(to_y, to_image);
  };
  return axial_integral(n, breaks, g, phi_scale, level);
}

double kernel_ring_integral(const InversionSpec& spec, std::span<const double> y, double outer,
                            const ProblemParams& params, const RieszOptions& options) {
  if (y.size() != spec.center.size() || spec.dimension() != params.n()) {
    throw ConfigError("kernel_ring_integral: dimension mismatch");
  }
  const double lambda = spec.radius;
  if (!(outer > lambda)) throw ConfigError("kernel_ring_integral: outer radius must exceed lambda");
  const double d = distance(y, spec.center);
  if (d < lambda) throw ConfigError("kernel_ring_integral: y must lie outside the ball of inversion");
  if (d == lambda) return 0.0;
  const double kappa = params.n() - 2.0 * params.s();

  double previous = kernel_ring_integral_at_level(params.n(), lambda, d, outer, kappa, 0);
  for (int level = 1; level <= options.max_level; ++level) {
    const double current = kernel_ring_integral_at_level(params.n(), lambda, d, outer, kappa, level);
    if (std::abs(current - previous) <= options.rel_tol * std::abs(current)) return current;
    previous = current;
  }
  throw ConvergenceError("kernel_ring_integral: no agreement to " + std::to_string(options.rel_tol) +
                         " after level " + std::to_string(options.max_level));
}

std::string threshold_csv(std::span<const ThresholdResult> results) {
  CsvTable table({"x_norm", "lambda_bar_numeric", "lambda_bar_closed_form", "abs_gap", "samples_used"});
  for (const auto& r : results) {
    table.add_row({format_double(std::sqrt(norm_squared(r.x))), format_double(r.lambda_bar_numeric),
                   format_double(r.lambda_bar_closed_form), format_double(r.abs_gap),
                   std::to_string(r.samples_used)});
  }
  return table.str();
}

}  // namespace gjms
