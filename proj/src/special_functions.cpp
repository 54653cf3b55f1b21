#include "gjms/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gjms/error.hpp"

namespace gjms {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, nine coefficients.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} for k = 1..10.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,       -1.0 / 30.0,    1.0 / 42.0,       -1.0 / 30.0,
    5.0 / 66.0,      -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0, -174611.0 / 330.0};

// Below this the Stirling difference is not used directly.
constexpr double kStirlingThreshold = 20.0;

// Integer b - a up to this degree is expanded as an explicit polynomial.
constexpr double kMaxPolynomialDegree = 64.0;

double lanczos_log_gamma(double x) {
  const double z = x - 1.0;
  double sum = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) sum += kLanczos[i] / (z + static_cast<double>(i));
  const double t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

// ln Gamma(x+b) - ln Gamma(x+a) - (b-a) ln x, valid once x+a and x+b are
// past the Stirling threshold.
double stirling_excess(double x, double a, double b) {
  double value = (x + b - 0.5) * std::log1p(b / x) - (x + a - 0.5) * std::log1p(a / x) - (b - a);
  const double inv_b = 1.0 / (x + b);
  const double inv_a = 1.0 / (x + a);
  const double inv_b2 = inv_b * inv_b;
  const double inv_a2 = inv_a * inv_a;
  double pow_b = inv_b;
  double pow_a = inv_a;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double kk = static_cast<double>(k);
    value += kBernoulli[k - 1] / (2.0 * kk * (2.0 * kk - 1.0)) * (pow_b - pow_a);
    pow_b *= inv_b2;
    pow_a *= inv_a2;
  }
  return value;
}

int recurrence_shift(double x, double a, double b) {
  const double floor_needed = kStirlingThreshold + std::max(0.0, -std::min(a, b));
  if (x >= floor_needed) return 0;
  return static_cast<int>(std::ceil(floor_needed - x));
}

}  // namespace

// ---------------------------------------------------------------------------

ProblemParams ProblemParams::make(int n, double s, double alpha, double epsilon) {
  if (n < 3) throw ConfigError("dimension n must be at least 3, got " + std::to_string(n));
  if (!(s >= 1.0)) throw ConfigError("order s must satisfy s >= 1, got " + std::to_string(s));
  if (!(n > 2.0 * s)) {
    throw ConfigError("need n > 2s, got n=" + std::to_string(n) + ", s=" + std::to_string(s));
  }
  const double crit = gjms::critical_exponent(n, s);
  if (!(alpha > 0.0) || alpha > crit * (1.0 + 1e-14)) {
    throw ConfigError("alpha must lie in (0, (n+2s)/(n-2s)] = (0, " + std::to_string(crit) +
                      "], got " + std::to_string(alpha));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be finite and non-negative, got " + std::to_string(epsilon));
  }
  return ProblemParams(n, s, std::min(alpha, crit), epsilon);
}

ProblemParams ProblemParams::critical(int n, double s, double epsilon) {
  if (n < 3 || !(n > 2.0 * s)) {
    throw ConfigError("need n >= 3 and n > 2s, got n=" + std::to_string(n) +
                      ", s=" + std::to_string(s));
  }
  return make(n, s, gjms::critical_exponent(n, s), epsilon);
}

bool ProblemParams::is_critical() const {
  const double crit = critical_exponent();
  return std::abs(alpha_ - crit) <= 1e-12 * crit;
}

double ProblemParams::sigma() const {
  if (is_critical()) return 0.0;
  return 0.5 * (n_ + 2.0 * s_) - alpha_ * half_order_gap();
}

double ProblemParams::q() const { return q_constant(*this); }

double ProblemParams::gamma() const { return riesz_constant(n_, 2.0 * s_) * q(); }

double critical_exponent(int n, double s) { return (n + 2.0 * s) / (n - 2.0 * s); }

// ---------------------------------------------------------------------------

double log_gamma(double x) {
  if (!std::isfinite(x)) throw ConfigError("log_gamma: non-finite argument");
  if (x <= 0.0 && x == std::floor(x)) {
    throw ConfigError("log_gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::log(kPi / std::abs(std::sin(kPi * x))) - lanczos_log_gamma(1.0 - x);
  }
  return lanczos_log_gamma(x);
}

double log_gamma_ratio(double x, double a, double b) {
  if (!(x + a > 0.0) || !(x + b > 0.0)) {
    throw ConfigError("log_gamma_ratio: need x+a > 0 and x+b > 0");
  }
  if (a == b) return 0.0;
  const int shift = recurrence_shift(x, a, b);
  // Gamma(y) = Gamma(y+k) / (y (y+1) ... (y+k-1))
  double correction = 0.0;
  for (int j = 0; j < shift; ++j) {
    correction += std::log((x + b + j) / (x + a + j));
  }
  const double shifted = x + shift;
  return (b - a) * std::log(shifted) + stirling_excess(shifted, a, b) - correction;
}

double log_gamma_ratio_excess(double x, double a, double b) {
  if (!(x > 0.0)) throw ConfigError("log_gamma_ratio_excess: need x > 0");
  if (recurrence_shift(x, a, b) == 0) return stirling_excess(x, a, b);
  return log_gamma_ratio(x, a, b) - (b - a) * std::log(x);
}

double gamma_ratio(double x, double a, double b) {
  const double k = b - a;
  if (k > 0.0 && k <= kMaxPolynomialDegree && k == std::floor(k) && x + a > 0.0) {
    double product = 1.0;
    for (int j = 0; j < static_cast<int>(k); ++j) product *= x + a + j;
    return product;
  }
  if (x >= 1.0) return std::pow(x, b - a) * std::exp(log_gamma_ratio_excess(x, a, b));
  return std::exp(log_gamma_ratio(x, a, b));
}

// ---------------------------------------------------------------------------

double gjms_multiplier(const ProblemParams& params, int l) {
  if (l < 0) throw ConfigError("gjms_multiplier: degree must be non-negative");
  const double half_n = 0.5 * params.n();
  return gamma_ratio(static_cast<double>(l), half_n - params.s(), half_n + params.s());
}

double q_constant(const ProblemParams& params) { return gjms_multiplier(params, 0); }

double b_eigenvalue(int n, int l) {
  if (n < 2 || l < 0) throw ConfigError("b_eigenvalue: need n >= 2 and l >= 0");
  return l + 0.5 * (n - 1);
}

double riesz_constant(int n, double a) {
  if (!(a > 0.0) || !(a < n)) {
    throw ConfigError("riesz_constant: need 0 < a < n, got a=" + std::to_string(a));
  }
  const double log_value = log_gamma(0.5 * (n - a)) - a * std::log(2.0) -
                           0.5 * n * std::log(kPi) - log_gamma(0.5 * a);
  return std::exp(log_value);
}

double integer_order_product(int n, int s, int l) {
  if (s < 1) throw ConfigError("integer_order_product: need s >= 1");
  const double laplace = static_cast<double>(l) * (l + n - 1);
  double product = 1.0;
  for (int k = 1; k <= s; ++k) {
    product *= laplace + (0.5 * n - k) * (0.5 * n + k - 1);
  }
  return product;
}

// ---------------------------------------------------------------------------

double gamma_ratio_first_coefficient(double a, double b) { return 0.5 * (b - a) * (b + a - 1.0); }

double gamma_ratio_second_coefficient(double a, double b) {
  const double d = b - a;
  const double m = b + a - 1.0;
  return d / 24.0 * (3.0 * d * m * m - 4.0 * (b * b + a * b + a * a) + 6.0 * (b + a) - 2.0);
}

ExpansionReport gamma_ratio_expansion(double x, double a, double b) {
  if (!(x > 0.0) || !(x + a > 0.0) || !(x + b > 0.0)) {
    throw ConfigError("gamma_ratio_expansion: need x > 0, x+a > 0, x+b > 0");
  }
  ExpansionReport report;
  report.x = x;
  report.truncated = std::pow(x, b - a) *
                     (1.0 + gamma_ratio_first_coefficient(a, b) / x +
                      gamma_ratio_second_coefficient(a, b) / (x * x));
  const double k = b - a;
  if (k >= 0.0 && k == std::floor(k) && k <= kMaxPolynomialDegree) {
    // Gamma(x+b)/Gamma(x+a) = prod_{j<k} (x+a+j); the first three terms of its
    // expansion in powers of x are the truncation, the rest is
    // sum_{j>=3} e_j x^{k-j} with e_j the elementary symmetric sums of a+j.
    const int degree = static_cast<int>(k);
    std::vector<double> e(static_cast<std::size_t>(degree) + 1, 0.0);
    e[0] = 1.0;
    for (int j = 0; j < degree; ++j) {
      for (int i = j + 1; i >= 1; --i) e[static_cast<std::size_t>(i)] += (a + j) * e[static_cast<std::size_t>(i) - 1];
    }
    double tail = 0.0;
    for (int j = 3; j <= degree; ++j) tail += e[static_cast<std::size_t>(j)] * std::pow(x, degree - j);
    report.exact = report.truncated + tail;
  } else {
    report.exact = gamma_ratio(x, a, b);
  }
  report.remainder = report.exact - report.truncated;
  report.predicted_order = b - a - 3.0;
  return report;
}

MultiplierExpansion multiplier_expansion_check(const ProblemParams& params, int l) {
  if (l < 0) throw ConfigError("multiplier_expansion_check: degree must be non-negative");
  const double half_n = 0.5 * params.n();
  const double a = half_n - params.s();
  const double b = half_n + params.s();
  const double two_s = 2.0 * params.s();
  const double ll = static_cast<double>(l);
  MultiplierExpansion out;
  out.exact = gjms_multiplier(params, l);
  out.three_term = std::pow(ll, two_s) + gamma_ratio_first_coefficient(a, b) * std::pow(ll, two_s - 1.0) +
                   gamma_ratio_second_coefficient(a, b) * std::pow(ll, two_s - 2.0);
  out.gap = out.exact - out.three_term;
  return out;
}

double multiplier_gap(const ProblemParams& params, int l) {
  if (l < 1) throw ConfigError("multiplier_gap: degree must be positive");
  const double half_n = 0.5 * params.n();
  const double s = params.s();
  const double ll = static_cast<double>(l);
  if (s == std::floor(s) && s <= kMaxPolynomialDegree) {
    // alpha(l) = prod_k (m + c_k) with m = l(l+n-1), c_k = (n/2-k)(n/2+k-1) > 0,
    // so the gap is sum_{j>=1} e_j(c) m^{s-j}: positive terms, no cancellation.
    const int order = static_cast<int>(s);
    const double m = ll * (ll + params.n() - 1.0);
    std::vector<double> e(static_cast<std::size_t>(order) + 1, 0.0);
    e[0] = 1.0;
    for (int k = 1; k <= order; ++k) {
      const double c = (half_n - k) * (half_n + k - 1.0);
      for (int j = k; j >= 1; --j) e[static_cast<std::size_t>(j)] += c * e[static_cast<std::size_t>(j - 1)];
    }
    double gap = 0.0;
    for (int j = order; j >= 1; --j) gap += e[static_cast<std::size_t>(j)] * std::pow(m, order - j);
    return gap;
  }
  // alpha(l) = l^{2s} e^{excess},  l^s (l+n-1)^s = l^{2s} (1 + (n-1)/l)^s.
  const double excess = log_gamma_ratio_excess(ll, half_n - s, half_n + s);
  const double laplace_excess = s * std::log1p((params.n() - 1.0) / ll);
  return std::pow(ll, 2.0 * s) * (std::expm1(excess) - std::expm1(laplace_excess));
}

double multiplier_gap_coefficient(int n, double s) {
  const double m = n - 1.0;
  return s * (0.25 * m * m - s * s / 3.0 + 1.0 / 12.0);
}

std::optional<double> loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return std::nullopt;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || ys[i] == 0.0 || !std::isfinite(ys[i])) return std::nullopt;
    const double lx = std::log(xs[i]);
    const double ly = std::log(std::abs(ys[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double count = static_cast<double>(xs.size());
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) return std::nullopt;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace gjms
