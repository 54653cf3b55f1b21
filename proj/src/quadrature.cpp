#include "gjms/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gjms/error.hpp"
#include "gjms/special_functions.hpp"

namespace gjms {

SymmetricJacobiRecurrence::SymmetricJacobiRecurrence(double a) : a_(a) {
  if (!(a > -0.5)) throw ConfigError("symmetric Jacobi weight needs exponent > -1/2");
  // Beta(1/2, a+1) = sqrt(pi) Gamma(a+1) / Gamma(a+3/2)
  mass_ = std::sqrt(std::numbers::pi) * std::exp(log_gamma(a + 1.0) - log_gamma(a + 1.5));
}

double SymmetricJacobiRecurrence::off_diagonal(int k) const {
  const double kk = static_cast<double>(k);
  return std::sqrt(kk * (kk + 2.0 * a_) / (4.0 * (kk + a_ + 0.5) * (kk + a_ - 0.5)));
}

void SymmetricJacobiRecurrence::evaluate(double t, std::span<double> out) const {
  if (out.empty()) return;
  out[0] = 1.0 / std::sqrt(mass_);
  if (out.size() == 1) return;
  out[1] = t * out[0] / off_diagonal(1);
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const int ki = static_cast<int>(k);
    out[k + 1] = (t * out[k] - off_diagonal(ki) * out[k - 1]) / off_diagonal(ki + 1);
  }
}

std::pair<double, double> SymmetricJacobiRecurrence::value_and_derivative(int degree, double t) const {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(mass_);
  double d_prev = 0.0;
  double d = 0.0;
  double b_k = 0.0;
  for (int k = 0; k < degree; ++k) {
    const double b_next = off_diagonal(k + 1);
    const double p_next = (t * p - b_k * p_prev) / b_next;
    const double d_next = (p + t * d - b_k * d_prev) / b_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
    b_k = b_next;
  }
  return {p, d};
}

QuadratureRule gauss_jacobi_symmetric(int count, double a) {
  if (count < 1) throw ConfigError("gauss_jacobi_symmetric: need at least one node");
  const SymmetricJacobiRecurrence recurrence(a);
  std::vector<double> roots;
  roots.reserve(static_cast<std::size_t>(count));

  const double m = static_cast<double>(count);
  for (int j = 1; j <= count; ++j) {
    // Zeros of P_m^{(a,a)} sit near cos((j + a/2 - 1/4) pi / (m + a + 1/2)).
    double t = std::cos((j + 0.5 * a - 0.25) * std::numbers::pi / (m + a + 0.5));
    bool converged = false;
    for (int iter = 0; iter < kNewtonMaxIterations; ++iter) {
      const auto [p, dp] = recurrence.value_and_derivative(count, t);
      double deflation = 0.0;
      for (double r : roots) deflation += 1.0 / (t - r);
      const double step = p / (dp - p * deflation);
      t -= step;
      if (std::abs(step) <= kNewtonTolerance * std::max(1.0, std::abs(t))) {
        converged = true;
        break;
      }
    }
    if (!converged || !(std::abs(t) < 1.0)) {
      throw ConvergenceError("gauss_jacobi_symmetric: Newton iteration failed for node " +
                             std::to_string(j) + " of " + std::to_string(count));
    }
    roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());

  QuadratureRule rule;
  rule.nodes = roots;
  rule.weights.resize(roots.size());
  std::vector<double> values(static_cast<std::size_t>(count));
  for (std::size_t j = 0; j < roots.size(); ++j) {
    recurrence.evaluate(roots[j], values);
    double christoffel = 0.0;
    for (double v : values) christoffel += v * v;
    rule.weights[j] = 1.0 / christoffel;
  }
  for (std::size_t j = 1; j < roots.size(); ++j) {
    if (!(rule.nodes[j] > rule.nodes[j - 1])) {
      throw ConvergenceError("gauss_jacobi_symmetric: Newton produced coincident nodes");
    }
  }
  return rule;
}

QuadratureRule gauss_legendre(int count) { return gauss_jacobi_symmetric(count, 0.0); }

double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        const QuadratureRule& rule) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double half = 0.5 * (breaks[i + 1] - breaks[i]);
    const double mid = 0.5 * (breaks[i + 1] + breaks[i]);
    if (half == 0.0) continue;
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    total += half * panel;
  }
  return total;
}

std::vector<double> graded_toward_lower(double lo, double hi, double min_width) {
  std::vector<double> breaks{hi};
  double width = hi - lo;
  while (width > min_width) {
    width *= 0.5;
    breaks.push_back(lo + width);
  }
  breaks.push_back(lo);
  std::reverse(breaks.begin(), breaks.end());
  return breaks;
}

std::vector<double> graded_toward_upper(double lo, double hi, double min_width) {
  std::vector<double> breaks{lo};
  double width = hi - lo;
  while (width > min_width) {
    width *= 0.5;
    breaks.push_back(hi - width);
  }
  breaks.push_back(hi);
  return breaks;
}

std::vector<double> subdivide(std::span<const double> breaks, int parts) {
  if (breaks.empty()) return {};
  std::vector<double> out;
  out.reserve(breaks.size() * static_cast<std::size_t>(parts));
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    for (int p = 0; p < parts; ++p) {
      out.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * p / parts);
    }
  }
  out.push_back(breaks.back());
  return out;
}

}  // namespace gjms
