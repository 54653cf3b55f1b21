#include "gjms/sphere_spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gjms/error.hpp"

namespace gjms {

double surface_area(int n) {
  if (n < 0) throw ConfigError("surface_area: dimension must be non-negative");
  const double half = 0.5 * (n + 1);
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - log_gamma(half));
}

double ZonalGrid::integrate(std::span<const double> values) const {
  if (values.size() != nodes.size()) throw ConfigError("ZonalGrid::integrate: size mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) total += weights[j] * values[j];
  return total * prefactor;
}

ZonalGrid make_grid(int n, int node_count) {
  if (n < 2) throw ConfigError("make_grid: sphere dimension must be at least 2");
  if (node_count < 2) throw ConfigError("make_grid: need at least 2 nodes");
  QuadratureRule rule = gauss_jacobi_symmetric(node_count, 0.5 * (n - 2));
  ZonalGrid grid;
  grid.n = n;
  grid.node_count = node_count;
  grid.nodes = std::move(rule.nodes);
  grid.weights = std::move(rule.weights);
  grid.prefactor = surface_area(n - 1);
  return grid;
}

SpectralCoeffs SpectralCoeffs::zeros(int n, int degree_max) {
  if (degree_max < 0) throw ConfigError("SpectralCoeffs: negative band limit");
  return SpectralCoeffs{n, degree_max, std::vector<double>(static_cast<std::size_t>(degree_max) + 1, 0.0)};
}

SpectralCoeffs SpectralCoeffs::unit(int n, int degree_max, int l) {
  if (l < 0 || l > degree_max) throw ConfigError("SpectralCoeffs::unit: degree out of range");
  SpectralCoeffs c = zeros(n, degree_max);
  c.coeffs[static_cast<std::size_t>(l)] = 1.0;
  return c;
}

double basis_eval(int n, int l, double t) {
  if (n < 2 || l < 0) throw ConfigError("basis_eval: need n >= 2, l >= 0");
  const SymmetricJacobiRecurrence recurrence(0.5 * (n - 2));
  std::vector<double> values(static_cast<std::size_t>(l) + 1);
  recurrence.evaluate(t, values);
  return values.back() / std::sqrt(surface_area(n - 1));
}

ZonalTransform::ZonalTransform(ZonalGrid grid, int degree_max)
    : grid_(std::move(grid)), degree_max_(degree_max) {
  if (degree_max < 0) throw ConfigError("ZonalTransform: negative band limit");
  const std::size_t rows = static_cast<std::size_t>(degree_max) + 1;
  const std::size_t cols = grid_.nodes.size();
  basis_.assign(rows * cols, 0.0);
  weighted_.assign(rows * cols, 0.0);
  const SymmetricJacobiRecurrence recurrence(0.5 * (grid_.n - 2));
  const double scale = 1.0 / std::sqrt(grid_.prefactor);
  std::vector<double> column(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    recurrence.evaluate(grid_.nodes[j], column);
    for (std::size_t l = 0; l < rows; ++l) {
      const double y = column[l] * scale;
      basis_[l * cols + j] = y;
      weighted_[l * cols + j] = y * grid_.measure(j);
    }
  }
}

void ZonalTransform::analyze(std::span<const double> values, std::span<double> coeffs) const {
  const std::size_t cols = grid_.nodes.size();
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    const double* row = weighted_.data() + l * cols;
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += row[j] * values[j];
    coeffs[l] = sum;
  }
}

void ZonalTransform::synthesize(std::span<const double> coeffs, std::span<double> values) const {
  const std::size_t cols = grid_.nodes.size();
  std::fill(values.begin(), values.end(), 0.0);
  for (std::size_t l = 0; l < coeffs.size(); ++l) {
    const double c = coeffs[l];
    if (c == 0.0) continue;
    const double* row = basis_.data() + l * cols;
    for (std::size_t j = 0; j < cols; ++j) values[j] += c * row[j];
  }
}

SpectralCoeffs ZonalTransform::analyze(std::span<const double> values) const {
  if (values.size() != grid_.nodes.size()) throw ConfigError("analyze: sample count mismatch");
  SpectralCoeffs c = SpectralCoeffs::zeros(grid_.n, degree_max_);
  analyze(values, c.coeffs);
  return c;
}

std::vector<double> ZonalTransform::synthesize(const SpectralCoeffs& c) const {
  if (c.n != grid_.n) throw ConfigError("synthesize: dimension mismatch");
  if (c.degree_max > degree_max_) throw ConfigError("synthesize: band limit exceeds transform");
  std::vector<double> values(grid_.nodes.size());
  synthesize(c.coeffs, values);
  return values;
}

SpectralCoeffs analyze(const SphereFunction& f, int degree_max, AnalyzeDiagnostics* diagnostics) {
  const int resolvable = f.grid.node_count - 1;
  if (degree_max > resolvable) {
    throw ConfigError("analyze: band limit " + std::to_string(degree_max) + " needs at least " +
                      std::to_string(degree_max + 1) + " nodes");
  }
  const ZonalTransform transform(f.grid, resolvable);
  const SpectralCoeffs full = transform.analyze(f.values);
  SpectralCoeffs out = SpectralCoeffs::zeros(f.grid.n, degree_max);
  std::copy_n(full.coeffs.begin(), degree_max + 1, out.coeffs.begin());
  if (diagnostics != nullptr) {
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t l = 0; l < full.coeffs.size(); ++l) {
      const double e = full.coeffs[l] * full.coeffs[l];
      total += e;
      if (static_cast<int>(l) > degree_max) tail += e;
    }
    diagnostics->tail_fraction = total > 0.0 ? tail / total : 0.0;
    diagnostics->truncation_warning = diagnostics->tail_fraction > kTailWarningFraction;
  }
  return out;
}

SphereFunction synthesize(const SpectralCoeffs& c, const ZonalGrid& grid) {
  const ZonalTransform transform(grid, c.degree_max);
  return SphereFunction{grid, transform.synthesize(c)};
}

double evaluate(const SpectralCoeffs& c, double t) {
  const SymmetricJacobiRecurrence recurrence(0.5 * (c.n - 2));
  std::vector<double> values(c.coeffs.size());
  recurrence.evaluate(t, values);
  double sum = 0.0;
  for (std::size_t l = 0; l < values.size(); ++l) sum += c.coeffs[l] * values[l];
  return sum / std::sqrt(surface_area(c.n - 1));
}

SpectralCoeffs apply_gjms(const SpectralCoeffs& c, const ProblemParams& params) {
  if (c.n != params.n()) throw ConfigError("apply_gjms: dimension mismatch");
  SpectralCoeffs out = c;
  for (std::size_t l = 0; l < out.coeffs.size(); ++l) {
    out.coeffs[l] *= gjms_multiplier(params, static_cast<int>(l));
  }
  return out;
}

double quadratic_form(const SpectralCoeffs& c, const ProblemParams& params) {
  if (c.n != params.n()) throw ConfigError("quadratic_form: dimension mismatch");
  double sum = 0.0;
  for (std::size_t l = 0; l < c.coeffs.size(); ++l) {
    sum += gjms_multiplier(params, static_cast<int>(l)) * c.coeffs[l] * c.coeffs[l];
  }
  return sum;
}

double lp_integral(const ZonalGrid& grid, std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw ConfigError("lp_norm: need p >= 1");
  const bool integer_power = p == std::floor(p);
  std::vector<double> powered(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = values[j];
    if (!std::isfinite(v)) throw ConfigError("lp_norm: non-finite sample");
    if (!integer_power && v < 0.0) {
      throw ConfigError("lp_norm: negative sample with non-integer exponent");
    }
    powered[j] = std::pow(std::abs(v), p);
  }
  return grid.integrate(powered);
}

double lp_norm(const SphereFunction& f, double p) {
  return std::pow(lp_integral(f.grid, f.values, p), 1.0 / p);
}

void to_json(nlohmann::json& j, const SpectralCoeffs& c) {
  j = nlohmann::json{{"n", c.n}, {"degree_max", c.degree_max}, {"coeffs", c.coeffs}};
}

void from_json(const nlohmann::json& j, SpectralCoeffs& c) {
  j.at("n").get_to(c.n);
  j.at("degree_max").get_to(c.degree_max);
  j.at("coeffs").get_to(c.coeffs);
  if (c.coeffs.size() != static_cast<std::size_t>(c.degree_max) + 1) {
    throw ConfigError("SpectralCoeffs JSON: coefficient count does not match degree_max");
  }
}

void to_json(nlohmann::json& j, const SphereFunction& f) {
  j = nlohmann::json{{"n", f.grid.n}, {"node_count", f.grid.node_count}, {"values", f.values}};
}

void from_json(const nlohmann::json& j, SphereFunction& f) {
  const int n = j.at("n").get<int>();
  const int count = j.at("node_count").get<int>();
  f.grid = make_grid(n, count);
  j.at("values").get_to(f.values);
  if (f.values.size() != static_cast<std::size_t>(count)) {
    throw ConfigError("SphereFunction JSON: value count does not match node_count");
  }
}

}  // namespace gjms
