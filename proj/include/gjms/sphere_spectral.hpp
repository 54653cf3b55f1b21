#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "gjms/quadrature.hpp"
#include "gjms/special_functions.hpp"

namespace gjms {

inline constexpr int kDefaultDegree = 64;
inline constexpr int kDefaultNodes = 96;

/// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double surface_area(int n);

/// Quadrature for zonal functions on S^n in t = cos(theta).
///
/// integral over S^n of f dmu = prefactor * sum_j weights[j] f(nodes[j]),
/// with prefactor = |S^{n-1}| and Gauss-Jacobi nodes for (1-t^2)^{(n-2)/2}.
struct ZonalGrid {
  int n = 0;
  int node_count = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  double prefactor = 0.0;

  /// Full measure weight of node j.
  double measure(std::size_t j) const { return weights[j] * prefactor; }
  double integrate(std::span<const double> values) const;
};

ZonalGrid make_grid(int n, int node_count);

/// Coefficients c_0..c_L in the L^2(S^n)-orthonormal zonal basis.
struct SpectralCoeffs {
  int n = 0;
  int degree_max = 0;
  std::vector<double> coeffs;

  static SpectralCoeffs zeros(int n, int degree_max);
  static SpectralCoeffs unit(int n, int degree_max, int l);
};

/// Samples of a zonal function at the nodes of a grid.
struct SphereFunction {
  ZonalGrid grid;
  std::vector<double> values;
};

/// Orthonormal zonal harmonic Y_l(t), proportional to the Gegenbauer
/// polynomial C_l^{(n-1)/2}(t), normalized so that its square integrates to
/// one over S^n.
double basis_eval(int n, int l, double t);

/// Cached basis table for repeated transforms on one grid.
class ZonalTransform {
 public:
  ZonalTransform(ZonalGrid grid, int degree_max);

  const ZonalGrid& grid() const { return grid_; }
  int degree_max() const { return degree_max_; }

  /// c_l = sum_j Y_l(t_j) f_j w_j |S^{n-1}|.
  void analyze(std::span<const double> values, std::span<double> coeffs) const;
  /// f_j = sum_l c_l Y_l(t_j).
  void synthesize(std::span<const double> coeffs, std::span<double> values) const;

  SpectralCoeffs analyze(std::span<const double> values) const;
  std::vector<double> synthesize(const SpectralCoeffs& c) const;

 private:
  ZonalGrid grid_;
  int degree_max_;
  std::vector<double> basis_;     // (degree_max+1) x node_count
  std::vector<double> weighted_;  // basis times quadrature measure
};

struct AnalyzeDiagnostics {
  /// Fraction of the resolvable energy (degrees up to node_count-1) lying
  /// above the requested band limit.
  double tail_fraction = 0.0;
  bool truncation_warning = false;
};

inline constexpr double kTailWarningFraction = 1e-8;

SpectralCoeffs analyze(const SphereFunction& f, int degree_max, AnalyzeDiagnostics* diagnostics = nullptr);
SphereFunction synthesize(const SpectralCoeffs& c, const ZonalGrid& grid);

/// sum_l c_l Y_l(t) at an arbitrary t in [-1, 1].
double evaluate(const SpectralCoeffs& c, double t);

/// Multiplies each coefficient by alpha_{2s,n}(l).
SpectralCoeffs apply_gjms(const SpectralCoeffs& c, const ProblemParams& params);

/// sum_l alpha_{2s,n}(l) c_l^2, the form of v against P v.
double quadratic_form(const SpectralCoeffs& c, const ProblemParams& params);

/// (integral of |f|^p)^{1/p}. Negative samples are rejected for non-integer p.
double lp_norm(const SphereFunction& f, double p);

/// integral of f^p without the outer root (same sign rules as lp_norm).
double lp_integral(const ZonalGrid& grid, std::span<const double> values, double p);

void to_json(nlohmann::json& j, const SpectralCoeffs& c);
void from_json(const nlohmann::json& j, SpectralCoeffs& c);
void to_json(nlohmann::json& j, const SphereFunction& f);
void from_json(const nlohmann::json& j, SphereFunction& f);

}  // namespace gjms
