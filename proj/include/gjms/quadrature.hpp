#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gjms {

/// Nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Orthonormal polynomials for the symmetric Jacobi weight (1-t^2)^a on
/// [-1, 1], a > -1/2, generated by the three-term recurrence
///   b_{k+1} p_{k+1}(t) = t p_k(t) - b_k p_{k-1}(t).
class SymmetricJacobiRecurrence {
 public:
  explicit SymmetricJacobiRecurrence(double a);

  double exponent() const { return a_; }
  /// Total mass of the weight, integral of (1-t^2)^a over [-1, 1].
  double mass() const { return mass_; }
  /// Off-diagonal Jacobi-matrix entry b_k, k >= 1.
  double off_diagonal(int k) const;

  /// p_0(t), ..., p_degree(t) written into `out` (size degree + 1).
  void evaluate(double t, std::span<double> out) const;
  /// p_degree(t) and its derivative.
  std::pair<double, double> value_and_derivative(int degree, double t) const;

 private:
  double a_;
  double mass_;
};

inline constexpr double kNewtonTolerance = 1e-14;
inline constexpr int kNewtonMaxIterations = 100;

/// Gauss rule with `count` nodes for the weight (1-t^2)^a.
///
/// Nodes are found by Newton iteration on the orthonormal polynomial of
/// degree `count`, started from Chebyshev-type angle guesses and deflated by
/// the roots already found; weights come from the Christoffel function.
/// Throws ConvergenceError when Newton does not reach 1e-14 in 100 steps.
QuadratureRule gauss_jacobi_symmetric(int count, double a);

QuadratureRule gauss_legendre(int count);

/// Composite rule: the nodes of `rule` mapped onto each [breaks[i], breaks[i+1]].
double integrate_panels(const std::function<double(double)>& f, std::span<const double> breaks,
                        const QuadratureRule& rule);

/// Breakpoints on [lo, hi] refined geometrically toward `lo`: the panel
/// widths halve until the panel touching `lo` is narrower than `min_width`.
std::vector<double> graded_toward_lower(double lo, double hi, double min_width);
/// Same, refined toward `hi`.
std::vector<double> graded_toward_upper(double lo, double hi, double min_width);

/// Each panel of `breaks` split into `parts` equal pieces.
std::vector<double> subdivide(std::span<const double> breaks, int parts);

}  // namespace gjms
