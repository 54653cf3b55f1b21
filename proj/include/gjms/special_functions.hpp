#pragma once

#include <optional>
#include <span>

namespace gjms {

/// The tuple (n, s, alpha, epsilon) with its derived constants.
///
/// Invariants enforced by `make`: n >= 3, s >= 1, n > 2s,
/// 0 < alpha <= (n+2s)/(n-2s), epsilon >= 0.
class ProblemParams {
 public:
  static ProblemParams make(int n, double s, double alpha, double epsilon = 0.0);
  /// Parameters at the critical exponent alpha = (n+2s)/(n-2s).
  static ProblemParams critical(int n, double s, double epsilon = 0.0);

  int n() const { return n_; }
  double s() const { return s_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }

  /// (n-2s)/2, the homogeneity of the conformal factor.
  double half_order_gap() const { return 0.5 * (n_ - 2.0 * s_); }
  double critical_exponent() const { return (n_ + 2.0 * s_) / (n_ - 2.0 * s_); }
  bool is_critical() const;
  /// sigma = (n+2s)/2 - alpha (n-2s)/2 >= 0.
  double sigma() const;
  /// Q = Gamma(n/2+s)/Gamma(n/2-s).
  double q() const;
  /// gamma = C(2s) Q.
  double gamma() const;

 private:
  ProblemParams(int n, double s, double alpha, double epsilon)
      : n_(n), s_(s), alpha_(alpha), epsilon_(epsilon) {}

  int n_;
  double s_;
  double alpha_;
  double epsilon_;
};

double critical_exponent(int n, double s);

// ---------------------------------------------------------------------------
// Gamma machinery

/// ln Gamma(x) for x > 0 (Lanczos, g = 7) with reflection below 1/2.
/// For x <= 0 returns ln|Gamma(x)|; throws ConfigError at the poles.
double log_gamma(double x);

/// ln( Gamma(x+b) / Gamma(x+a) ) for x+a > 0 and x+b > 0.
///
/// Uses upward recurrence to move the arguments past 20 and then a
/// Stirling series written in terms of log1p(a/x), log1p(b/x), so that the
/// leading (b-a) ln x never cancels against large terms.
double log_gamma_ratio(double x, double a, double b);

/// ln( Gamma(x+b) / Gamma(x+a) ) - (b-a) ln x, for x > 0. Small for large x.
double log_gamma_ratio_excess(double x, double a, double b);

/// Gamma(x+b)/Gamma(x+a).
double gamma_ratio(double x, double a, double b);

// ---------------------------------------------------------------------------
// Multipliers and constants

/// alpha_{2s,n}(l) = Gamma(l+n/2+s)/Gamma(l+n/2-s), the eigenvalue of the
/// GJMS operator on degree-l spherical harmonics.
double gjms_multiplier(const ProblemParams& params, int l);

/// Q_n^{2s} = multiplier at l = 0.
double q_constant(const ProblemParams& params);

/// l + (n-1)/2, eigenvalue of sqrt(-Laplacian + (n-1)^2/4) on degree l.
double b_eigenvalue(int n, int l);

/// C(a) = Gamma((n-a)/2) / (2^a pi^{n/2} Gamma(a/2)), for 0 < a < n.
double riesz_constant(int n, double a);

/// prod_{k=1}^{s} (l(l+n-1) + (n/2-k)(n/2+k-1)) for integer s.
double integer_order_product(int n, int s, int l);

// ---------------------------------------------------------------------------
// Asymptotic expansions

struct ExpansionReport {
  double x = 0.0;
  double exact = 0.0;
  double truncated = 0.0;
  double remainder = 0.0;
  double predicted_order = 0.0;
};

/// Coefficients of x^{b-a-1} and x^{b-a-2} in the large-x expansion of
/// Gamma(x+b)/Gamma(x+a).
double gamma_ratio_first_coefficient(double a, double b);
double gamma_ratio_second_coefficient(double a, double b);

/// Three-term expansion of Gamma(x+b)/Gamma(x+a) against the exact ratio.
///
/// When b - a is a non-negative integer k the ratio is the polynomial
/// prod_{j<k} (x+a+j); `exact` is then the truncation plus the explicit lower
/// powers, so for k <= 2 the remainder is exactly zero.
ExpansionReport gamma_ratio_expansion(double x, double a, double b);

struct MultiplierExpansion {
  double exact = 0.0;
  double three_term = 0.0;
  double gap = 0.0;
};

/// alpha_{2s,n}(l) against l^{2s} + s(n-1) l^{2s-1} + c2 l^{2s-2}.
MultiplierExpansion multiplier_expansion_check(const ProblemParams& params, int l);

/// alpha_{2s,n}(l) - l^s (l+n-1)^s, evaluated without cancellation of the
/// two leading orders (exactly, as a polynomial in l(l+n-1), for integer s).
double multiplier_gap(const ProblemParams& params, int l);

/// Leading coefficient of multiplier_gap in l^{2s-2}:
/// s((n-1)^2/4 - s^2/3 + 1/12).
double multiplier_gap_coefficient(int n, double s);

/// Least-squares slope of ln|y| against ln x. Empty when some |y| is zero
/// (no power law to fit) or fewer than two points are given.
std::optional<double> loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace gjms
