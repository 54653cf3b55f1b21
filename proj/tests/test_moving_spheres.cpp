#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gjms/error.hpp"
#include "gjms/moving_spheres.hpp"

using namespace gjms;

namespace {

Point along_first_axis(int n, double r) {
  Point x(n, 0.0);
  x[0] = r;
  return x;
}

Point random_direction(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> normal;
  Point w(n);
  double len = 0.0;
  for (double& c : w) {
    c = normal(rng);
    len += c * c;
  }
  for (double& c : w) c /= std::sqrt(len);
  return w;
}

}  // namespace

TEST(Domination, Examples) {
  const auto params = ProblemParams::critical(3, 1.0);
  const Bubble b = Bubble::standard(3);
  const Point x = along_first_axis(3, 1.0);
  EXPECT_TRUE(check_domination(b, InversionSpec::make(x, 1.0), params, 400, 0).holds);

  const DominationResult edge = check_domination(b, InversionSpec::make(x, std::sqrt(2.0)), params, 400, 0);
  EXPECT_TRUE(edge.holds);
  EXPECT_LT(std::abs(edge.worst_margin), 1e-12);

  const DominationResult past = check_domination(b, InversionSpec::make(x, 1.5), params, 400, 0);
  EXPECT_FALSE(past.holds);
  EXPECT_LT(past.worst_margin, 0.0);
  EXPECT_EQ(past.sign_disagreements, 0);
}

TEST(Domination, MonotonePredicate) {
  for (int n = 3; n <= 6; ++n) {
    const auto params = ProblemParams::critical(n, 1.0);
    const Bubble b = Bubble::standard(n);
    for (double r : {0.5, 1.0, 2.0, 5.0}) {
      const Point x = along_first_axis(n, r);
      const double bar = std::sqrt(1.0 + r * r);
      for (double f : {0.1, 0.5, 0.9, 1.0}) {
        EXPECT_TRUE(check_domination(b, InversionSpec::make(x, f * bar), params, 200, 1).holds)
            << n << " " << r << " " << f;
      }
      for (double f : {1.001, 1.1, 1.5}) {
        EXPECT_FALSE(check_domination(b, InversionSpec::make(x, f * bar), params, 200, 1).holds)
            << n << " " << r << " " << f;
      }
    }
  }
}

TEST(Domination, SignEquivalenceFuzz) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> dim(3, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int agree = 0;
  constexpr int kTrials = 10000;
  for (int k = 0; k < kTrials; ++k) {
    const int n = dim(rng);
    const double s = 1.0 + unit(rng) * (0.5 * n - 1.05);
    const auto params = ProblemParams::critical(n, s);
    Point x = random_direction(rng, n);
    const double xr = 3.0 * unit(rng);
    for (double& c : x) c *= xr;
    const double lambda = 0.1 + 3.0 * unit(rng);
    const Point w = random_direction(rng, n);
    const double rho = lambda * std::exp(3.0 * (unit(rng) - 0.3));
    Point y(n);
    for (int i = 0; i < n; ++i) y[i] = x[i] + rho * w[i];
    if (domination_equivalence_residual(x, lambda, y, params)) ++agree;
  }
  EXPECT_EQ(agree, kTrials);
}

TEST(Domination, FixedSphereOfTheBubble) {
  std::mt19937_64 rng(13);
  for (int n = 3; n <= 6; ++n) {
    const auto params = ProblemParams::critical(n, 1.0);
    const PointFunction u = standard_bubble(params);
    const Point x = along_first_axis(n, 0.8);
    const InversionSpec spec = InversionSpec::make(x, std::sqrt(1.64));
    for (int k = 0; k < 100; ++k) {
      const Point w = random_direction(rng, n);
      Point y(n);
      for (int i = 0; i < n; ++i) y[i] = x[i] + (0.5 + 3.0 * k / 100.0) * w[i];
      EXPECT_NEAR(kelvin_transform(u, spec, params, y) / u(y), 1.0, 1e-12);
    }
  }
}

TEST(Threshold, ClosedFormValues) {
  for (int n : {3, 5}) {
    const auto params = ProblemParams::critical(n, 1.0);
    for (double r : {0.5, 1.0, 2.0}) {
      const ThresholdResult t = lambda_bar(along_first_axis(n, r), params, 1e-3);
      EXPECT_LE(t.abs_gap, 2e-3) << n << " " << r;
      EXPECT_NEAR(t.lambda_bar_closed_form, std::sqrt(1.0 + r * r), 1e-15);
      EXPECT_TRUE(t.monotone);
      EXPECT_GT(t.samples_used, 0);
    }
  }
}

TEST(Threshold, FractionalOrderAndOffAxis) {
  const auto params = ProblemParams::critical(6, 1.7);
  const Point x{0.3, -0.4, 0.5, 0.0, 0.2, 1.0};
  const ThresholdResult t = lambda_bar(x, params, 1e-4);
  EXPECT_LE(t.abs_gap, 2e-4);
}

TEST(Threshold, RejectsBadInput) {
  const auto params = ProblemParams::critical(3, 1.0);
  EXPECT_THROW(lambda_bar(along_first_axis(3, 1.0), params, 0.0), ConfigError);
  EXPECT_THROW(lambda_bar(Point{0.0, 0.0, 0.0}, params, 1e-3), ConfigError);
  EXPECT_THROW(lambda_bar(Point{1.0, 0.0}, params, 1e-3), ConfigError);
}

TEST(KernelRing, ZeroOnSphereAndLinearNearIt) {
  const auto params = ProblemParams::critical(3, 1.0);
  const InversionSpec spec = InversionSpec::make(Point{1.0, 0.3, 0.0}, 1.0);
  const double bar = std::sqrt(1.0 + 1.09);
  Point on(3);
  on[0] = 2.0;
  on[1] = 0.3;
  EXPECT_EQ(kernel_ring_integral(spec, on, bar + 0.5, params), 0.0);

  std::vector<double> ratios;
  for (double gap : {1e-1, 1e-2, 1e-3}) {
    Point y{2.0 + gap, 0.3, 0.0};
    ratios.push_back(kernel_ring_integral(spec, y, bar + 0.5, params) / gap);
  }
  const double hi = *std::max_element(ratios.begin(), ratios.end());
  const double lo = *std::min_element(ratios.begin(), ratios.end());
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi / lo, 2.0);
}

TEST(KernelRing, MonotoneInOuterRadius) {
  const auto params = ProblemParams::critical(4, 1.0);
  const InversionSpec spec = InversionSpec::make(Point{0.5, 0.0, 0.0, 0.0}, 0.8);
  const Point y{0.5, 0.9, 0.0, 0.0};
  double prev = 0.0;
  for (double outer : {1.2, 1.6, 2.5}) {
    const double v = kernel_ring_integral(spec, y, outer, params);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(kernel_ring_integral(spec, Point{0.5, 0.1, 0.0, 0.0}, 2.0, params), ConfigError);
}

TEST(Threshold, Csv) {
  ThresholdResult t;
  t.x = {1.0, 0.0, 0.0};
  t.lambda_bar_numeric = 1.5;
  t.lambda_bar_closed_form = 1.25;
  t.abs_gap = 0.25;
  t.samples_used = 7;
  const std::vector<ThresholdResult> rows{t};
  EXPECT_EQ(threshold_csv(rows),
            "x_norm,lambda_bar_numeric,lambda_bar_closed_form,abs_gap,samples_used\n1,1.5,1.25,0.25,7\n");
}
