#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gjms/error.hpp"
#include "gjms/sphere_spectral.hpp"

using namespace gjms;

TEST(SurfaceArea, KnownValues) {
  constexpr double pi = std::numbers::pi;
  EXPECT_NEAR(surface_area(1), 2.0 * pi, 1e-14);
  EXPECT_NEAR(surface_area(2), 4.0 * pi, 1e-14);
  EXPECT_NEAR(surface_area(3), 2.0 * pi * pi, 1e-14);
  EXPECT_NEAR(surface_area(4), 26.318945069571622984, 1e-13);
  EXPECT_NEAR(surface_area(7), 32.469697011334145745, 1e-13);
}

TEST(ZonalGrid, AreaAndMoments) {
  const ZonalGrid grid = make_grid(3, 10);
  std::vector<double> ones(grid.nodes.size(), 1.0);
  EXPECT_NEAR(grid.integrate(ones) / surface_area(3), 1.0, 1e-14);

  // On S^3 with t = cos(theta), the mean of t^2 is 1/4.
  std::vector<double> t2;
  for (double t : grid.nodes) t2.push_back(t * t);
  EXPECT_NEAR(grid.integrate(t2) / surface_area(3), 0.25, 1e-14);

  const ZonalGrid g4 = make_grid(4, 12);
  std::vector<double> t4;
  for (double t : g4.nodes) t4.push_back(std::pow(t, 4));
  EXPECT_NEAR(g4.integrate(t4) / surface_area(4), 3.0 / 35.0, 1e-14);

  EXPECT_THROW(make_grid(1, 10), ConfigError);
  EXPECT_THROW(make_grid(3, 1), ConfigError);
}

TEST(Basis, ReferenceValues) {
  EXPECT_NEAR(basis_eval(5, 2, 0.3), -0.073888698383798922684, 1e-14);
  EXPECT_NEAR(basis_eval(3, 7, -0.77), 0.23982311657975538429, 1e-13);
  EXPECT_NEAR(basis_eval(6, 12, 0.95), 1.3275913270889420524, 1e-12);
  EXPECT_NEAR(basis_eval(4, 0, 0.1), 1.0 / std::sqrt(surface_area(4)), 1e-15);
}

TEST(Basis, OrthonormalOnGrid) {
  for (int n : {3, 4, 7}) {
    const ZonalGrid grid = make_grid(n, 40);
    for (int a = 0; a <= 20; a += 3) {
      for (int b = 0; b <= 20; b += 4) {
        std::vector<double> v;
        for (double t : grid.nodes) v.push_back(basis_eval(n, a, t) * basis_eval(n, b, t));
        EXPECT_NEAR(grid.integrate(v), a == b ? 1.0 : 0.0, 1e-12) << n << " " << a << " " << b;
      }
    }
  }
}

TEST(Transform, RoundTripAndParseval) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int n : {3, 5, 6}) {
    const ZonalGrid grid = make_grid(n, 96);
    SpectralCoeffs c = SpectralCoeffs::zeros(n, 40);
    for (double& x : c.coeffs) x = normal(rng);
    const SphereFunction f = synthesize(c, grid);
    AnalyzeDiagnostics diag;
    const SpectralCoeffs back = analyze(f, 40, &diag);
    EXPECT_FALSE(diag.truncation_warning);
    for (std::size_t l = 0; l < c.coeffs.size(); ++l) EXPECT_NEAR(back.coeffs[l], c.coeffs[l], 1e-12);

    double energy = 0.0;
    for (double x : c.coeffs) energy += x * x;
    std::vector<double> sq;
    for (double v : f.values) sq.push_back(v * v);
    EXPECT_NEAR(grid.integrate(sq) / energy, 1.0, 1e-12);

    // Pointwise evaluation agrees with the grid samples.
    EXPECT_NEAR(evaluate(c, grid.nodes[5]), f.values[5], 1e-11);
  }
}

TEST(Transform, TruncationWarning) {
  const ZonalGrid grid = make_grid(3, 64);
  SpectralCoeffs c = SpectralCoeffs::unit(3, 30, 30);
  AnalyzeDiagnostics diag;
  const SpectralCoeffs low = analyze(synthesize(c, grid), 10, &diag);
  EXPECT_TRUE(diag.truncation_warning);
  EXPECT_NEAR(diag.tail_fraction, 1.0, 1e-12);
  for (double x : low.coeffs) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Gjms, QuadraticFormOfBasis) {
  for (const auto& params : {ProblemParams::critical(3, 1.0), ProblemParams::critical(7, 2.5)}) {
    for (int l : {0, 1, 5, 17}) {
      const SpectralCoeffs y = SpectralCoeffs::unit(params.n(), 20, l);
      EXPECT_NEAR(quadratic_form(y, params) / gjms_multiplier(params, l), 1.0, 1e-14);
    }
  }
}

TEST(Gjms, Linearity) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const auto params = ProblemParams::critical(5, 1.5);
  SpectralCoeffs u = SpectralCoeffs::zeros(5, 25);
  SpectralCoeffs v = SpectralCoeffs::zeros(5, 25);
  for (std::size_t l = 0; l < u.coeffs.size(); ++l) {
    u.coeffs[l] = normal(rng);
    v.coeffs[l] = normal(rng);
  }
  SpectralCoeffs sum = u;
  for (std::size_t l = 0; l < u.coeffs.size(); ++l) sum.coeffs[l] = 2.0 * u.coeffs[l] - 3.0 * v.coeffs[l];
  const SpectralCoeffs pu = apply_gjms(u, params);
  const SpectralCoeffs pv = apply_gjms(v, params);
  const SpectralCoeffs psum = apply_gjms(sum, params);
  for (std::size_t l = 0; l < u.coeffs.size(); ++l) {
    const double want = 2.0 * pu.coeffs[l] - 3.0 * pv.coeffs[l];
    EXPECT_NEAR(psum.coeffs[l], want, 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(LpNorm, ConstantsAndSignRules) {
  const ZonalGrid grid = make_grid(3, 32);
  SphereFunction f{grid, std::vector<double>(grid.nodes.size(), 2.0)};
  const double area = surface_area(3);
  EXPECT_NEAR(lp_norm(f, 3.0), 2.0 * std::cbrt(area), 1e-13);
  EXPECT_NEAR(lp_integral(grid, f.values, 2.5), std::pow(2.0, 2.5) * area, 1e-12);
  f.values[3] = -1.0;
  EXPECT_THROW(lp_norm(f, 2.5), ConfigError);
  EXPECT_NO_THROW(lp_norm(f, 2.0));
  EXPECT_THROW(lp_norm(f, 0.5), ConfigError);
}

TEST(Json, RoundTrip) {
  SpectralCoeffs c = SpectralCoeffs::zeros(4, 6);
  for (std::size_t l = 0; l < c.coeffs.size(); ++l) c.coeffs[l] = 0.1 * l - 1.0 / 3.0;
  const nlohmann::json jc = c;
  const auto c2 = jc.get<SpectralCoeffs>();
  EXPECT_EQ(c2.n, 4);
  EXPECT_EQ(c2.degree_max, 6);
  EXPECT_EQ(c2.coeffs, c.coeffs);

  const SphereFunction f = synthesize(c, make_grid(4, 20));
  const nlohmann::json jf = f;
  const auto f2 = nlohmann::json::parse(jf.dump()).get<SphereFunction>();
  EXPECT_EQ(f2.values, f.values);
  EXPECT_EQ(f2.grid.nodes, f.grid.nodes);
}
