#include "sasaki/isoperimetry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace sasaki;

namespace {

const double kPi2 = kPi * kPi;

// oracle: composite Simpson on V' = -(3/2) pi^2 (1 + t^2)^{-5/2}, independent of the library quadrature
double volume_simpson(double lambda, int n = 20000) {
  auto f = [](double t) { return -1.5 * kPi2 * std::pow(1 + t * t, -2.5); };
  const double h = lambda / n;
  double s = f(0) + f(lambda);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * f(k * h);
  return kPi2 + s * h / 3;
}

Mesh clifford_mesh(double rho, int n) {
  const double r = std::sqrt(1 - rho * rho);
  Mesh m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = 2 * kPi * i / n, b = 2 * kPi * j / n;
      m.vertices.push_back(Vec4(rho * std::cos(a), rho * std::sin(a), r * std::cos(b), r * std::sin(b)));
    }
  auto id = [n](int i, int j) { return (i % n) * n + (j % n); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

}  // namespace

TEST(PansuArea, ClosedForm) {
  EXPECT_NEAR(pansu_area_closed(0), kPi2, 1e-14);
  EXPECT_NEAR(pansu_area_closed(1), 3.4894, 1e-4);
  EXPECT_NEAR(pansu_area_closed(1), kPi2 / std::pow(2.0, 1.5), 1e-14);
  double prev = pansu_area_closed(0);
  for (int k = 1; k <= 100; ++k) {
    const double a = pansu_area_closed(0.05 * k);
    EXPECT_LT(a, prev);
    prev = a;
  }
  EXPECT_THROW(pansu_area_closed(-0.1), ValidationError);
}

TEST(PansuArea, MeshQuadrature) {
  for (double lam : {0.0, 0.5, 1.0, 2.0}) {
    const PansuArea a = pansu_area(lam, 256, 128);
    EXPECT_LT(a.rel_gap, 5e-3) << "lambda " << lam;
  }
}

TEST(PansuVolume, OdeMatchesOracle) {
  EXPECT_NEAR(pansu_volume_ode(0), kPi2, 1e-14);
  for (double lam : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(pansu_volume_ode(lam), volume_simpson(lam), 1e-9) << lam;
    EXPECT_NEAR(pansu_volume_closed(lam), pansu_volume_ode(lam), 1e-10) << lam;
  }
  // int_0^inf (1 + t^2)^{-5/2} dt = int_0^{pi/2} cos^3 = 2/3, so V -> 0
  EXPECT_LT(pansu_volume_ode(1e3), 1e-3 * kPi2);
  EXPECT_GE(pansu_volume_ode(1e3), 0);
  double prev = kPi2;
  for (int k = 1; k <= 40; ++k) {
    const double v = pansu_volume_ode(0.05 * k);
    EXPECT_LT(v, prev);
    prev = v;
  }
}

TEST(PansuVolume, MonteCarloAgrees) {
  const PansuVolume v = pansu_volume(1.0, 1000000, 2024);
  EXPECT_FALSE(v.flagged);
  EXPECT_LT(std::abs(v.ode - v.montecarlo), 0.01 * v.ode);
  EXPECT_LT(std::abs(v.ode - v.montecarlo), 4 * v.mc_stderr);
  // same seed, same bits
  const PansuVolume w = pansu_volume(1.0, 1000000, 2024);
  EXPECT_EQ(v.montecarlo, w.montecarlo);
}

TEST(MonteCarlo, CliffordSolidTorus) {
  // {|z1| < rho} has volume 2 pi^2 rho^2 in S^3
  const double rho = 0.6;
  const Mesh m = clifford_mesh(rho, 160);
  const auto mc = monte_carlo_volume(m, Vec4(0, 0, 1, 0), 400000, 5);
  const double exact = 2 * kPi2 * rho * rho;
  EXPECT_LT(std::abs(mc.inside - exact), 3 * mc.stderr_ + 2e-3 * exact);
  EXPECT_NEAR(mc.inside + mc.outside, 2 * kPi2, 1e-12);
  const auto other = monte_carlo_volume(m, Vec4(1, 0, 0, 0), 400000, 5);
  EXPECT_NEAR(other.inside, mc.outside, 1e-9);
}

TEST(MonteCarlo, ComplementaryReferences) {
  // parity from two different references on opposite sides: the counts add up to the whole sphere
  const PansuSphere P = build_pansu(SpaceForm::sphere3(), 0.5, Vec4(1, 0, 0, 0), 128, 64);
  const Vec4 in = (Vec4(1, 0, 0, 0) + P.far_pole).normalized();
  const SphereLocator from_out(P.mesh, -in), from_in(P.mesh, in);
  std::mt19937_64 gen(11);
  std::normal_distribution<double> N;
  const int n = 200000;
  long a = 0, b = 0;
  for (int k = 0; k < n; ++k) {
    Vec4 x(N(gen), N(gen), N(gen), N(gen));
    x.normalize();
    a += from_out.across(x);
    b += from_in.across(x);
  }
  const double p = static_cast<double>(a) / n, q = static_cast<double>(b) / n;
  EXPECT_LT(std::abs(p + q - 1), 3 * std::sqrt(p * (1 - p) / n) + 1e-3);
  EXPECT_LT(std::abs(2 * kPi2 * p - pansu_volume_closed(0.5)), 0.02 * pansu_volume_closed(0.5));
}

TEST(MonteCarlo, UniformSphere) {
  // all-inside region: every sample of a mesh-free fraction counts; checks the sampler's normalization
  std::mt19937_64 gen(3);
  std::normal_distribution<double> N;
  const int n = 200000;
  long hemi = 0;
  for (int k = 0; k < n; ++k) {
    Vec4 x(N(gen), N(gen), N(gen), N(gen));
    x.normalize();
    ASSERT_NEAR(x.norm(), 1, 1e-14);
    hemi += x[0] > 0;
  }
  EXPECT_LT(std::abs(static_cast<double>(hemi) / n - 0.5), 3 * 0.5 / std::sqrt(n));
}

TEST(Projection, NoAntipodalPairs) {
  for (double lam : {0.1, 0.5, 1.0, 2.0}) {
    const PansuSphere P = build_pansu(SpaceForm::sphere3(), lam, Vec4(1, 0, 0, 0), 64, 32);
    EXPECT_GT(antipodal_gap(P.mesh), mean_edge_length(P.mesh)) << lam;
  }
  const PansuSphere S0 = build_pansu(SpaceForm::sphere3(), 0, Vec4(1, 0, 0, 0), 64, 32);
  EXPECT_LT(antipodal_gap(S0.mesh), 1e-9);
}

TEST(Clifford, Profile) {
  const CliffordPoint c = clifford_profile(1 / std::sqrt(2.0));
  EXPECT_NEAR(c.area, kPi2, 1e-12);
  EXPECT_NEAR(c.volume_inner, kPi2 / 2, 1e-12);
  EXPECT_NEAR(c.volume_outer, kPi2 / 2, 1e-12);
  EXPECT_LT(c.nh_max_error, 1e-10);
  for (double rho : {0.1, 0.3, 0.9, 0.99}) {
    const CliffordPoint d = clifford_profile(rho);
    EXPECT_NEAR(d.volume_inner + d.volume_outer, kPi2, 1e-12);
    EXPECT_LT(d.nh_max_error, 1e-10);
    EXPECT_NEAR(clifford_area_numeric(rho, 256), d.area, 1e-3 * d.area);
  }
  EXPECT_LT(clifford_profile(1 - 1e-10).area, 1e-3);
  EXPECT_THROW(clifford_profile(1.0), ValidationError);
  EXPECT_THROW(clifford_profile(0.0), ValidationError);
}

TEST(Compare, SmallLambdaTorusWins) {
  CompareOptions opt;
  opt.mc_samples = 0;
  const Comparison c = compare_rp3({0.1}, opt);
  ASSERT_EQ(c.rows.size(), 1u);
  const auto& r = c.rows[0];
  EXPECT_NEAR(kPi2 * r.rho_matched * r.rho_matched, r.V_ode, 1e-12);
  EXPECT_TRUE(r.torus_wins);
  EXPECT_LT(r.A_clifford, r.A_pansu_closed);
}

TEST(Compare, GridTable) {
  const auto grid = parse_grid("0.05:2.0:0.05");
  ASSERT_EQ(grid.size(), 40u);
  EXPECT_NEAR(grid.back(), 2.0, 1e-12);
  CompareOptions opt;
  opt.numeric_area = false;
  opt.mc_samples = 0;
  const Comparison c = compare_rp3(grid, opt);
  ASSERT_EQ(c.rows.size(), 40u);
  for (std::size_t k = 1; k < c.rows.size(); ++k) {
    EXPECT_LT(c.rows[k].A_pansu_closed, c.rows[k - 1].A_pansu_closed);
    EXPECT_LT(c.rows[k].V_ode, c.rows[k - 1].V_ode);
  }
  ASSERT_FALSE(c.torus_wins.empty());
  EXPECT_NEAR(c.torus_wins.front().first, 0.05, 1e-12);
  std::ostringstream os;
  write_comparison_csv(os, c, "test");
  std::istringstream is(os.str());
  std::string line;
  int n = 0;
  while (std::getline(is, line)) ++n;
  EXPECT_EQ(n, 42);  // comment, header, 40 rows
  EXPECT_THROW(parse_grid("0.1:1"), ValidationError);
  EXPECT_THROW(compare_rp3({0.0}, opt), ValidationError);
}
