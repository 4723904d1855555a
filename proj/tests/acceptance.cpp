// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//
//   acceptance [--expect-fail 14,...]
//
// Exit status is 0 when the failing set equals the expected set, so a known miss
// stays visible in the output without turning ctest red, and an unexpected pass or
// failure does.
#include "sasaki/isoperimetry.hpp"
#include "sasaki/stability.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace sasaki;

namespace {

const Vec4 kId(1, 0, 0, 0);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Vec4 random_point(const SpaceForm& m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  if (m.spherical()) return m.canonical(Vec4(n(rng), n(rng), n(rng), n(rng)).normalized());
  return Vec4(n(rng), n(rng), n(rng), 0.0);
}

// ---- independent oracles ----

// Heisenberg CC-geodesic through the origin with initial angle th0: the frame angle turns at -2 lambda
Vec4 heisenberg_geodesic(double th0, double lam, double s) {
  auto xy = [&](double u) {
    const double th = th0 - 2 * lam * u;
    return std::pair{-(std::sin(th) - std::sin(th0)) / (2 * lam), (std::cos(th) - std::cos(th0)) / (2 * lam)};
  };
  // t' = y x' - x y' along the curve
  auto tdot = [&](double u) {
    const auto [x, y] = xy(u);
    const double th = th0 - 2 * lam * u;
    return y * std::cos(th) - x * std::sin(th);
  };
  const GaussRule g = gauss_legendre(40);
  double t = 0;
  for (int blk = 0; blk < 16; ++blk) {
    const double lo = s * blk / 16, hi = s * (blk + 1) / 16;
    for (std::size_t k = 0; k < g.x.size(); ++k) t += 0.5 * (hi - lo) * g.w[k] * tdot(lo + 0.5 * (hi - lo) * (g.x[k] + 1));
  }
  const auto [x, y] = xy(s);
  return Vec4(x, y, t, 0);
}

// v_i(s) with v(0) = 0, v'(0) = -2(-1)^{i-1}, v''(0) = -4 mu
double v_side(double tau, double mu, int side, double s) {
  const double a = std::sqrt(tau), sg = side == 1 ? 1.0 : -1.0;
  return 4 * mu / tau * (std::cos(a * s) - 1) - 2 * sg / a * std::sin(a * s);
}

double first_zero(double tau, double mu, int side) {
  const double period = 2 * kPi / std::sqrt(tau);
  const int n = 20000;
  double lo = period / n * 0.5;
  for (int k = 1; k <= n; ++k) {
    const double hi = period * k / n;
    if (hi <= lo) continue;
    if (v_side(tau, mu, side, lo) * v_side(tau, mu, side, hi) <= 0) {
      double a = lo, b = hi;
      for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
        const double m = 0.5 * (a + b);
        (v_side(tau, mu, side, a) * v_side(tau, mu, side, m) <= 0 ? b : a) = m;
      }
      return 0.5 * (a + b);
    }
    lo = hi;
  }
  return period;
}

// 2-D Gauss-Legendre of |N_h|^{-1}(Z(w)^2 - q w^2) j with <N,T>' by central differences
double band_oracle(const RuledPatch& P, double a, double b, const EpsProfile& phi) {
  const GaussRule g = gauss_legendre(40);
  const double hs = 1e-5;
  double total = 0;
  for (std::size_t ie = 0; ie < g.x.size(); ++ie) {
    const double e = phi.lo() + 0.5 * phi.length() * (g.x[ie] + 1), we = 0.5 * phi.length() * g.w[ie];
    const double f = phi.value(e);
    for (int blk = 0; blk < 8; ++blk) {
      const double lo = a + (b - a) * blk / 8.0, hi = a + (b - a) * (blk + 1) / 8.0;
      for (std::size_t is = 0; is < g.x.size(); ++is) {
        const double s = lo + 0.5 * (hi - lo) * (g.x[is] + 1), ws = 0.5 * (hi - lo) * g.w[is];
        const auto x = P.scalars(e, s);
        const double dNT = (P.scalars(e, s + hs).NT - P.scalars(e, s - hs).NT) / (2 * hs);
        total += we * ws * (f * f * dNT * dNT / x.Nh - x.q_over_Nh * f * f * x.NT * x.NT) * x.j;
      }
    }
  }
  return total;
}

RuledPatch random_patch(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  const auto m = SpaceForm::sphere3();
  const Vec4 p = random_point(m, rng);
  const Frame f = m.frame_at(p);
  const double th = U(rng), mu = U(rng), lam = U(rng);
  auto g = std::make_shared<const CCGeodesic>(shoot(m, p, std::cos(th) * f.x1 + std::sin(th) * f.x2, mu, 2.0));
  return patch_from_geodesic(g, Closure{}, 1 + static_cast<int>(rng() % 2), lam);
}

SurfaceAssembly reference_torus() {
  auto g = std::make_shared<const CCGeodesic>(shoot(SpaceForm::sphere3(), kId, left_j(kId), 0.0, 2 * kPi + 0.2));
  return assemble_cmc(g, detect_closure(*g), 0.0);
}

// ---- criteria ----

Outcome c1() {
  std::mt19937_64 rng(101);
  double res = 0, kerr = 0;
  for (auto m : {SpaceForm::heisenberg(), SpaceForm::sphere3(), SpaceForm::projective3()})
    for (int k = 0; k < 1000; ++k) {
      const Vec4 p = random_point(m, rng);
      std::normal_distribution<double> n;
      const Vec4 v = m.tangent_part(p, Vec4(n(rng), n(rng), n(rng), n(rng)));
      const auto r = m.sasakian_residuals(p, v);
      res = std::max({res, r.reeb, r.rotation});
      kerr = std::max(kerr, std::abs(m.webster_curvature(p) - m.kappa()));
    }
  return {res < 1e-5 && kerr < 1e-3, fmt("max residual %.3g (< 1e-5), max |K - kappa| %.3g (< 1e-3)", res, kerr)};
}

Outcome c2() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> U(-2, 2);
  double dn = 0, dt = 0, dk = 0;
  for (auto m : {SpaceForm::heisenberg(), SpaceForm::sphere3()})
    for (int n = 0; n < 5; ++n) {
      const Vec4 p = random_point(m, rng);
      const Frame f = m.frame_at(p);
      const double th = U(rng), lam = U(rng), L = 10;
      const auto g = shoot(m, p, std::cos(th) * f.x1 + std::sin(th) * f.x2, lam, L, 1e-3);
      for (std::size_t k = 2; k + 2 < g.size(); ++k) {
        dn = std::max(dn, std::abs(m.norm(g.point(k), g.velocity(k)) - 1) / L);
        dt = std::max(dt, std::abs(m.eta(g.point(k), g.velocity(k))) / L);
        dk = std::max(dk, std::abs(g.curvature_estimate(k) - lam) / L);
      }
    }
  const auto H = SpaceForm::heisenberg();
  const double lam = 1.1, th0 = 0.3, L = 3.0;
  const Vec4 w(std::cos(th0), std::sin(th0), 0, 0);
  const Vec4 exact = heisenberg_geodesic(th0, lam, L);
  const double e1 = (shoot(H, Vec4::Zero(), w, lam, L, 0.025).point(120) - exact).norm();
  const double e2 = (shoot(H, Vec4::Zero(), w, lam, L, 0.0125).point(240) - exact).norm();
  const double ratio = e1 / e2;
  const bool ok = dn < 1e-7 && dt < 1e-7 && dk < 1e-7 && std::abs(ratio - 16) <= 2;
  return {ok, fmt("drift |g'| %.3g, <g',T> %.3g, curvature %.3g per unit length (< 1e-7); ", dn, dt, dk) +
                  fmt("halving ratio %.4g (16 +- 2)", ratio)};
}

Outcome c3() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  double worst = 0;
  int cases = 0;
  while (cases < 20) {
    const auto m = cases % 2 ? SpaceForm::heisenberg() : SpaceForm::sphere3();
    const double lam = U(rng), mu = U(rng);
    const double tau = 4 * (lam * lam + m.kappa());
    if (tau < 0.2) continue;
    const int side = 1 + cases % 2;
    const double sg = side == 1 ? 1.0 : -1.0;
    const Vec4 p0 = random_point(m, rng);
    const auto Gam = shoot(m, p0, m.frame_at(p0).x1, mu, 2.0);
    // pencil of rays leaving Gamma(e) along (-1)^{i-1} J Gamma'(e), differenced in e
    const double e0 = 1.0, h = 1e-4, smax = 2 * kPi / std::sqrt(tau);
    auto ray = [&](double e) {
      const Vec4 q = Gam.point_at(e);
      return shoot(m, q, Vec4(sg * m.j_rotate(q, Gam.velocity_at(e))), lam, smax + 1e-2);
    };
    const CCGeodesic rp = ray(e0 + h), rm = ray(e0 - h), r0 = ray(e0);
    const auto vj = vertical_jacobi(tau, 0, -2 * sg, -4 * mu);
    for (double s = 0; s <= smax; s += 0.02) {
      const Vec4 X = (rp.point_at(s) - rm.point_at(s)) / (2 * h);
      worst = std::max(worst, std::abs(m.eta(r0.point_at(s), X) - vj.v(s)));
    }
    ++cases;
  }
  return {worst < 1e-4, fmt("sup |<X,T> - v| over 20 pencils %.3g (< 1e-4)", worst)};
}

Outcome c4() {
  double mu0 = 0;
  for (double tau : {0.5, 4.0, 9.3})
    for (int side : {1, 2}) mu0 = std::max(mu0, std::abs(cut_constant(tau, 0, side) - kPi / std::sqrt(tau)));
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> U(-2, 2);
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const double lam = U(rng), mu = U(rng), tau = 4 * (lam * lam + 1);
    const int side = 1 + k % 2;
    worst = std::max(worst, std::abs(cut_constant(tau, mu, side) - first_zero(tau, mu, side)));
  }
  return {mu0 < 1e-9 && worst < 1e-12, fmt("mu = 0 gap %.3g (< 1e-9), closed vs bisection %.3g (< 1e-12)", mu0, worst)};
}

Outcome c5() {
  auto g = std::make_shared<const CCGeodesic>(shoot(SpaceForm::sphere3(), kId, left_j(kId), 0.0, 2 * kPi + 0.2));
  const RuledPatch P = patch_from_geodesic(g, detect_closure(*g), 2, 0.0);
  double ref = 0;
  for (int k = 0; k < 1000; ++k) {
    const double s = P.cut() * k / 999.0;
    const auto x = P.scalars(0.3, s);
    ref = std::max({ref, std::abs(x.Nh - std::sin(2 * s)), std::abs(x.NT - std::cos(2 * s)), std::abs(x.j - 1),
                    std::abs(x.BZS + 1), std::abs(x.q)});
  }
  std::mt19937_64 rng(505);
  double lim = 0;
  for (int k = 0; k < 50; ++k) {
    const RuledPatch R = random_patch(rng);
    const double c = R.cut();
    for (double s : {0.0, 1e-5, 1e-4, c - 1e-4, c - 1e-5, c}) {
      const auto x = R.scalars(0, s);
      lim = std::max({lim, std::abs(x.BZS + 1), std::abs(x.q_over_Nh)});
    }
  }
  return {ref < 1e-10 && lim < 0.01,
          fmt("reference fields %.3g (< 1e-10), endpoint limits within 1e-4 of the ends %.3g (< 0.01)", ref, lim)};
}

Outcome c6() {
  std::mt19937_64 rng(606);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const RuledPatch P = random_patch(rng);
    const double c = P.cut();
    for (int j = 0; j <= 200; ++j) {
      const double s = c * j / 200;
      const auto a = P.scalars(0, s), b = P.scalars(0, c - s);
      worst = std::max({worst, std::abs(a.v - b.v), std::abs(a.NT + b.NT)});
    }
  }
  return {worst < 1e-12, fmt("max symmetry defect %.3g (< 1e-12)", worst)};
}

Outcome c7() {
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> U(-1.5, 1.5), F(0.02, 0.98);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const RuledPatch P = random_patch(rng);
    double a = F(rng) * P.cut(), b = F(rng) * P.cut();
    if (a > b) std::swap(a, b);
    const EpsProfile phi = EpsProfile::bump(0.2, 1.5);
    const double closed = aux_band_value(P, a, b, phi.l2(), phi.length());
    const double direct = band_oracle(P, a, b, phi);
    worst = std::max(worst, std::abs(closed - direct) / std::abs(direct));
  }
  return {worst < 1e-6, fmt("max relative error %.3g over 20 bands (< 1e-6)", worst)};
}

Outcome c8() {
  const SurfaceAssembly A = reference_torus();
  const StabilityReport R = instability_verdict(A);
  const double s1 = A.patches[0].patch.cut();
  double q_last = 0, sigma_last = 0;
  for (const auto& [s, q] : R.Q_sigma)
    if (std::abs(s - 0.025 * s1) < 1e-12) sigma_last = s, q_last = q;
  // oracle: Q(w_sigma) = -6 pi c^2 + 4 pi c with c = cos 2 sigma
  const double c = std::cos(2 * sigma_last), oracle = -6 * kPi * c * c + 4 * kPi * c;
  const bool ok = std::abs(R.C) <= 1e-8 && std::abs(R.Q_limit + 2 * kPi) <= 1e-8 && sigma_last > 0 && q_last < 0 &&
                  std::abs(q_last + 2 * kPi) < 0.05 * 2 * kPi && std::abs(q_last - oracle) < 1e-6 &&
                  R.verdict == Verdict::unstable_certified;
  return {ok, fmt("C %.3g, Q_limit %.12g, Q(w_sigma) at 0.025 s1 = %.8g; ", R.C, R.Q_limit, q_last) +
                  "verdict " + to_string(R.verdict)};
}

Outcome c9() {
  const double root = bisect_root([](double l) { return q_limit_circle(0, l); }, 3.0, 6.0, 1e-15);
  const double lo = q_limit_circle(0, std::sqrt(2.0) * kPi - 1e-6), hi = q_limit_circle(0, std::sqrt(2.0) * kPi + 1e-6);
  return {std::abs(root - std::sqrt(2.0) * kPi) < 1e-10 && lo > 0 && hi < 0,
          fmt("root %.15g vs sqrt(2) pi, gap %.3g (< 1e-10)", root, std::abs(root - std::sqrt(2.0) * kPi))};
}

Outcome c10() {
  const SurfaceAssembly A = reference_torus();
  const auto sv = second_variation_vertical(A, EpsProfile::sine(1, 2 * kPi), 0.1);
  // int_0^{2 pi} (d/de sin e)^2 = pi
  const double rel = std::abs(sv.A2_numeric - kPi) / kPi;
  const double v = std::abs(sv.V2_numeric) / sv.scale;
  return {rel < 1e-3 && v < 1e-4, fmt("A''(0) relative error %.3g (< 1e-3), |V''(0)|/scale %.3g (< 1e-4)", rel, v)};
}

Outcome c11() {
  const auto H = SpaceForm::heisenberg();
  const PansuSphere A = build_pansu(H, 1.0, Vec4::Zero(), 64, 48);
  const double va = enclosed_volume_heisenberg(A.mesh);
  double worst = 0;
  for (double r : {-0.5, 0.5}) {
    // the dilated sphere is S_{lambda e^{-r}}, built from scratch
    const PansuSphere B = build_pansu(H, std::exp(-r), Vec4::Zero(), 64, 48);
    worst = std::max({worst, std::abs(B.area / A.area / std::exp(3 * r) - 1),
                      std::abs(enclosed_volume_heisenberg(B.mesh) / va / std::exp(4 * r) - 1)});
    // and the mesh pushed through delta_r
    Mesh D = A.mesh;
    for (auto& p : D.vertices) p = dilate(H, p, r);
    worst = std::max({worst, std::abs(subriemannian_area(H, D) / A.area / std::exp(3 * r) - 1),
                      std::abs(enclosed_volume_heisenberg(D) / va / std::exp(4 * r) - 1)});
  }
  return {worst < 1e-6, fmt("max ratio error %.3g (< 1e-6)", worst)};
}

Outcome c12() {
  double worst = 0;
  std::string d;
  for (double lam : {0.0, 0.5, 1.0, 2.0}) {
    const PansuSphere P = build_pansu(SpaceForm::sphere3(), lam, kId, 256, 128);
    const double closed = kPi * kPi / std::pow(1 + lam * lam, 1.5);
    worst = std::max(worst, std::abs(P.area - closed) / closed);
  }
  return {worst < 5e-3, fmt("max relative gap %.3g (< 0.5%%)", worst)};
}

Outcome c13() {
  const PansuVolume v = pansu_volume(1.0, 1000000, 13);
  // oracle: Simpson on V' = -(3/2) pi^2 (1 + t^2)^{-5/2} from V(0) = pi^2
  auto simpson = [](double lam) {
    const int n = 200000;
    auto f = [](double t) { return -1.5 * kPi * kPi * std::pow(1 + t * t, -2.5); };
    const double h = lam / n;
    double s = f(0) + f(lam);
    for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * f(k * h);
    return kPi * kPi + s * h / 3;
  };
  const double ode_gap = std::abs(v.ode - simpson(1.0));
  const double mc_gap = std::abs(v.ode - v.montecarlo) / v.ode;
  const double tail = pansu_volume_ode(1e3);
  return {mc_gap < 0.01 && ode_gap < 1e-8 && tail < 1e-3 * kPi * kPi,
          fmt("ODE %.8g vs MC %.8g: %.3g (< 1%%); ", v.ode, v.montecarlo, mc_gap) +
              fmt("V(1e3) = %.3g (< 1e-3 pi^2); ODE vs Simpson %.3g", tail, ode_gap)};
}

Outcome c14() {
  const double lam = 0.1;
  const double A_p = kPi * kPi / std::pow(1 + lam * lam, 1.5);
  const double V = pansu_volume_ode(lam);
  const double rho = std::sqrt(V / (kPi * kPi));
  const double A_c = 2 * kPi * kPi * rho * std::sqrt(1 - rho * rho);
  const double margin = (A_p - A_c) / A_p;
  CompareOptions opt;
  opt.mc_samples = 0;
  const auto row = compare_rp3({lam}, opt).rows.at(0);
  const bool agrees = std::abs(row.A_clifford - A_c) < 1e-10 && std::abs(row.A_pansu_closed - A_p) < 1e-12;
  return {A_c < A_p && margin > 0.5 && agrees,
          fmt("A_pansu %.8g, A_clifford %.8g, margin %.4g of the Pansu area (needs > 0.5)", A_p, A_c, margin)};
}

Outcome c15() {
  const auto m = SpaceForm::projective3();
  auto g = std::make_shared<const CCGeodesic>(shoot(m, kId, m.frame_at(kId).x1, 0.0, kPi + 0.2));
  const Closure c = detect_closure(*g);
  const SurfaceAssembly A = assemble_cmc(g, c, 0.0);
  const StabilityReport R = instability_verdict(A);
  const bool ok = c.circle && std::abs(c.length - kPi) < 1e-6 && c.length <= std::sqrt(2.0) * kPi && !R.flag_length &&
                  R.verdict == Verdict::criterion_inconclusive;
  return {ok, fmt("circle %.0f, length %.12g (<= sqrt(2) pi), Q_limit %.8g, verdict ", c.circle, c.length, R.Q_limit) +
                  to_string(R.verdict)};
}

struct Criterion {
  int id;
  const char* name;
  double budget;  // seconds, <= 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  for (int k = 1; k < argc; ++k)
    if (std::strcmp(argv[k], "--expect-fail") == 0 && k + 1 < argc) {
      std::stringstream ss(argv[++k]);
      std::string tok;
      while (std::getline(ss, tok, ',')) expected.insert(std::stoi(tok));
    }

  const Criterion all[] = {
      {1, "structure_validation", 5, c1},      {2, "geodesic_conservation", 10, c2},
      {3, "jacobi_closed_form", 30, c3},       {4, "cut_constant", 0, c4},
      {5, "reference_patch_fields", 0, c5},    {6, "patch_symmetries", 0, c6},
      {7, "band_boundary_formula", 20, c7},    {8, "reference_torus_pipeline", 60, c8},
      {9, "threshold_sharpness", 0, c9},       {10, "vertical_second_variation", 0, c10},
      {11, "heisenberg_dilation", 0, c11},     {12, "pansu_areas", 60, c12},
      {13, "pansu_volume", 120, c13},          {14, "rp3_comparison_margin", 0, c14},
      {15, "rp3_short_circle", 0, c15},
  };
  std::set<int> failed;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0 && dt > c.budget) {
      o.pass = false;
      o.detail += fmt(" [over time budget %.0f s]", c.budget);
    }
    if (!o.pass) failed.insert(c.id);
    std::printf("%s %2d %-28s %s (%.2f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                !o.pass && expected.count(c.id) ? " [expected]" : "");
    std::fflush(stdout);
  }
  std::printf("%zu/15 criteria pass\n", 15 - failed.size());
  return failed == expected ? 0 : 1;
}
