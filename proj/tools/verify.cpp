#include "verify.hpp"

#include "sasaki/isoperimetry.hpp"
#include "sasaki/stability.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace sasaki::cli {

namespace {

std::string fmt(const char* f, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vec4 random_point(const SpaceForm& m, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  if (m.spherical()) return m.canonical(Vec4(n(rng), n(rng), n(rng), n(rng)).normalized());
  return Vec4(n(rng), n(rng), n(rng), 0.0);
}

CheckResult structure(std::mt19937_64& rng) {
  double worst = 0, kerr = 0;
  for (auto m : {SpaceForm::heisenberg(), SpaceForm::sphere3(), SpaceForm::projective3()})
    for (int k = 0; k < 100; ++k) {
      const Vec4 p = random_point(m, rng);
      std::normal_distribution<double> n;
      const Vec4 v = m.tangent_part(p, Vec4(n(rng), n(rng), n(rng), n(rng)));
      const auto r = m.sasakian_residuals(p, v);
      worst = std::max({worst, r.reeb, r.rotation});
      if (k < 20) kerr = std::max(kerr, std::abs(m.webster_curvature(p) - m.kappa()));
    }
  return {"sasakian_structure", worst < 1e-5 && kerr < 1e-3, fmt("residual %.3g, webster error %.3g", worst, kerr)};
}

CheckResult conservation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  double drift = 0;
  for (auto m : {SpaceForm::heisenberg(), SpaceForm::sphere3()}) {
    const Vec4 p = random_point(m, rng);
    const Frame f = m.frame_at(p);
    const double th = u(rng), lam = u(rng), L = 5;
    const auto g = shoot(m, p, std::cos(th) * f.x1 + std::sin(th) * f.x2, lam, L);
    for (std::size_t k = 0; k < g.size(); ++k)
      drift = std::max({drift, std::abs(m.norm(g.point(k), g.velocity(k)) - 1) / L,
                        std::abs(m.eta(g.point(k), g.velocity(k))) / L});
  }
  return {"geodesic_conservation", drift < 1e-7, fmt("drift per unit length %.3g", drift)};
}

CheckResult cut_constants(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2, 2);
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double lam = u(rng), mu = u(rng), tau = 4 * (lam * lam + 1);
    for (int side : {1, 2})
      worst = std::max(worst, std::abs(cut_constant(tau, mu, side) - cut_constant_bisection(tau, mu, side)));
  }
  return {"cut_constant_vs_bisection", worst < 1e-12, fmt("max gap %.3g", worst)};
}

CheckResult reference_patch(const SurfaceAssembly& A) {
  const RuledPatch& P = A.patches.at(1).patch;
  double worst = 0, sym = 0;
  for (int k = 0; k <= 200; ++k) {
    const double s = P.cut() * k / 200;
    const auto x = P.scalars(0, s);
    worst = std::max({worst, std::abs(x.Nh - std::sin(2 * s)), std::abs(x.NT - std::cos(2 * s)),
                      std::abs(x.j - 1), std::abs(x.BZS + 1), std::abs(x.q)});
    const auto y = P.scalars(0, P.cut() - s);
    sym = std::max({sym, std::abs(y.v - x.v), std::abs(y.NT + x.NT)});
  }
  return {"reference_patch_fields", worst < 1e-10 && sym < 1e-12, fmt("field error %.3g, symmetry %.3g", worst, sym)};
}

CheckResult band() {
  // a generic sheet: lambda and mu both nonzero
  const auto m = SpaceForm::sphere3();
  auto g = std::make_shared<const CCGeodesic>(shoot(m, Vec4(1, 0, 0, 0), left_j(Vec4(1, 0, 0, 0)), 0.4, 1.0));
  const RuledPatch P = patch_from_geodesic(g, Closure{}, 1, 0.7);
  const EpsProfile phi = EpsProfile::sine(1, 2 * kPi);
  const double a = 0.2 * P.cut(), b = 0.7 * P.cut();
  const double closed = aux_band_value(P, a, b, phi.l2(), 2 * kPi), direct = band_integral(P, a, b, phi.l2());
  const double rel = std::abs(closed - direct) / std::max(1e-12, std::abs(direct));
  return {"band_boundary_formula", rel < 1e-6, fmt("relative gap %.3g", rel)};
}

CheckResult torus_verdict(const SurfaceAssembly& A) {
  const StabilityReport R = instability_verdict(A);
  const bool ok = std::abs(R.C) < 1e-8 && std::abs(R.Q_limit + 2 * kPi) < 1e-8 &&
                  R.verdict == Verdict::unstable_certified;
  return {"reference_torus_verdict", ok, fmt("C %.3g, Q_limit %.12g", R.C, R.Q_limit)};
}

CheckResult threshold() {
  const double root = bisect_root([](double l) { return q_limit_circle(0, l); }, 3, 6);
  return {"length_threshold", std::abs(root - std::sqrt(2.0) * kPi) < 1e-10, fmt("root %.15g", root)};
}

CheckResult second_variation(const SurfaceAssembly& A) {
  const auto sv = second_variation_vertical(A, EpsProfile::sine(1, 2 * kPi), 0.1);
  const double rel = std::abs(sv.A2_numeric - sv.A2_closed) / sv.A2_closed;
  return {"vertical_second_variation", rel < 1e-3 && std::abs(sv.V2_numeric) < 1e-4 * sv.scale,
          fmt("A'' relative %.3g, V''/scale %.3g", rel, std::abs(sv.V2_numeric) / sv.scale)};
}

CheckResult dilation() {
  const auto H = SpaceForm::heisenberg();
  const PansuSphere A = build_pansu(H, 1.0, Vec4::Zero(), 48, 32);
  const PansuSphere B = build_pansu(H, std::exp(-0.5), Vec4::Zero(), 48, 32);
  const double ra = B.area / A.area / std::exp(1.5);
  const double rv = enclosed_volume_heisenberg(B.mesh) / enclosed_volume_heisenberg(A.mesh) / std::exp(2.0);
  return {"heisenberg_dilation", std::abs(ra - 1) < 1e-6 && std::abs(rv - 1) < 1e-6,
          fmt("area ratio error %.3g, volume ratio error %.3g", ra - 1, rv - 1)};
}

CheckResult pansu_areas() {
  double worst = 0;
  for (double lam : {0.0, 0.5, 1.0, 2.0}) worst = std::max(worst, pansu_area(lam, 256, 128).rel_gap);
  return {"pansu_area", worst < 5e-3, fmt("max relative gap %.3g", worst)};
}

CheckResult pansu_volumes(unsigned long long seed) {
  const PansuVolume v = pansu_volume(1.0, 200000, seed, 128, 64);
  const bool limit = pansu_volume_ode(1e3) < 1e-3 * kPi * kPi;
  return {"pansu_volume", !v.flagged && limit, fmt("ode %.6g, monte carlo %.6g", v.ode, v.montecarlo)};
}

CheckResult clifford() {
  const CliffordPoint c = clifford_profile(1 / std::sqrt(2.0));
  return {"clifford_vertical", c.nh_max_error < 1e-10 && std::abs(c.area - kPi * kPi) < 1e-12,
          fmt("| |N_h| - 1 | %.3g", c.nh_max_error)};
}

CheckResult rp3_circle() {
  const auto A = assemble_from_base(SpaceForm::projective3(), 0.0, 0.0, kPi + 0.2);
  const StabilityReport R = instability_verdict(A);
  const bool ok = A.closure.circle && std::abs(A.ell - kPi) < 1e-6 && R.verdict == Verdict::criterion_inconclusive;
  return {"rp3_short_circle", ok, fmt("ell %.12g", A.ell)};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(unsigned long long seed,
                                          const std::function<void(const CheckResult&)>& on_result) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  auto run = [&](const std::function<CheckResult()>& f, const char* name) {
    CheckResult r;
    try {
      r = f();
    } catch (const std::exception& e) {
      r = {name, false, std::string("exception: ") + e.what()};
    }
    if (on_result) on_result(r);
    out.push_back(r);
  };
  run([&] { return structure(rng); }, "sasakian_structure");
  run([&] { return conservation(rng); }, "geodesic_conservation");
  run([&] { return cut_constants(rng); }, "cut_constant_vs_bisection");
  const SurfaceAssembly torus = assemble_from_base(SpaceForm::sphere3(), 0.0, 0.0, 2 * kPi + 0.2);
  run([&] { return reference_patch(torus); }, "reference_patch_fields");
  run(band, "band_boundary_formula");
  run([&] { return torus_verdict(torus); }, "reference_torus_verdict");
  run(threshold, "length_threshold");
  run([&] { return second_variation(torus); }, "vertical_second_variation");
  run(dilation, "heisenberg_dilation");
  run(pansu_areas, "pansu_area");
  run([&] { return pansu_volumes(seed); }, "pansu_volume");
  run(clifford, "clifford_vertical");
  run(rp3_circle, "rp3_short_circle");
  return out;
}

}  // namespace sasaki::cli
