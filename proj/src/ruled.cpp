#include "sasaki/ruled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sasaki {

double Generator::wrap(double eps) const {
  // the closed interval is kept as is: on RP^3 eps_hi is the other lift of eps_lo
  if (!periodic || (eps >= eps_lo && eps <= eps_hi)) return eps;
  const double L = length();
  double r = std::fmod(eps - eps_lo, L);
  if (r < 0) r += L;
  return eps_lo + r;
}

Generator generator_from_geodesic(std::shared_ptr<const CCGeodesic> g, const Closure& closure) {
  Generator gen;
  gen.eps_lo = 0;
  gen.eps_hi = closure.circle ? closure.length : g->length();
  gen.periodic = closure.circle;
  gen.constant_torsion = true;
  const double h = -2.0 * g->lambda();
  gen.torsion = [h](double) { return h; };
  // capture a copy of the wrap rule, not the Generator itself
  const double lo = gen.eps_lo, L = gen.length();
  const bool per = gen.periodic;
  auto wrap = [lo, L, per](double e) {
    if (!per || (e >= lo && e <= lo + L)) return e;
    double r = std::fmod(e - lo, L);
    if (r < 0) r += L;
    return lo + r;
  };
  gen.point = [g, wrap](double e) { return g->point_at(wrap(e)); };
  gen.velocity = [g, wrap](double e) { return g->velocity_at(wrap(e)); };
  return gen;
}

Generator generator_from_curve(const SpaceForm& model, CurveFn point, CurveFn velocity,
                               double eps_lo, double eps_hi, bool periodic) {
  require(eps_hi > eps_lo, "generator: empty parameter interval");
  Generator gen;
  gen.point = point;
  gen.velocity = velocity;
  gen.eps_lo = eps_lo;
  gen.eps_hi = eps_hi;
  gen.periodic = periodic;
  gen.constant_torsion = false;
  gen.torsion = [model, point, velocity](double e) {
    const double h = 1e-5;
    const Vec4 p = point(e), v = velocity(e);
    const Vec4 a = (velocity(e + h) - velocity(e - h)) / (2 * h);
    return model.inner(p, model.covariant_acceleration(p, v, a), model.j_rotate(p, v));
  };
  return gen;
}

double cut_constant(double tau, double mu, int side) {
  require(tau > 0, "cut_constant: tau must be positive");
  require(side == 1 || side == 2, "cut_constant: side must be 1 or 2");
  const double sg = side == 1 ? -1.0 : 1.0;
  const double r = std::sqrt(tau);
  // half-angle branch in (0, pi) with tan = (-1)^i sqrt(tau) / (2 mu)
  double th = std::atan2(sg * r, 2.0 * mu);
  if (th <= 0) th += kPi;
  return 2.0 * th / r;
}

double cut_constant_bisection(double tau, double mu, int side) {
  require(tau > 0, "cut_constant: tau must be positive");
  const double sg = side == 1 ? -1.0 : 1.0;
  const double a = std::sqrt(tau), b = -2.0 * mu;
  auto v = [&](double s) {
    return (2.0 / a) * ((b / a) * (1.0 - std::cos(a * s)) + sg * std::sin(a * s));
  };
  const double hi = 2.0 * kPi / a;
  const int n = 20000;
  double prev = 1e-9 * hi;
  for (int k = 1; k <= n; ++k) {
    const double s = hi * k / n;
    if (sg * v(s) <= 0) return bisect_root(v, prev, s, 0.0);
    prev = s;
  }
  throw NumericError("cut_constant_bisection: no sign change found");
}

RuledPatch::RuledPatch(SpaceForm model, Generator gen, int side, double lambda, double s_max)
    : model_(model), gen_(std::move(gen)), side_(side), lambda_(lambda) {
  require(side == 1 || side == 2, "patch: side must be 1 or 2");
  tau_ = 4.0 * (lambda * lambda + model.kappa());
  require(tau_ >= 0, "patch: lambda^2 + kappa must be nonnegative");
  // tau = 0 (flat, lambda = 0): rays never reach a singular curve, so s_max is required
  require(tau_ > 0 || s_max > 0, "patch: lambda^2 + kappa = 0 needs an explicit s_max");
  vj_ = vj(gen_.eps_lo);
  cut_ = cut(gen_.eps_lo);
  s_max_ = s_max < 0 ? cut_ : s_max;
  require(s_max_ > 0 && s_max_ <= cut_ * (1 + 1e-12), "patch: s_max must lie in (0, s_i]");
}

VerticalJacobi RuledPatch::vj(double eps) const {
  return vertical_jacobi(tau_, 0.0, 2.0 * sign(), 2.0 * gen_.torsion(eps));
}

double RuledPatch::cut(double eps) const {
  if (tau_ == 0) return std::numeric_limits<double>::infinity();
  if (gen_.constant_torsion && eps != gen_.eps_lo) return cut_;
  return cut_constant(tau_, -0.5 * gen_.torsion(eps), side_);
}

Vec4 RuledPatch::ray_direction(double eps) const {
  const Vec4 p = gen_.point(eps);
  return -sign() * model_.j_rotate(p, gen_.velocity(eps));
}

CCGeodesic RuledPatch::ray(double eps, double length) const {
  if (length < 0) length = cut(eps);
  return shoot(model_, gen_.point(eps), ray_direction(eps), lambda_, length,
               std::min(1e-3, length / 4));
}

ScalarFields RuledPatch::scalars_from(const VerticalJacobi& vj, double s) const {
  ScalarFields f;
  const double sg = sign();
  const bool endpoint = s == 0.0;
  f.v = endpoint ? 0.0 : vj.v(s);
  f.dv = vj.dv(s);
  f.ddv = vj.ddv(s);
  const double D2 = 4 * f.v * f.v + f.dv * f.dv;
  const double D = std::sqrt(D2);
  f.Nh = 2 * sg * f.v / D;
  f.NT = sg * f.dv / D;
  f.j = 0.5 * D;
  f.BZS = (2 * f.v * f.ddv + 4 * f.v * f.v - f.dv * f.dv) / D2;
  const double w = f.ddv + 4 * f.v;
  // |N_h|^{-1}(1 + BZS)^2 written without the 0/0 quotient
  f.q_over_Nh = 2 * sg * f.v * w * w / (D2 * D) +
                4 * (lambda_ * lambda_ + model_.kappa() - 1) * f.Nh;
  f.q = f.Nh * f.q_over_Nh;
  return f;
}

ScalarFields RuledPatch::scalars(double eps, double s) const {
  const double c = cut(eps);
  if (s < -1e-12 * c || s > c * (1 + 1e-12)) throw ValidationError("fields: s outside [0, s_i]");
  s = std::clamp(s, 0.0, c);
  ScalarFields f = scalars_from(gen_.constant_torsion ? vj_ : vj(eps), s);
  if (s >= c) {  // exact limits at the far singular curve
    f.v = 0;
    f.Nh = 0;
    f.q = 0;
    f.q_over_Nh = 0;
    f.BZS = -1;
    f.NT = f.dv > 0 ? sign() : -sign();
    f.j = 0.5 * std::abs(f.dv);
  }
  return f;
}

PatchFields RuledPatch::fields_at(double eps, double s) const {
  PatchFields out;
  out.scalars = scalars(eps, s);
  const auto& f = out.scalars;
  Vec4 p, Z;
  if (s == 0) {
    p = gen_.point(eps);
    Z = ray_direction(eps);
  } else {
    const CCGeodesic g = ray(eps, s);
    p = g.point(g.size() - 1);
    Z = g.velocity(g.size() - 1);
  }
  const Vec4 JZ = model_.j_rotate(p, Z), T = model_.reeb(p);
  const double D = std::sqrt(4 * f.v * f.v + f.dv * f.dv);
  out.point = p;
  out.Z = Z;
  out.X = -lambda_ * f.v * Z + 0.5 * f.dv * JZ + f.v * T;
  out.S = (-sign()) * (2.0 / D) * out.X - lambda_ * f.Nh * Z;
  out.N = (-sign()) * (2 * f.v * JZ - f.dv * T) / D;
  return out;
}

Vec4 RuledPatch::conormal(double eps) const {
  if (s_max_ >= cut(eps) * (1 - 1e-12))
    throw ValidationError("conormal: boundary at the cut constant is singular");
  const PatchFields f = fields_at(eps, s_max_);
  const double nh = f.scalars.Nh;
  return (f.Z - lambda_ * nh * f.S) / std::sqrt(1 + lambda_ * lambda_ * nh * nh);
}

double RuledPatch::area(double eps_lo, double eps_hi) const {
  require(eps_hi >= eps_lo, "patch_area: reversed range");
  if (eps_hi == eps_lo) return 0.0;
  auto density = [&](double e) {
    const double c = std::min(s_max_, cut(e));
    return integrate(
        [&](double s) {
          const auto f = scalars(e, s);
          return f.Nh * f.j;
        },
        0.0, c, 1e-12);
  };
  if (gen_.constant_torsion) return (eps_hi - eps_lo) * density(eps_lo);
  return integrate(density, eps_lo, eps_hi, 1e-10);
}

Mesh RuledPatch::mesh(int n_eps, int n_s, int patch_tag) const {
  require(n_eps >= 3 && n_s >= 2, "mesh: resolution too small");
  Mesh m;
  // projective circles: keep the closing column so the +- seam is welded, not bridged
  const bool wrap = gen_.periodic && model_.kind() != ModelKind::projective3;
  const int cols = wrap ? n_eps : n_eps + 1;
  const double L = gen_.length();
  for (int k = 0; k < cols; ++k) {
    const double e = gen_.eps_lo + L * k / n_eps;
    const CCGeodesic g = ray(e, s_max_);
    for (int j = 0; j <= n_s; ++j) {
      m.vertices.push_back(g.point_at(s_max_ * j / n_s));
      m.tags.push_back({k, j, patch_tag});
    }
  }
  auto id = [&](int k, int j) { return (k % cols) * (n_s + 1) + j; };
  for (int k = 0; k < n_eps; ++k)
    for (int j = 0; j < n_s; ++j) {
      const int a = id(k, j), b = id(k + 1, j), c = id(k + 1, j + 1), d = id(k, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  return m;
}

RuledPatch patch_from_geodesic(std::shared_ptr<const CCGeodesic> Gamma, const Closure& closure,
                               int side, double lambda, double s_max) {
  return RuledPatch(Gamma->model(), generator_from_geodesic(Gamma, closure), side, lambda, s_max);
}

namespace {

// nearest sample of c to x, refined by Brent; returns (parameter, distance)
std::pair<double, double> locate(const SpaceForm& model, const CCGeodesic& c, const Vec4& x, double dom) {
  std::size_t best = 0;
  double bd = 1e300;
  for (std::size_t k = 0; k < c.size() && c.s_at(k) <= dom; ++k) {
    const double d = model.chart_distance(c.point(k), x);
    if (d < bd) {
      bd = d;
      best = k;
    }
  }
  const double lo = c.s_at(best == 0 ? 0 : best - 1);
  const double hi = c.s_at(std::min(best + 1, c.size() - 1));
  const double t = minimize(
      [&](double s) {
        const double d = model.chart_distance(c.point_at(s), x);
        return d * d;
      },
      lo, hi);
  return {t, std::min(bd, model.chart_distance(c.point_at(t), x))};
}

int relative_orientation(const Vec4& pa, const Vec4& va, const Vec4& pb, const Vec4& vb) {
  const double sp = (pa - pb).norm() <= (pa + pb).norm() ? 1.0 : -1.0;
  return (sp * va).dot(vb) >= 0 ? 1 : -1;
}

}  // namespace

CurveMatch match_curves(const SpaceForm& model, const CCGeodesic& a, const CCGeodesic& b,
                        double period, double window, double tol) {
  CurveMatch r;
  const double dom = period > 0 ? period : window;
  const double near = 10 * std::max(a.step(), b.step()) + tol;
  auto [t, d] = locate(model, a, b.start(), dom);
  if (d <= near) {
    r.shift = t;
    r.orientation = relative_orientation(a.point_at(t), a.velocity_at(t), b.start(), b.direction());
  } else if (period <= 0) {
    // injective curves: b may start before a, so look for a's start on b instead
    auto [t0, d0] = locate(model, b, a.start(), std::min(window, b.length()));
    if (d0 > near) {
      r.distance = std::min(d, d0);
      return r;
    }
    r.orientation = relative_orientation(a.start(), a.direction(), b.point_at(t0), b.velocity_at(t0));
    r.shift = -r.orientation * t0;
  } else {
    r.distance = d;
    return r;
  }

  if (period > 0) {
    const Closure cb = detect_closure(b, 1e-6);
    if (!cb.circle || std::abs(cb.length - period) > 1e-6) {
      r.distance = 1e300;
      return r;
    }
  }
  double worst = 0;
  int compared = 0;
  const int n = 64;
  const double tmax = std::min(dom, b.length());
  for (int k = 0; k <= n; ++k) {
    const double tb = tmax * k / n;
    double sa = r.shift + r.orientation * tb;
    if (period > 0) {
      sa = std::fmod(sa, period);
      if (sa < 0) sa += period;
    } else if (sa < 0 || sa > a.length()) {
      continue;
    }
    worst = std::max(worst, model.chart_distance(a.point_at(sa), b.point_at(tb)));
    ++compared;
  }
  r.distance = worst;
  r.same = compared >= 8 && worst < tol;
  return r;
}

namespace {

SingularCurve extract_singular(const RuledPatch& P, double mu, double length) {
  const SpaceForm& m = P.model();
  const double sg = P.sign();
  auto edge = [&](double e) {
    const CCGeodesic r = P.ray(e);
    const Vec4 p = r.point(r.size() - 1);
    Vec4 v = -sg * m.j_rotate(p, r.velocity(r.size() - 1));
    v -= m.eta(p, v) * m.reeb(p);
    v /= m.norm(p, v);
    return std::pair{p, v};
  };
  const double lo = P.generator().eps_lo;
  const auto [p0, v0] = edge(lo);
  SingularCurve c;
  c.curve = std::make_shared<const CCGeodesic>(shoot(m, p0, v0, mu, length));

  // curvature of the edge curve itself, from velocities at neighbouring eps
  const double ec = lo + 0.37 * std::min(P.generator().length(), 1.0), d = 1e-3;
  std::array<std::pair<Vec4, Vec4>, 5> st;
  for (int k = 0; k < 5; ++k) st[k] = edge(ec + (k - 2) * d);
  const Vec4 dv = (-st[4].second + 8 * st[3].second - 8 * st[1].second + st[0].second) / (12 * d);
  const Vec4& p = st[2].first;
  const Vec4& v = st[2].second;
  const double kappa = -0.5 * m.inner(p, m.covariant_acceleration(p, v, dv), m.j_rotate(p, v));
  c.curvature_error = std::abs(kappa - mu);
  for (double t : {0.25, 0.5, 0.75}) {
    const double e = lo + t * std::min(P.generator().length(), c.curve->length());
    c.edge_error = std::max(c.edge_error, m.chart_distance(edge(e).first, c.curve->point_at(e - lo)));
  }
  return c;
}

}  // namespace

SurfaceAssembly assemble_cmc(std::shared_ptr<const CCGeodesic> Gamma, const Closure& closure,
                             double lambda, int max_generations, double tol) {
  SurfaceAssembly A;
  A.model = Gamma->model();
  A.lambda = lambda;
  A.mu = Gamma->lambda();
  A.closure = closure;
  require(4 * (lambda * lambda + A.model.kappa()) > 0, "assemble: lambda^2 + kappa must be positive");
  require(max_generations >= 1, "assemble: max_generations must be at least 1");
  A.ell = closure.circle ? closure.length : Gamma->length();
  const double curve_len = Gamma->length();
  A.curves.push_back({Gamma, 1, 0, -1, 0.0, 0.0});

  struct Item {
    int curve, side;
    double lam;
    int orientation;
  };
  // every singular curve bounds two sheets; a curve with one sheet so far grows the next
  std::vector<int> sheets{2};
  std::vector<Item> grow{{}};
  std::vector<Item> frontier{{0, 1, lambda, 1}, {0, 2, lambda, 1}};
  for (int gen = 1; gen <= max_generations && !frontier.empty(); ++gen) {
    for (const Item& it : frontier) {
      RuledPatch P = patch_from_geodesic(A.curves[it.curve].curve, closure, it.side, it.lam);
      SingularCurve sc = extract_singular(P, A.mu, curve_len);
      sc.generation = gen;
      sc.source_patch = static_cast<int>(A.patches.size());
      sc.normal_sign = -it.orientation;
      if (sc.curvature_error > 1e-5) {
        std::ostringstream os;
        os << "singular curve curvature off by " << sc.curvature_error;
        A.notes.push_back(os.str());
      }
      int target = -1;
      for (std::size_t c = 0; c < A.curves.size() && target < 0; ++c) {
        const auto mt = match_curves(A.model, *A.curves[c].curve, *sc.curve,
                                     closure.circle ? A.ell : -1, A.ell, tol);
        if (mt.same) {
          target = static_cast<int>(c);
          if (gen == 1 && c == 1) {
            A.gamma12_equal = true;
            A.eps0 = mt.shift;
          }
        }
      }
      if (target < 0) {
        target = static_cast<int>(A.curves.size());
        A.curves.push_back(sc);
        sheets.push_back(0);
        grow.push_back({target, 3 - it.side, -it.lam, sc.normal_sign});
      }
      ++sheets[target];
      A.patches.push_back({std::move(P), gen, it.orientation, it.curve, target});
    }
    frontier.clear();
    for (std::size_t c = 0; c < A.curves.size(); ++c)
      if (sheets[c] < 2) {
        frontier.push_back(grow[c]);
        ++sheets[c];
      }
  }
  A.closed = frontier.empty();
  A.truncated = !A.closed;
  if (A.truncated) A.notes.push_back("assembly truncated at max_generations");
  for (const auto& ap : A.patches) A.total_area += ap.patch.area(0.0, A.ell);
  const auto rep = embeddedness_diagnostics(A, 48, 24);
  A.embedded = rep.embedded;
  A.notes.insert(A.notes.end(), rep.notes.begin(), rep.notes.end());
  return A;
}

double embeddedness_identity_rhs(double tau, double mu, int side, double s) {
  const double a = std::sqrt(tau), b = -2.0 * mu;
  const double sg = side == 1 ? 1.0 : -1.0;  // (-1)^{i+1}
  return b * (sg * a * std::sin(a * s) + b * std::cos(a * s)) - (a * a + b * b);
}

EmbeddednessReport embeddedness_diagnostics(const SurfaceAssembly& A, int n_eps, int n_s) {
  EmbeddednessReport R;
  const SpaceForm& m = A.model;
  for (const auto& c : A.curves) {
    const Closure cl = detect_closure(*c.curve, 1e-6);
    const bool ok = A.closure.circle ? (cl.circle && std::abs(cl.length - A.ell) < 1e-6) : !cl.circle;
    if (!ok) {
      R.closure_consistent = false;
      R.notes.push_back("singular curves differ in closure type or length");
    }
  }
  for (const auto& ap : A.patches) {
    const RuledPatch& P = ap.patch;
    const auto vj = P.vj();
    const double c = P.cut(), a2 = P.tau();
    for (int k = 1; k < 200; ++k) {
      const double s = c * k / 200.0;
      const double v = vj.v(s), dv = vj.dv(s), ddv = vj.ddv(s);
      const double lhs = 0.25 * a2 * (ddv * v - dv * dv);
      R.identity_residual = std::max(
          R.identity_residual,
          std::abs(lhs - embeddedness_identity_rhs(P.tau(), -0.5 * P.generator().torsion(0), P.side(), s)));
    }
  }
  if (R.identity_residual > 1e-9) R.notes.push_back("v'/v monotonicity identity violated");

  // mesh intersection test in a 3-D chart
  std::vector<Mesh> meshes;
  Mesh all;
  for (std::size_t i = 0; i < A.patches.size(); ++i) {
    meshes.push_back(A.patches[i].patch.mesh(n_eps, n_s, static_cast<int>(i)));
    all.append(meshes.back());
  }
  std::function<Vec3(const Vec4&)> chart;
  if (m.spherical()) {
    const Stereographic st(farthest_candidate(all));
    chart = st;
  } else {
    chart = [](const Vec4& x) { return Vec3(x.head<3>()); };
  }
  std::vector<std::array<Vec3, 3>> tris;
  struct Cell {
    int patch, k, j;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < meshes.size(); ++i) {
    const Mesh& mm = meshes[i];
    for (const auto& t : mm.triangles) {
      const auto& tg = mm.tags[t[0]];  // lower-left corner of the grid cell
      if (tg[1] == 0 || tg[1] == n_s - 1) continue;  // cells touching a singular curve
      tris.push_back({chart(mm.vertices[t[0]]), chart(mm.vertices[t[1]]), chart(mm.vertices[t[2]])});
      cells.push_back({static_cast<int>(i), tg[0], tg[1]});
    }
  }
  double edge = 0;
  for (const auto& t : tris) edge += (t[0] - t[1]).norm() + (t[1] - t[2]).norm() + (t[2] - t[0]).norm();
  edge /= std::max<std::size_t>(1, 3 * tris.size());
  const bool periodic = A.closure.circle;
  auto skip = [&](int a, int b) {
    const Cell &ca = cells[a], &cb = cells[b];
    if (ca.patch != cb.patch) return false;
    int dk = std::abs(ca.k - cb.k);
    if (periodic) dk = std::min(dk, n_eps - dk);
    return dk <= 1 && std::abs(ca.j - cb.j) <= 1;
  };
  if (!tris.empty()) {
    const auto st = count_intersections(tris, skip, 2 * edge);
    R.pairs_tested = st.pairs_tested;
    R.intersections_off_singular = st.intersecting;
  }
  if (R.intersections_off_singular > 0) {
    std::ostringstream os;
    os << R.intersections_off_singular << " triangle pairs intersect away from singular curves";
    R.notes.push_back(os.str());
  }
  R.embedded = R.closure_consistent && R.identity_residual <= 1e-9 && R.intersections_off_singular == 0;
  return R;
}

Mesh assembly_mesh(const SurfaceAssembly& A, int n_eps, int n_s) {
  Mesh all;
  for (std::size_t i = 0; i < A.patches.size(); ++i)
    all.append(A.patches[i].patch.mesh(n_eps, n_s, static_cast<int>(i)));
  return weld(A.model, all, 1e-6);
}

PansuSphere build_pansu(const SpaceForm& model, double lambda, const Vec4& pole, int n_directions,
                        int n_s) {
  require(model.kind() != ModelKind::projective3, "build_pansu: use sphere3 or heisenberg");
  require(lambda >= 0, "build_pansu: lambda must be nonnegative");
  require(model.spherical() || lambda > 0, "build_pansu: heisenberg needs lambda > 0");
  require(n_directions >= 8 && n_s >= 4, "build_pansu: resolution too small");
  model.validate_point(pole);
  PansuSphere P;
  P.model = model;
  P.lambda = lambda;
  P.pole = pole;
  const double tau = 4 * (lambda * lambda + model.kappa());
  const double s_ref = 2 * kPi / std::sqrt(tau);
  const Frame f = model.frame_at(pole);
  auto dir = [&](double th) { return Vec4(std::cos(th) * f.x1 + std::sin(th) * f.x2); };

  std::vector<CCGeodesic> probe;
  for (int k = 0; k < 16; ++k) probe.push_back(shoot(model, pole, dir(2 * kPi * k / 16), lambda, 1.5 * s_ref));
  auto spread = [&](double s) {
    Vec4 mean = Vec4::Zero();
    std::vector<Vec4> pts;
    for (const auto& g : probe) pts.push_back(g.point_at(s));
    for (const auto& q : pts) mean += q;
    mean /= static_cast<double>(pts.size());
    double r = 0;
    for (const auto& q : pts) r = std::max(r, (q - mean).norm());
    return r;
  };
  P.focal_length = minimize([&](double s) { const double r = spread(s); return r * r; },
                            0.5 * s_ref, 1.5 * s_ref);
  P.spread_at_focal = spread(P.focal_length);
  P.spread_at_half = spread(0.5 * P.focal_length);
  if (!(P.spread_at_focal < 1e-5 * P.spread_at_half))
    throw NumericError("build_pansu: pencil has no focal point in the search bracket");

  Mesh& M = P.mesh;
  M.vertices.push_back(pole);
  Vec4 far = Vec4::Zero();
  for (int k = 0; k < n_directions; ++k) {
    const CCGeodesic g = shoot(model, pole, dir(2 * kPi * k / n_directions), lambda, P.focal_length);
    for (int j = 1; j < n_s; ++j) M.vertices.push_back(g.point_at(P.focal_length * j / n_s));
    far += g.point(g.size() - 1);
  }
  far /= n_directions;
  if (model.spherical()) far.normalize();
  P.far_pole = far;
  M.vertices.push_back(far);
  const int last = static_cast<int>(M.vertices.size()) - 1;
  auto id = [&](int k, int j) { return 1 + (k % n_directions) * (n_s - 1) + (j - 1); };
  for (int k = 0; k < n_directions; ++k) {
    M.triangles.push_back({0, id(k, 1), id(k + 1, 1)});
    for (int j = 1; j < n_s - 1; ++j) {
      M.triangles.push_back({id(k, j), id(k, j + 1), id(k + 1, j + 1)});
      M.triangles.push_back({id(k, j), id(k + 1, j + 1), id(k + 1, j)});
    }
    M.triangles.push_back({id(k, n_s - 1), last, id(k + 1, n_s - 1)});
  }
  P.area = subriemannian_area(model, M);
  return P;
}

std::shared_ptr<const CCGeodesic> base_geodesic(const SpaceForm& model, double mu, double length,
                                                double step) {
  const Vec4 o = model.spherical() ? Vec4(1, 0, 0, 0) : Vec4::Zero();
  if (length <= 0) length = model.spherical() ? 4 * kPi + 0.2 : 8 * kPi;
  return std::make_shared<const CCGeodesic>(shoot(model, o, model.frame_at(o).x1, mu, length, step));
}

SurfaceAssembly assemble_from_base(const SpaceForm& model, double lambda, double mu, double length,
                                   int max_generations, double step) {
  auto g = base_geodesic(model, mu, length, step);
  return assemble_cmc(g, detect_closure(*g), lambda, max_generations);
}

}  // namespace sasaki
