#include "sasaki/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <random>
#include <thread>

namespace sasaki {

double pansu_area_closed(double lambda) {
  require(lambda >= 0, "pansu_area: lambda must be nonnegative");
  return kPi * kPi / std::pow(1 + lambda * lambda, 1.5);
}

PansuArea pansu_area(double lambda, int n_directions, int n_s) {
  PansuArea r;
  r.closed = pansu_area_closed(lambda);
  const PansuSphere P = build_pansu(SpaceForm::sphere3(), lambda, Vec4(1, 0, 0, 0), n_directions, n_s);
  r.numeric = P.area;
  r.rel_gap = std::abs(r.numeric - r.closed) / r.closed;
  return r;
}

double pansu_volume_closed(double lambda) {
  require(lambda >= 0, "pansu_volume: lambda must be nonnegative");
  const double l2 = 1 + lambda * lambda;
  return kPi * kPi * (1 - lambda * (2 * lambda * lambda + 3) / (2 * std::pow(l2, 1.5)));
}

double pansu_volume_ode(double lambda) {
  require(lambda >= 0, "pansu_volume: lambda must be nonnegative");
  // A'(t) / (2t) with A' = -3 pi^2 t (1 + t^2)^{-5/2}
  auto dv = [](double t) { return -1.5 * kPi * kPi * std::pow(1 + t * t, -2.5); };
  // the integrand decays like t^-5; split so the adaptive rule sees the bulk first
  double v = kPi * kPi;
  double a = 0;
  for (double b : {1.0, 4.0, 16.0, 64.0, 256.0, 1024.0, 4096.0}) {
    const double hi = std::min(b, lambda);
    if (hi > a) v += integrate(dv, a, hi, 1e-13);
    a = b;
    if (b >= lambda) break;
  }
  if (lambda > a) v += integrate(dv, a, lambda, 1e-13);
  return v;
}

SphereLocator::SphereLocator(const Mesh& m, const Vec4& reference) : proj_(reference) {
  rot_ = (Eigen::AngleAxisd(0.3141, Vec3::UnitZ()) * Eigen::AngleAxisd(0.2718, Vec3::UnitY()) *
          Eigen::AngleAxisd(0.1618, Vec3::UnitX()))
             .toRotationMatrix();
  tris_.reserve(m.triangles.size());
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& t : m.triangles) {
    Tri tr{chart(m.vertices[t[0]]), chart(m.vertices[t[1]]), chart(m.vertices[t[2]])};
    for (const Vec3* p : {&tr.a, &tr.b, &tr.c}) {
      xmin = std::min(xmin, (*p)[0]);
      xmax = std::max(xmax, (*p)[0]);
      ymin = std::min(ymin, (*p)[1]);
      ymax = std::max(ymax, (*p)[1]);
    }
    tris_.push_back(tr);
  }
  require(!tris_.empty(), "SphereLocator: empty mesh");
  // about 4 triangles per cell on average
  const double span = std::max(xmax - xmin, ymax - ymin) * (1 + 1e-9) + 1e-12;
  const int n = std::clamp(static_cast<int>(std::sqrt(tris_.size() / 4.0)), 1, 2048);
  h_ = span / n;
  x0_ = xmin;
  y0_ = ymin;
  nx_ = std::max(1, static_cast<int>(std::ceil((xmax - xmin) / h_)) + 1);
  ny_ = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / h_)) + 1);
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (int k = 0; k < static_cast<int>(tris_.size()); ++k) {
    const Tri& t = tris_[k];
    const double lx = std::min({t.a[0], t.b[0], t.c[0]}), hx = std::max({t.a[0], t.b[0], t.c[0]});
    const double ly = std::min({t.a[1], t.b[1], t.c[1]}), hy = std::max({t.a[1], t.b[1], t.c[1]});
    const int i0 = static_cast<int>((lx - x0_) / h_), i1 = static_cast<int>((hx - x0_) / h_);
    const int j0 = static_cast<int>((ly - y0_) / h_), j1 = static_cast<int>((hy - y0_) / h_);
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) cells_[static_cast<std::size_t>(i) * ny_ + j].push_back(k);
  }
}

bool SphereLocator::across(const Vec4& x) const {
  const Vec3 p = chart(x);
  const int i = static_cast<int>(std::floor((p[0] - x0_) / h_));
  const int j = static_cast<int>(std::floor((p[1] - y0_) / h_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  // ray p + t e_z, t > 0; count crossings with 2-D barycentric tests
  int hits = 0;
  for (int k : cells_[static_cast<std::size_t>(i) * ny_ + j]) {
    const Tri& t = tris_[k];
    const double d = (t.b[0] - t.a[0]) * (t.c[1] - t.a[1]) - (t.c[0] - t.a[0]) * (t.b[1] - t.a[1]);
    if (d == 0) continue;
    const double u = ((p[0] - t.a[0]) * (t.c[1] - t.a[1]) - (t.c[0] - t.a[0]) * (p[1] - t.a[1])) / d;
    const double v = ((t.b[0] - t.a[0]) * (p[1] - t.a[1]) - (p[0] - t.a[0]) * (t.b[1] - t.a[1])) / d;
    if (u < 0 || v < 0 || u + v > 1) continue;
    const double z = t.a[2] + u * (t.b[2] - t.a[2]) + v * (t.c[2] - t.a[2]);
    if (z > p[2]) ++hits;
  }
  return hits % 2 == 1;
}

MonteCarloVolume monte_carlo_volume(const Mesh& m, const Vec4& interior, long samples, std::uint64_t seed) {
  require(samples > 0, "monte_carlo_volume: need samples > 0");
  MonteCarloVolume r;
  r.samples = samples;
  r.seed = seed;
  const Vec4 ref = farthest_candidate(m, &r.reference_clearance);
  require(r.reference_clearance > 3 * mean_edge_length(m),
          "monte_carlo_volume: no reference point clear of the mesh");
  const SphereLocator loc(m, ref);
  const bool ref_inside = !loc.across(interior.normalized());

  constexpr long kBlock = 1 << 16;
  const long nblocks = (samples + kBlock - 1) / kBlock;
  auto run_block = [&](long b) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(b)};
    std::mt19937_64 gen(ss);
    std::normal_distribution<double> N(0.0, 1.0);
    const long n = std::min(kBlock, samples - b * kBlock);
    long count = 0;
    for (long k = 0; k < n; ++k) {
      Vec4 x(N(gen), N(gen), N(gen), N(gen));
      x.normalize();
      count += loc.across(x);
    }
    return count;
  };
  const long nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<long> counts(nblocks, 0);
  for (long start = 0; start < nblocks; start += nthreads) {
    std::vector<std::future<long>> fut;
    for (long b = start; b < std::min(nblocks, start + nthreads); ++b)
      fut.push_back(std::async(std::launch::async, run_block, b));
    for (long b = start; b < std::min(nblocks, start + nthreads); ++b) counts[b] = fut[b - start].get();
  }
  long across = 0;
  for (long c : counts) across += c;  // fixed order

  const double total = 2 * kPi * kPi;
  double p = static_cast<double>(across) / static_cast<double>(samples);
  if (ref_inside) p = 1 - p;
  r.inside = total * p;
  r.outside = total - r.inside;
  r.stderr_ = total * std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return r;
}

PansuVolume pansu_volume(double lambda, long samples, std::uint64_t seed, int n_directions, int n_s) {
  PansuVolume r;
  r.closed = pansu_volume_closed(lambda);
  r.ode = pansu_volume_ode(lambda);
  r.samples = samples;
  r.seed = seed;
  if (samples <= 0) {
    r.montecarlo = r.mc_stderr = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  const Vec4 pole(1, 0, 0, 0);
  const PansuSphere P = build_pansu(SpaceForm::sphere3(), lambda, pole, n_directions, n_s);
  // the short Reeb arc between the poles lies inside; at lambda = 0 both sides have pi^2
  Vec4 mid = pole + P.far_pole;
  if (mid.norm() < 1e-6) mid = Vec4(0, 1, 0, 0);
  const MonteCarloVolume mc = monte_carlo_volume(P.mesh, mid.normalized(), samples, seed);
  r.montecarlo = mc.inside;
  r.mc_stderr = mc.stderr_;
  r.rel_gap = std::abs(r.ode - r.montecarlo) / r.montecarlo;
  r.flagged = r.rel_gap > 0.02;
  return r;
}

double antipodal_gap(const Mesh& m) {
  double best = 1e300;
  const auto& v = m.vertices;
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = a; b < v.size(); ++b) best = std::min(best, (v[a] + v[b]).squaredNorm());
  return std::sqrt(best);
}

namespace {
Vec4 clifford_point(double rho, double a, double b) {
  const double r = std::sqrt(1 - rho * rho);
  return Vec4(rho * std::cos(a), rho * std::sin(a), r * std::cos(b), r * std::sin(b));
}
}  // namespace

CliffordPoint clifford_profile(double rho, int samples) {
  require(rho > 0 && rho < 1, "clifford_profile: rho must lie in (0, 1)");
  CliffordPoint c;
  c.rho = rho;
  const double r = std::sqrt(1 - rho * rho);
  c.area = 2 * kPi * kPi * rho * r;
  c.volume_inner = kPi * kPi * rho * rho;
  c.volume_outer = kPi * kPi * r * r;
  const SpaceForm S = SpaceForm::sphere3();
  for (int ia = 0; ia < samples; ++ia)
    for (int ib = 0; ib < samples; ++ib) {
      const double a = 2 * kPi * (ia + 0.5) / samples, b = 2 * kPi * (ib + 0.37) / samples;
      const Vec4 p = clifford_point(rho, a, b);
      // unit normal inside T_p S^3, orthogonal to both circle directions
      const Vec4 n(r * std::cos(a), r * std::sin(a), -rho * std::cos(b), -rho * std::sin(b));
      const Frame f = S.frame_at(p);
      const double nh = std::hypot(n.dot(f.x1), n.dot(f.x2));
      c.nh_max_error = std::max(c.nh_max_error, std::abs(nh - 1));
    }
  return c;
}

double clifford_area_numeric(double rho, int n) {
  require(rho > 0 && rho < 1, "clifford_area_numeric: rho must lie in (0, 1)");
  Mesh m;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.vertices.push_back(clifford_point(rho, 2 * kPi * i / n, 2 * kPi * j / n));
  auto id = [n](int i, int j) { return (i % n) * n + (j % n); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return 0.5 * subriemannian_area(SpaceForm::sphere3(), m);
}

double match_rho(double volume) {
  const double total = kPi * kPi;
  require(volume > 0 && volume < total, "match_rho: volume must lie in (0, pi^2)");
  return std::sqrt(volume / total);
}

Comparison compare_rp3(const std::vector<double>& grid, const CompareOptions& opt) {
  Comparison c;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lam = grid[k];
    require(lam > 0, "compare_rp3: grid values must be positive");
    ComparisonRow row;
    row.lambda = lam;
    row.A_pansu_closed = pansu_area_closed(lam);
    row.A_pansu_numeric = opt.numeric_area ? pansu_area(lam, opt.n_directions, opt.n_s).numeric
                                           : std::numeric_limits<double>::quiet_NaN();
    row.V_ode = pansu_volume_ode(lam);
    row.V_mc = opt.mc_samples > 0
                   ? pansu_volume(lam, opt.mc_samples, opt.seed + k, opt.n_directions, opt.n_s).montecarlo
                   : std::numeric_limits<double>::quiet_NaN();
    // either complementary domain of the torus gives the same surface; rho and
    // sqrt(1 - rho^2) have equal area
    row.rho_matched = match_rho(row.V_ode);
    row.A_clifford = clifford_profile(row.rho_matched, 4).area;
    row.torus_wins = row.A_clifford < row.A_pansu_closed;
    c.rows.push_back(row);
  }
  for (std::size_t k = 0; k < c.rows.size();) {
    if (!c.rows[k].torus_wins) {
      ++k;
      continue;
    }
    std::size_t e = k;
    while (e + 1 < c.rows.size() && c.rows[e + 1].torus_wins) ++e;
    c.torus_wins.emplace_back(c.rows[k].lambda, c.rows[e].lambda);
    k = e + 1;
  }
  return c;
}

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0, b = 0, h = 0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &h, &tail) != 3)
    throw ValidationError("grid must be 'start:stop:step', got '" + spec + "'");
  require(h > 0 && b >= a, "grid: need step > 0 and stop >= start");
  std::vector<double> g;
  const long n = std::lround(std::floor((b - a) / h + 1e-9));
  for (long k = 0; k <= n; ++k) g.push_back(a + h * static_cast<double>(k));
  return g;
}

void write_comparison_csv(std::ostream& os, const Comparison& c, const std::string& header_comment) {
  if (!header_comment.empty()) os << "# " << header_comment << "\n";
  os << "lambda,A_pansu_closed,A_pansu_numeric,V_ode,V_mc,rho_matched,A_clifford,winner\n";
  char buf[512];
  for (const auto& r : c.rows) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%s\n", r.lambda, r.A_pansu_closed,
                  r.A_pansu_numeric, r.V_ode, r.V_mc, r.rho_matched, r.A_clifford,
                  r.torus_wins ? "torus" : "pansu");
    os << buf;
  }
}

}  // namespace sasaki
