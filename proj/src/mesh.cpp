#include "sasaki/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace sasaki {

void Mesh::append(const Mesh& other) {
  const int off = static_cast<int>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  tags.insert(tags.end(), other.tags.begin(), other.tags.end());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + off, t[1] + off, t[2] + off});
}

namespace {

struct KeyHash {
  std::size_t operator()(const std::array<long, 4>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (long c : k) h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ull;
    return h;
  }
};

std::array<long, 4> cell_of(const Vec4& x, double cell) {
  return {static_cast<long>(std::floor(x[0] / cell)), static_cast<long>(std::floor(x[1] / cell)),
          static_cast<long>(std::floor(x[2] / cell)), static_cast<long>(std::floor(x[3] / cell))};
}

}  // namespace

Mesh weld(const SpaceForm& model, const Mesh& m, double tol) {
  std::unordered_map<std::array<long, 4>, std::vector<int>, KeyHash> grid;
  Mesh out;
  std::vector<int> remap(m.vertices.size());
  const bool proj = model.kind() == ModelKind::projective3;
  for (std::size_t i = 0; i < m.vertices.size(); ++i) {
    const Vec4 x = m.vertices[i];
    int found = -1;
    for (double sg : {1.0, -1.0}) {
      if (sg < 0 && !proj) break;
      const auto c = cell_of(sg * x, tol);
      for (int d0 = -1; d0 <= 1 && found < 0; ++d0)
        for (int d1 = -1; d1 <= 1 && found < 0; ++d1)
          for (int d2 = -1; d2 <= 1 && found < 0; ++d2)
            for (int d3 = -1; d3 <= 1 && found < 0; ++d3) {
              auto it = grid.find({c[0] + d0, c[1] + d1, c[2] + d2, c[3] + d3});
              if (it == grid.end()) continue;
              for (int j : it->second)
                if (model.chart_distance(out.vertices[j], x) < tol) {
                  found = j;
                  break;
                }
            }
      if (found >= 0) break;
    }
    if (found < 0) {
      found = static_cast<int>(out.vertices.size());
      out.vertices.push_back(x);
      if (!m.tags.empty()) out.tags.push_back(m.tags[i]);
      grid[cell_of(x, tol)].push_back(found);
    }
    remap[i] = found;
  }
  for (const auto& t : m.triangles) {
    const std::array<int, 3> r{remap[t[0]], remap[t[1]], remap[t[2]]};
    if (r[0] == r[1] || r[1] == r[2] || r[0] == r[2]) continue;
    out.triangles.push_back(r);
  }
  return out;
}

long euler_characteristic(const Mesh& m) {
  std::unordered_set<int> verts;
  std::unordered_set<long long> edges;
  for (const auto& t : m.triangles) {
    for (int k = 0; k < 3; ++k) {
      verts.insert(t[k]);
      const long long a = std::min(t[k], t[(k + 1) % 3]), b = std::max(t[k], t[(k + 1) % 3]);
      edges.insert(a * 4294967296LL + b);
    }
  }
  return static_cast<long>(verts.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(m.triangles.size());
}

double mean_edge_length(const Mesh& m) {
  double sum = 0;
  long n = 0;
  for (const auto& t : m.triangles)
    for (int k = 0; k < 3; ++k) {
      sum += (m.vertices[t[k]] - m.vertices[t[(k + 1) % 3]]).norm();
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

double subriemannian_area(const SpaceForm& model, const Mesh& m) {
  double area = 0;
  for (const auto& t : m.triangles) {
    const Vec4 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    Vec4 centroid = (a + b + c) / 3.0;
    if (model.spherical()) centroid.normalize();
    const Vec3 cr = model.components(centroid, b - a).cross(model.components(centroid, c - a));
    area += 0.5 * std::hypot(cr[0], cr[1]);
  }
  return area;
}

double enclosed_volume_heisenberg(const Mesh& m) {
  double v = 0;
  for (const auto& t : m.triangles) {
    const Vec3 a = m.vertices[t[0]].head<3>(), b = m.vertices[t[1]].head<3>(),
               c = m.vertices[t[2]].head<3>();
    v += a.dot(b.cross(c)) / 6.0;
  }
  return v;
}

Stereographic::Stereographic(const Vec4& pole) : pole_(pole.normalized()) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Identity();
  a.col(0) = pole_;
  const Eigen::Matrix4d q = Eigen::HouseholderQR<Eigen::Matrix4d>(a).householderQ();
  basis_ = q.rightCols<3>();
}

Vec3 Stereographic::operator()(const Vec4& x) const {
  return basis_.transpose() * x / (1.0 - pole_.dot(x));
}

Vec4 farthest_candidate(const Mesh& m, double* distance) {
  std::vector<Vec4> cands;
  for (int k = 0; k < 4; ++k)
    for (double sg : {1.0, -1.0}) {
      Vec4 e = Vec4::Zero();
      e[k] = sg;
      cands.push_back(e);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Vec4 e;
    for (int k = 0; k < 4; ++k) e[k] = (mask >> k & 1) ? -0.5 : 0.5;
    cands.push_back(e);
  }
  Vec4 best = cands.front();
  double best_d = -1;
  for (const auto& c : cands) {
    double dmin = 1e300;
    for (const auto& v : m.vertices) dmin = std::min(dmin, (v - c).norm());
    if (dmin > best_d) {
      best_d = dmin;
      best = c;
    }
  }
  if (distance) *distance = best_d;
  return best;
}

Projection projection_from_string(const std::string& s) {
  if (s == "none4d-csv") return Projection::none4d_csv;
  if (s == "stereographic-obj") return Projection::stereographic_obj;
  if (s == "obj") return Projection::obj;
  throw ValidationError("unknown projection '" + s + "' (expected none4d-csv, stereographic-obj, obj)");
}

void write_mesh(std::ostream& os, const SpaceForm& model, const Mesh& m, Projection proj,
                const std::string& header_comment) {
  char buf[160];
  if (model.spherical() && proj == Projection::none4d_csv) {
    os << "# " << header_comment << "\n";
    os << "type,a,b,c,d\n";
    for (const auto& v : m.vertices) {
      std::snprintf(buf, sizeof buf, "v,%.9g,%.9g,%.9g,%.9g\n", v[0], v[1], v[2], v[3]);
      os << buf;
    }
    for (const auto& t : m.triangles) os << "f," << t[0] << "," << t[1] << "," << t[2] << ",\n";
    return;
  }
  os << "# " << header_comment << "\n";
  if (model.spherical()) {
    const Stereographic st(farthest_candidate(m));
    os << "# stereographic pole " << st.pole().transpose() << "\n";
    for (const auto& v : m.vertices) {
      const Vec3 x = st(v);
      std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", x[0], x[1], x[2]);
      os << buf;
    }
  } else {
    for (const auto& v : m.vertices) {
      std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
      os << buf;
    }
  }
  for (const auto& t : m.triangles) os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

namespace {

bool segment_hits_triangle(const Vec3& p0, const Vec3& p1, const std::array<Vec3, 3>& t) {
  const Vec3 d = p1 - p0;
  const Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0];
  const Vec3 h = d.cross(e2);
  const double det = e1.dot(h);
  const double scale = e1.norm() * e2.norm() * d.norm();
  if (std::abs(det) <= 1e-14 * scale) return false;
  const double inv = 1.0 / det;
  const Vec3 s = p0 - t[0];
  const double u = s.dot(h) * inv;
  if (u < 0 || u > 1) return false;
  const Vec3 q = s.cross(e1);
  const double v = d.dot(q) * inv;
  if (v < 0 || u + v > 1) return false;
  const double w = e2.dot(q) * inv;
  return w >= 0 && w <= 1;
}

bool triangles_intersect(const std::array<Vec3, 3>& a, const std::array<Vec3, 3>& b) {
  for (int k = 0; k < 3; ++k) {
    if (segment_hits_triangle(a[k], a[(k + 1) % 3], b)) return true;
    if (segment_hits_triangle(b[k], b[(k + 1) % 3], a)) return true;
  }
  return false;
}

}  // namespace

IntersectionStats count_intersections(const std::vector<std::array<Vec3, 3>>& tris,
                                      const std::function<bool(int, int)>& skip, double cell) {
  std::map<std::array<long, 3>, std::vector<int>> grid;
  for (int i = 0; i < static_cast<int>(tris.size()); ++i) {
    Vec3 lo = tris[i][0], hi = tris[i][0];
    for (const auto& p : tris[i]) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    for (long x = std::lround(std::floor(lo[0] / cell)); x <= std::lround(std::floor(hi[0] / cell)); ++x)
      for (long y = std::lround(std::floor(lo[1] / cell)); y <= std::lround(std::floor(hi[1] / cell)); ++y)
        for (long z = std::lround(std::floor(lo[2] / cell)); z <= std::lround(std::floor(hi[2] / cell)); ++z)
          grid[{x, y, z}].push_back(i);
  }
  IntersectionStats st;
  std::unordered_set<long long> seen;
  for (const auto& [key, ids] : grid) {
    for (std::size_t a = 0; a < ids.size(); ++a)
      for (std::size_t b = a + 1; b < ids.size(); ++b) {
        const int i = std::min(ids[a], ids[b]), j = std::max(ids[a], ids[b]);
        if (!seen.insert(static_cast<long long>(i) * 4294967296LL + j).second) continue;
        if (skip(i, j)) continue;
        ++st.pairs_tested;
        if (triangles_intersect(tris[i], tris[j])) ++st.intersecting;
      }
  }
  return st;
}

}  // namespace sasaki
