#include "sasaki/spaceform.hpp"

#include <cmath>

namespace sasaki {

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::heisenberg: return "heisenberg";
    case ModelKind::sphere3: return "sphere3";
    case ModelKind::projective3: return "projective3";
  }
  return "?";
}

ModelKind model_from_string(const std::string& s) {
  if (s == "heisenberg") return ModelKind::heisenberg;
  if (s == "sphere3") return ModelKind::sphere3;
  if (s == "projective3") return ModelKind::projective3;
  throw ValidationError("unknown model '" + s + "' (expected heisenberg, sphere3, projective3)");
}

Vec4 qmul(const Vec4& a, const Vec4& b) {
  return Vec4(a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
              a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
              a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
              a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]);
}

SpaceForm::SpaceForm(ModelKind kind, Handedness h)
    : kind_(kind), jsign_(h == Handedness::standard ? 1.0 : -1.0) {}

void SpaceForm::validate_point(const Vec4& p) const {
  if (!p.allFinite()) throw ValidationError("point has non-finite coordinates");
  if (spherical()) {
    if (std::abs(p.norm() - 1.0) > 1e-12) throw ValidationError("point is not on the unit sphere");
  } else if (p[3] != 0.0) {
    throw ValidationError("heisenberg point must have a zero fourth coordinate");
  }
}

void SpaceForm::validate_tangent(const Vec4& p, const Vec4& v) const {
  validate_point(p);
  if (!v.allFinite()) throw ValidationError("vector has non-finite coordinates");
  if (spherical()) {
    if (std::abs(p.dot(v)) > 1e-10) throw ValidationError("vector is not tangent to the sphere");
  } else if (v[3] != 0.0) {
    throw ValidationError("heisenberg vector must have a zero fourth coordinate");
  }
}

Vec4 SpaceForm::canonical(const Vec4& p) const {
  if (kind_ != ModelKind::projective3) return p;
  return project_rp3(p);
}

Frame SpaceForm::frame_at(const Vec4& p) const {
  if (spherical()) return {left_j(p), left_k(p), left_i(p)};
  return {Vec4(1, 0, p[1], 0), Vec4(0, 1, -p[0], 0), Vec4(0, 0, 1, 0)};
}

Vec4 SpaceForm::reeb(const Vec4& p) const {
  if (spherical()) return left_i(p);
  return Vec4(0, 0, 1, 0);
}

Vec4 SpaceForm::tangent_part(const Vec4& p, const Vec4& a) const {
  if (spherical()) return a - p.dot(a) * p;
  return Vec4(a[0], a[1], a[2], 0.0);
}

Vec4 SpaceForm::j_rotate(const Vec4& p, const Vec4& v) const {
  if (spherical()) return jsign_ * tangent_part(p, left_i(v));
  const double a = v[0], b = v[1];
  return jsign_ * Vec4(-b, a, -a * p[0] - b * p[1], 0.0);
}

double SpaceForm::eta(const Vec4& p, const Vec4& v) const {
  if (spherical()) return left_i(p).dot(v);
  return v[2] - p[1] * v[0] + p[0] * v[1];
}

double SpaceForm::inner(const Vec4& p, const Vec4& u, const Vec4& v) const {
  if (spherical()) return u.dot(v);
  return u[0] * v[0] + u[1] * v[1] + eta(p, u) * eta(p, v);
}

Vec3 SpaceForm::components(const Vec4& p, const Vec4& v) const {
  if (spherical()) return Vec3(left_j(p).dot(v), left_k(p).dot(v), left_i(p).dot(v));
  return Vec3(v[0], v[1], eta(p, v));
}

Vec4 SpaceForm::step_along(const Vec4& p, const Vec4& u, double h) const {
  if (spherical()) return (p + h * u).normalized();
  return tangent_part(p, p + h * u);
}

double SpaceForm::chart_distance(const Vec4& a, const Vec4& b) const {
  const double d = (a - b).norm();
  if (kind_ == ModelKind::projective3) return std::min(d, (a + b).norm());
  return d;
}

Eigen::Matrix3d SpaceForm::metric(const Vec4& p) const {
  const Vec3 e(-p[1], p[0], 1.0);
  Eigen::Matrix3d g = e * e.transpose();
  g(0, 0) += 1.0;
  g(1, 1) += 1.0;
  return g;
}

Vec4 SpaceForm::christoffel(const Vec4& p, const Vec4& u, const Vec4& w) const {
  if (spherical()) return Vec4::Zero();
  const double h = 1e-5;
  Eigen::Matrix3d dg[3];
  for (int k = 0; k < 3; ++k) {
    Vec4 dp = Vec4::Zero();
    dp[k] = h;
    dg[k] = (metric(p + dp) - metric(p - dp)) / (2 * h);
  }
  Vec3 b = Vec3::Zero();
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        b[l] += u[i] * w[j] * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
  const Vec3 g = 0.5 * metric(p).ldlt().solve(b);
  return Vec4(g[0], g[1], g[2], 0.0);
}

Vec4 SpaceForm::covariant_derivative(const Vec4& p, const Vec4& u, const VectorField& W,
                                     double h) const {
  const Vec4 dW = (W(step_along(p, u, h)) - W(step_along(p, u, -h))) / (2 * h);
  if (spherical()) return tangent_part(p, dW);
  return dW + christoffel(p, u, W(p));
}

Vec4 SpaceForm::covariant_acceleration(const Vec4& p, const Vec4& v, const Vec4& a) const {
  if (spherical()) return tangent_part(p, a);
  return a + christoffel(p, v, v);
}

Vec4 SpaceForm::acceleration(const Vec4& p, const Vec4& v, double lambda) const {
  const Vec4 jv = j_rotate(p, v);
  if (spherical()) return -2.0 * lambda * jv - v.squaredNorm() * p;
  return -2.0 * lambda * jv - christoffel(p, v, v);
}

Vec4 SpaceForm::ambient_acceleration(const Vec4& p, const Vec4& v, double lambda) const {
  validate_tangent(p, v);
  if (std::abs(norm(p, v) - 1.0) > 1e-8) throw ValidationError("velocity is not unit");
  if (std::abs(eta(p, v)) > 1e-8) throw ValidationError("velocity is not horizontal");
  return acceleration(p, v, lambda);
}

SasakianResiduals SpaceForm::sasakian_residuals(const Vec4& p, const Vec4& v) const {
  SasakianResiduals r;
  const VectorField T = [this](const Vec4& q) { return reeb(q); };
  const Vec4 dT = covariant_derivative(p, v, T);
  r.reeb = norm(p, dT - j_rotate(p, v));

  const VectorField fields[3] = {
      [this](const Vec4& q) { return frame_at(q).x1; },
      [this](const Vec4& q) { return frame_at(q).x2; },
      T,
  };
  for (const auto& W : fields) {
    const VectorField JW = [&](const Vec4& q) { return j_rotate(q, W(q)); };
    const Vec4 w = W(p);
    const Vec4 res = covariant_derivative(p, v, JW) - j_rotate(p, covariant_derivative(p, v, W)) -
                     inner(p, w, reeb(p)) * v + inner(p, v, w) * reeb(p);
    r.rotation = std::max(r.rotation, norm(p, res));
  }
  return r;
}

double SpaceForm::horizontal_sectional_curvature(const Vec4& p) const {
  const double h = 1e-4;
  const VectorField X = [this](const Vec4& q) { return frame_at(q).x1; };
  const VectorField Y = [this](const Vec4& q) { return frame_at(q).x2; };
  const VectorField DYY = [&](const Vec4& q) { return covariant_derivative(q, Y(q), Y, h); };
  const VectorField DXY = [&](const Vec4& q) { return covariant_derivative(q, X(q), Y, h); };
  const Vec4 bracket = DXY(p) - covariant_derivative(p, Y(p), X, h);
  const Vec4 R = covariant_derivative(p, X(p), DYY, h) - covariant_derivative(p, Y(p), DXY, h) -
                 covariant_derivative(p, bracket, Y, h);
  return inner(p, R, X(p));
}

Vec4 SpaceForm::reeb_flow(const Vec4& p, double theta) const {
  if (spherical()) return std::cos(theta) * p + std::sin(theta) * left_i(p);
  return Vec4(p[0], p[1], p[2] + theta, 0.0);
}

Vec4 SpaceForm::reeb_flow_vector(const Vec4& v, double theta) const {
  if (spherical()) return std::cos(theta) * v + std::sin(theta) * left_i(v);
  return v;
}

double SpaceForm::volume_form(const Vec4& p, const Vec4& a, const Vec4& b, const Vec4& c) const {
  if (spherical()) {
    Eigen::Matrix4d m;
    m << p, a, b, c;
    return m.determinant();
  }
  Eigen::Matrix3d m;
  m << a.head<3>(), b.head<3>(), c.head<3>();
  return m.determinant();
}

Vec4 dilate(const SpaceForm& model, const Vec4& p, double r) {
  if (model.kind() != ModelKind::heisenberg)
    throw ValidationError("dilate is only defined on the heisenberg model");
  return Vec4(std::exp(r) * p[0], std::exp(r) * p[1], std::exp(2 * r) * p[2], 0.0);
}

Vec4 dilate_vector(const SpaceForm& model, const Vec4& v, double r) {
  return dilate(model, v, r);
}

Vec4 project_rp3(const Vec4& p) {
  for (int k = 0; k < 4; ++k) {
    if (p[k] > 0) return p;
    if (p[k] < 0) return -p;
  }
  return p;
}

}  // namespace sasaki
