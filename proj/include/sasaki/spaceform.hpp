#pragma once

#include "sasaki/numerics.hpp"

#include <functional>
#include <string>

namespace sasaki {

enum class ModelKind { heisenberg, sphere3, projective3 };

// `flipped` negates J; it exists so tests can confirm the residual checks detect it.
enum class Handedness { standard, flipped };

std::string to_string(ModelKind k);
ModelKind model_from_string(const std::string& s);

// Points and vectors share one 4-vector type. Heisenberg uses (x, y, t, 0);
// sphere3 / projective3 use unit quaternions (w, x, y, z) = w + xi + yj + zk.
using VectorField = std::function<Vec4(const Vec4&)>;
using CurveFn = std::function<Vec4(double)>;

struct Frame {
  Vec4 x1, x2, t;
};

struct SasakianResiduals {
  double reeb = 0;      // |D_v T - J v|
  double rotation = 0;  // max over frame fields W of the J-compatibility residual
};

class SpaceForm {
 public:
  explicit SpaceForm(ModelKind kind, Handedness h = Handedness::standard);
  static SpaceForm heisenberg() { return SpaceForm(ModelKind::heisenberg); }
  static SpaceForm sphere3() { return SpaceForm(ModelKind::sphere3); }
  static SpaceForm projective3() { return SpaceForm(ModelKind::projective3); }

  ModelKind kind() const { return kind_; }
  double kappa() const { return kind_ == ModelKind::heisenberg ? 0.0 : 1.0; }
  bool spherical() const { return kind_ != ModelKind::heisenberg; }

  void validate_point(const Vec4& p) const;
  void validate_tangent(const Vec4& p, const Vec4& v) const;
  // projective3: first nonzero coordinate positive; identity otherwise.
  Vec4 canonical(const Vec4& p) const;

  Frame frame_at(const Vec4& p) const;
  Vec4 reeb(const Vec4& p) const;
  Vec4 j_rotate(const Vec4& p, const Vec4& v) const;
  double inner(const Vec4& p, const Vec4& u, const Vec4& v) const;
  double norm(const Vec4& p, const Vec4& v) const { return std::sqrt(inner(p, v, v)); }
  double eta(const Vec4& p, const Vec4& v) const;  // <v, T>
  // components of v in the frame (X1, X2, T)
  Vec3 components(const Vec4& p, const Vec4& v) const;

  // Chart geometry.
  Vec4 tangent_part(const Vec4& p, const Vec4& a) const;
  Vec4 step_along(const Vec4& p, const Vec4& u, double h) const;  // curve with velocity u at h=0
  double chart_distance(const Vec4& a, const Vec4& b) const;      // +- identified on projective3
  // Christoffel contraction Gamma(u, w) in the Heisenberg chart (finite-differenced metric).
  Vec4 christoffel(const Vec4& p, const Vec4& u, const Vec4& w) const;

  // D_u W at p by central differences of W.
  Vec4 covariant_derivative(const Vec4& p, const Vec4& u, const VectorField& W,
                            double h = 1e-5) const;
  // Covariant derivative of a curve's velocity given its chart velocity and chart acceleration.
  Vec4 covariant_acceleration(const Vec4& p, const Vec4& v, const Vec4& a) const;

  // Chart second derivative realizing the CC-geodesic equation. The unchecked form is
  // used inside integrators where stage velocities drift at roundoff level.
  Vec4 acceleration(const Vec4& p, const Vec4& v, double lambda) const;
  Vec4 ambient_acceleration(const Vec4& p, const Vec4& v, double lambda) const;

  SasakianResiduals sasakian_residuals(const Vec4& p, const Vec4& v) const;
  // K_h from the finite-differenced curvature tensor; Webster K = (K_h + 3) / 4.
  double horizontal_sectional_curvature(const Vec4& p) const;
  double webster_curvature(const Vec4& p) const {
    return 0.25 * (horizontal_sectional_curvature(p) + 3.0);
  }

  // Reeb flow for time theta, and its differential applied to a vector.
  Vec4 reeb_flow(const Vec4& p, double theta) const;
  Vec4 reeb_flow_vector(const Vec4& v, double theta) const;
  // Riemannian volume form on three chart vectors at p.
  double volume_form(const Vec4& p, const Vec4& a, const Vec4& b, const Vec4& c) const;

 private:
  Eigen::Matrix3d metric(const Vec4& p) const;
  ModelKind kind_;
  double jsign_;
};

// Left quaternion multiplications on R^4.
Vec4 qmul(const Vec4& a, const Vec4& b);
inline Vec4 left_i(const Vec4& q) { return Vec4(-q[1], q[0], -q[3], q[2]); }
inline Vec4 left_j(const Vec4& q) { return Vec4(-q[2], q[3], q[0], -q[1]); }
inline Vec4 left_k(const Vec4& q) { return Vec4(-q[3], -q[2], q[1], q[0]); }

Vec4 dilate(const SpaceForm& model, const Vec4& p, double r);
// Dilation differential, mapping chart vectors at p to chart vectors at dilate(p).
Vec4 dilate_vector(const SpaceForm& model, const Vec4& v, double r);
Vec4 project_rp3(const Vec4& p);

}  // namespace sasaki
