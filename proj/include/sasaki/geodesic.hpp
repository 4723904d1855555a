#pragma once

#include "sasaki/spaceform.hpp"

#include <vector>

namespace sasaki {

class CCGeodesic {
 public:
  CCGeodesic(SpaceForm model, double lambda, double step, std::vector<Vec4> points,
             std::vector<Vec4> velocities);

  const SpaceForm& model() const { return model_; }
  double lambda() const { return lambda_; }
  double step() const { return step_; }
  double length() const { return step_ * static_cast<double>(points_.size() - 1); }
  std::size_t size() const { return points_.size(); }
  double s_at(std::size_t k) const { return step_ * static_cast<double>(k); }
  const Vec4& point(std::size_t k) const { return points_[k]; }
  const Vec4& velocity(std::size_t k) const { return velocities_[k]; }
  const Vec4& start() const { return points_.front(); }
  const Vec4& direction() const { return velocities_.front(); }

  // Arbitrary s in [0, length]: one RK4 sub-step from the nearest sample.
  Vec4 point_at(double s) const;
  Vec4 velocity_at(double s) const;
  // Curvature -1/2 <gamma_dot', J gamma_dot> from a 5-point stencil on the samples;
  // needs 2 <= k < size - 2.
  double curvature_estimate(std::size_t k) const;

 private:
  std::pair<Vec4, Vec4> state_at(double s) const;
  SpaceForm model_;
  double lambda_, step_;
  std::vector<Vec4> points_, velocities_;
};

// One classical RK4 step of the chart ODE; on the sphere the state is renormalized.
std::pair<Vec4, Vec4> rk4_step(const SpaceForm& model, const Vec4& p, const Vec4& v,
                               double lambda, double h);

CCGeodesic shoot(const SpaceForm& model, const Vec4& p, const Vec4& w, double lambda,
                 double length, double step = 1e-3);

struct Closure {
  bool circle = false;
  double length = 0;    // period when circle, integrated length otherwise
  double residual = 0;  // joint position/velocity gap at the period
};

Closure detect_closure(const CCGeodesic& g, double tol = 1e-6, double max_length = -1);

// v''' + tau v' = 0 with closed-form coefficients; tau = 0 gives the quadratic branch.
class VerticalJacobi {
 public:
  VerticalJacobi() = default;
  VerticalJacobi(double tau, double v0, double dv0, double ddv0);

  double tau() const { return tau_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double v(double s) const;
  double dv(double s) const;
  double ddv(double s) const;
  double dddv(double s) const;
  double integral(double s) const;  // int_0^s v

 private:
  double tau_ = 4, a_ = 0, b_ = 0, c_ = 0;
  double v0_ = 0, dv0_ = 0, ddv0_ = 0;
};

VerticalJacobi vertical_jacobi(double tau, double v0, double dv0, double ddv0);

// X = {lambda(<Gamma_dot,T> - v) + <Gamma_dot,U>} gamma_dot + (v'/2) J gamma_dot + v T on g's grid.
std::vector<Vec4> jacobi_vector(const CCGeodesic& g, const VerticalJacobi& vj, double gamma_t,
                                double gamma_u);

// Central difference in eps of the pencil s -> gamma_eps(s) leaving Gamma(eps) along U(eps).
std::vector<Vec4> jacobi_fd_oracle(const SpaceForm& model, const CurveFn& Gamma,
                                   const CurveFn& U, double lambda,
                                   const std::vector<double>& s_grid, double eps0, double h,
                                   double step = 1e-3);

}  // namespace sasaki
