#include "sasaki/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace sasaki {

CCGeodesic::CCGeodesic(SpaceForm model, double lambda, double step, std::vector<Vec4> points,
                       std::vector<Vec4> velocities)
    : model_(model),
      lambda_(lambda),
      step_(step),
      points_(std::move(points)),
      velocities_(std::move(velocities)) {}

std::pair<Vec4, Vec4> rk4_step(const SpaceForm& model, const Vec4& p, const Vec4& v,
                               double lambda, double h) {
  auto acc = [&](const Vec4& q, const Vec4& u) { return model.acceleration(q, u, lambda); };
  const Vec4 k1p = v, k1v = acc(p, v);
  const Vec4 k2p = v + 0.5 * h * k1v, k2v = acc(p + 0.5 * h * k1p, k2p);
  const Vec4 k3p = v + 0.5 * h * k2v, k3v = acc(p + 0.5 * h * k2p, k3p);
  const Vec4 k4p = v + h * k3v, k4v = acc(p + h * k3p, k4p);
  Vec4 pn = p + h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
  Vec4 vn = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  if (model.spherical()) {
    pn.normalize();
    vn -= pn.dot(vn) * pn;
  }
  return {pn, vn};
}

CCGeodesic shoot(const SpaceForm& model, const Vec4& p, const Vec4& w, double lambda,
                 double length, double step) {
  model.validate_tangent(p, w);
  require(std::abs(model.norm(p, w) - 1.0) <= 1e-8, "shoot: direction is not unit");
  require(std::abs(model.eta(p, w)) <= 1e-8, "shoot: direction is not horizontal");
  require(length > 0 && step > 0, "shoot: length and step must be positive");
  require(step <= length, "shoot: step exceeds length");
  require(std::isfinite(lambda), "shoot: curvature must be finite");
  const auto n = static_cast<std::size_t>(std::ceil(length / step - 1e-9));
  const double h = length / static_cast<double>(n);
  std::vector<Vec4> pts{p}, vel{w};
  pts.reserve(n + 1);
  vel.reserve(n + 1);
  for (std::size_t k = 0; k < n; ++k) {
    auto [pn, vn] = rk4_step(model, pts.back(), vel.back(), lambda, h);
    pts.push_back(pn);
    vel.push_back(vn);
  }
  return CCGeodesic(model, lambda, h, std::move(pts), std::move(vel));
}

std::pair<Vec4, Vec4> CCGeodesic::state_at(double s) const {
  const double len = length();
  if (s < -1e-9 * std::max(1.0, len) || s > len * (1 + 1e-9) + 1e-12)
    throw ValidationError("arclength outside the integrated range");
  auto k = static_cast<long>(std::llround(s / step_));
  k = std::clamp<long>(k, 0, static_cast<long>(points_.size()) - 1);
  const double dh = s - s_at(static_cast<std::size_t>(k));
  if (dh == 0.0) return {points_[k], velocities_[k]};
  return rk4_step(model_, points_[k], velocities_[k], lambda_, dh);
}

Vec4 CCGeodesic::point_at(double s) const { return state_at(s).first; }
Vec4 CCGeodesic::velocity_at(double s) const { return state_at(s).second; }

double CCGeodesic::curvature_estimate(std::size_t k) const {
  if (k < 2 || k + 2 >= points_.size())
    throw ValidationError("curvature estimate needs two samples on each side");
  const auto& v = velocities_;
  const Vec4 dv = (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) / (12.0 * step_);
  const Vec4& p = points_[k];
  const Vec4 cov = model_.covariant_acceleration(p, v[k], dv);
  return -0.5 * model_.inner(p, cov, model_.j_rotate(p, v[k]));
}

Closure detect_closure(const CCGeodesic& g, double tol, double max_length) {
  if (max_length <= 0) max_length = g.length();
  require(tol > 0, "detect_closure: tolerance must be positive");
  require(tol <= g.step(), "detect_closure: tolerance larger than the step (spurious closure risk)");
  require(max_length <= g.length() * (1 + 1e-12),
          "detect_closure: geodesic not integrated to max_length");
  const SpaceForm& m = g.model();
  const bool proj = m.kind() == ModelKind::projective3;
  const Vec4 p0 = g.start(), v0 = g.direction();

  auto gap2 = [&](const Vec4& p, const Vec4& v, double sign) {
    return (p - sign * p0).squaredNorm() + (v - sign * v0).squaredNorm();
  };
  auto best_sign = [&](const Vec4& p, const Vec4& v) {
    return (proj && gap2(p, v, -1.0) < gap2(p, v, 1.0)) ? -1.0 : 1.0;
  };

  const std::size_t n = g.size();
  std::vector<double> gap(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double sg = best_sign(g.point(k), g.velocity(k));
    gap[k] = std::sqrt(gap2(g.point(k), g.velocity(k), sg));
  }
  const double far = std::max(0.1, 100 * tol);
  bool left = false;
  for (std::size_t k = 1; k + 1 < n && g.s_at(k + 1) <= max_length; ++k) {
    if (!left) {
      left = gap[k] > far;
      continue;
    }
    if (!(gap[k] <= gap[k - 1] && gap[k] <= gap[k + 1] && gap[k] < 10 * g.step())) continue;
    const double sg = best_sign(g.point(k), g.velocity(k));
    // d/ds of the squared gap; its sign change brackets the return point
    auto dgap = [&](double s) {
      const Vec4 p = g.point_at(s), v = g.velocity_at(s);
      const Vec4 a = m.acceleration(p, v, g.lambda());
      return (p - sg * p0).dot(v) + (v - sg * v0).dot(a);
    };
    const double lo = g.s_at(k - 1), hi = g.s_at(k + 1);
    double s_star;
    if ((dgap(lo) < 0) != (dgap(hi) < 0)) {
      s_star = bisect_root(dgap, lo, hi);
    } else {
      s_star = minimize(
          [&](double s) { return gap2(g.point_at(s), g.velocity_at(s), sg); }, lo, hi);
    }
    const double r = std::sqrt(gap2(g.point_at(s_star), g.velocity_at(s_star), sg));
    if (r < tol) return {true, s_star, r};
  }
  return {false, max_length, 0.0};
}

VerticalJacobi::VerticalJacobi(double tau, double v0, double dv0, double ddv0)
    : tau_(tau), v0_(v0), dv0_(dv0), ddv0_(ddv0) {
  if (tau < 0) throw ValidationError("vertical_jacobi: tau < 0 is unsupported");
  a_ = dv0;
  if (tau > 0) {
    b_ = ddv0 / std::sqrt(tau);
    c_ = v0 + ddv0 / tau;
  }
}

VerticalJacobi vertical_jacobi(double tau, double v0, double dv0, double ddv0) {
  return VerticalJacobi(tau, v0, dv0, ddv0);
}

double VerticalJacobi::v(double s) const {
  if (tau_ == 0) return v0_ + dv0_ * s + 0.5 * ddv0_ * s * s;
  const double r = std::sqrt(tau_);
  return (a_ * std::sin(r * s) - b_ * std::cos(r * s)) / r + c_;
}

double VerticalJacobi::dv(double s) const {
  if (tau_ == 0) return dv0_ + ddv0_ * s;
  const double r = std::sqrt(tau_);
  return a_ * std::cos(r * s) + b_ * std::sin(r * s);
}

double VerticalJacobi::ddv(double s) const {
  if (tau_ == 0) return ddv0_;
  const double r = std::sqrt(tau_);
  return r * (-a_ * std::sin(r * s) + b_ * std::cos(r * s));
}

double VerticalJacobi::dddv(double s) const {
  if (tau_ == 0) return 0.0;
  return -tau_ * dv(s);
}

double VerticalJacobi::integral(double s) const {
  if (tau_ == 0) return v0_ * s + 0.5 * dv0_ * s * s + ddv0_ * s * s * s / 6.0;
  const double r = std::sqrt(tau_);
  return (a_ * (1 - std::cos(r * s)) - b_ * std::sin(r * s)) / tau_ + c_ * s;
}

std::vector<Vec4> jacobi_vector(const CCGeodesic& g, const VerticalJacobi& vj, double gamma_t,
                                double gamma_u) {
  const SpaceForm& m = g.model();
  std::vector<Vec4> out;
  out.reserve(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double s = g.s_at(k);
    const Vec4& p = g.point(k);
    const Vec4& gd = g.velocity(k);
    const double v = vj.v(s);
    out.push_back((g.lambda() * (gamma_t - v) + gamma_u) * gd + 0.5 * vj.dv(s) * m.j_rotate(p, gd) +
                  v * m.reeb(p));
  }
  return out;
}

std::vector<Vec4> jacobi_fd_oracle(const SpaceForm& model, const CurveFn& Gamma,
                                   const CurveFn& U, double lambda,
                                   const std::vector<double>& s_grid, double eps0, double h,
                                   double step) {
  require(h >= 1e-7, "jacobi_fd_oracle: eps below the integration resolution");
  require(!s_grid.empty(), "jacobi_fd_oracle: empty grid");
  const double smax = std::max(step, *std::max_element(s_grid.begin(), s_grid.end()));
  const CCGeodesic gp = shoot(model, Gamma(eps0 + h), U(eps0 + h), lambda, smax, step);
  const CCGeodesic gm = shoot(model, Gamma(eps0 - h), U(eps0 - h), lambda, smax, step);
  std::vector<Vec4> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) out.push_back((gp.point_at(s) - gm.point_at(s)) / (2 * h));
  return out;
}

}  // namespace sasaki
