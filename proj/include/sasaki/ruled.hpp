#pragma once

#include "sasaki/geodesic.hpp"
#include "sasaki/mesh.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sasaki {

// Horizontal generating curve Gamma(eps) parametrized by arclength.
struct Generator {
  CurveFn point, velocity;
  ScalarFn torsion;  // h(eps) = <Gamma_dot', J Gamma_dot>
  double eps_lo = 0, eps_hi = 0;
  bool periodic = false;  // period = eps_hi - eps_lo
  bool constant_torsion = false;
  double length() const { return eps_hi - eps_lo; }
  double wrap(double eps) const;
};

// CC-geodesic generator: h = -2 mu. A circle closure makes eps periodic.
Generator generator_from_geodesic(std::shared_ptr<const CCGeodesic> g, const Closure& closure);
// Arbitrary horizontal unit-speed curve; h is finite-differenced from `velocity`.
Generator generator_from_curve(const SpaceForm& model, CurveFn point, CurveFn velocity,
                               double eps_lo, double eps_hi, bool periodic);

double cut_constant(double tau, double mu, int side);
// Oracle: first sign change of v_i on a fine grid, refined by bisection.
double cut_constant_bisection(double tau, double mu, int side);

struct ScalarFields {
  double v = 0, dv = 0, ddv = 0;
  double Nh = 0, NT = 0, BZS = -1, q = 0, q_over_Nh = 0, j = 1;
};

struct PatchFields {
  ScalarFields scalars;
  Vec4 point, Z, S, N, X;
};

class RuledPatch {
 public:
  RuledPatch(SpaceForm model, Generator gen, int side, double lambda, double s_max = -1);

  const SpaceForm& model() const { return model_; }
  const Generator& generator() const { return gen_; }
  int side() const { return side_; }
  double sign() const { return side_ == 1 ? -1.0 : 1.0; }  // (-1)^i
  double lambda() const { return lambda_; }
  double tau() const { return tau_; }
  double s_max() const { return s_max_; }
  double cut(double eps = 0) const;
  VerticalJacobi vj(double eps = 0) const;

  Vec4 ray_direction(double eps) const;
  CCGeodesic ray(double eps, double length = -1) const;

  ScalarFields scalars(double eps, double s) const;
  PatchFields fields_at(double eps, double s) const;
  Vec4 conormal(double eps) const;
  double area(double eps_lo, double eps_hi) const;
  // n_eps x n_s grid; periodic generators omit the duplicated closing column.
  Mesh mesh(int n_eps, int n_s, int patch_tag = 0) const;

 private:
  ScalarFields scalars_from(const VerticalJacobi& vj, double s) const;
  SpaceForm model_;
  Generator gen_;
  int side_;
  double lambda_, tau_, s_max_;
  VerticalJacobi vj_;
  double cut_;
};

RuledPatch patch_from_geodesic(std::shared_ptr<const CCGeodesic> Gamma, const Closure& closure,
                               int side, double lambda, double s_max = -1);

struct CurveMatch {
  bool same = false;
  double distance = 0;  // sup of the parametric gap after registration
  double shift = 0;     // b(t) = a(shift + orientation * t)
  int orientation = 1;
};
// Registration of b against a over a's parameter domain (periodic when period > 0).
CurveMatch match_curves(const SpaceForm& model, const CCGeodesic& a, const CCGeodesic& b,
                        double period, double window, double tol);

struct SingularCurve {
  std::shared_ptr<const CCGeodesic> curve;
  int normal_sign = 1;  // global N = normal_sign * T along the curve
  int generation = 0;
  int source_patch = -1;
  double curvature_error = 0;  // |curvature estimate of the edge curve - mu|
  double edge_error = 0;       // gap between edge samples and the reshot geodesic
};

struct AssemblyPatch {
  RuledPatch patch;
  int generation;
  int orientation;  // global N = orientation * (patch normal)
  int from_curve, to_curve;
};

struct SurfaceAssembly {
  SpaceForm model = SpaceForm::sphere3();
  double lambda = 0, mu = 0;
  Closure closure;
  double ell = 0;  // period of Gamma, or its integrated window
  std::vector<AssemblyPatch> patches;
  std::vector<SingularCurve> curves;
  bool closed = false;     // all singular curves registered, no new sheets
  bool gamma12_equal = false;
  bool truncated = false;
  double eps0 = 0;  // Gamma_2(eps) = Gamma_1(eps + eps0) when gamma12_equal
  bool embedded = true;
  std::vector<std::string> notes;
  double total_area = 0;
};

SurfaceAssembly assemble_cmc(std::shared_ptr<const CCGeodesic> Gamma, const Closure& closure,
                             double lambda, int max_generations = 4, double tol = 1e-5);

// Gamma from the base point (origin or identity) along X1 with curvature mu over `length`
// (<= 0 picks 8 pi in Heisenberg and 4 pi + 0.2 otherwise), then assemble_cmc.
std::shared_ptr<const CCGeodesic> base_geodesic(const SpaceForm& model, double mu, double length = -1,
                                                double step = 1e-3);
SurfaceAssembly assemble_from_base(const SpaceForm& model, double lambda, double mu, double length = -1,
                                   int max_generations = 4, double step = 1e-3);

struct EmbeddednessReport {
  bool closure_consistent = true;
  double identity_residual = 0;
  long pairs_tested = 0;
  long intersections_off_singular = 0;
  bool embedded = true;
  std::vector<std::string> notes;
};

// Right side of the monotonicity identity for v'/v.
double embeddedness_identity_rhs(double tau, double mu, int side, double s);
EmbeddednessReport embeddedness_diagnostics(const SurfaceAssembly& a, int n_eps = 64,
                                            int n_s = 32);

Mesh assembly_mesh(const SurfaceAssembly& a, int n_eps, int n_s);

struct PansuSphere {
  SpaceForm model = SpaceForm::sphere3();
  double lambda = 0;
  Vec4 pole, far_pole;
  double focal_length = 0;
  double spread_at_focal = 0, spread_at_half = 0;
  Mesh mesh;
  double area = 0;  // sub-Riemannian mesh area
};

PansuSphere build_pansu(const SpaceForm& model, double lambda, const Vec4& pole,
                        int n_directions = 256, int n_s = 128);

}  // namespace sasaki
