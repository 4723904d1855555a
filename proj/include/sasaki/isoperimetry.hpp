#pragma once

#include "sasaki/mesh.hpp"
#include "sasaki/ruled.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace sasaki {

// pi^2 / (1 + lambda^2)^{3/2}
double pansu_area_closed(double lambda);

struct PansuArea {
  double closed = 0, numeric = 0, rel_gap = 0;
};
// numeric: int |N_h| da over the build_pansu mesh in sphere3 (pole at 1)
PansuArea pansu_area(double lambda, int n_directions = 256, int n_s = 128);

// V(0) = pi^2 and V' = A'/(2 lambda), closed form and adaptive quadrature of the ODE
double pansu_volume_closed(double lambda);
double pansu_volume_ode(double lambda);

// Ray-casting point location in S^3: stereographic projection from a reference point maps
// great circles through it to lines, so the parity along a ray to infinity tells whether a
// sample lies across the mesh from the reference.
class SphereLocator {
 public:
  SphereLocator(const Mesh& closed_mesh, const Vec4& reference);
  // true when x and the reference are separated by the mesh
  bool across(const Vec4& x) const;
  const Vec4& reference() const { return proj_.pole(); }

 private:
  struct Tri {
    Vec3 a, b, c;
  };
  Vec3 chart(const Vec4& x) const { return rot_ * proj_(x); }
  Stereographic proj_;
  Eigen::Matrix3d rot_;  // generic tilt so symmetric inputs do not sit on mesh edges
  std::vector<Tri> tris_;
  std::vector<std::vector<int>> cells_;
  double x0_ = 0, y0_ = 0, h_ = 1;
  int nx_ = 1, ny_ = 1;
};

struct MonteCarloVolume {
  double inside = 0;   // side of the mesh containing `interior`
  double outside = 0;  // 2 pi^2 - inside
  double stderr_ = 0;  // binomial standard error of `inside`
  long samples = 0;
  std::uint64_t seed = 0;
  double reference_clearance = 0;  // distance from the ray-cast reference to the mesh
};
// Uniform samples of S^3 (normalized 4-D Gaussians) in blocks of fixed size; block b uses
// its own generator seeded with (seed, b) and partial counts are summed in block order.
MonteCarloVolume monte_carlo_volume(const Mesh& closed_mesh, const Vec4& interior, long samples,
                                    std::uint64_t seed);

struct PansuVolume {
  double closed = 0, ode = 0, montecarlo = 0, mc_stderr = 0;
  double rel_gap = 0;
  bool flagged = false;  // |ode - mc| > 2% of mc
  long samples = 0;
  std::uint64_t seed = 0;
};
PansuVolume pansu_volume(double lambda, long samples = 1000000, std::uint64_t seed = 1,
                         int n_directions = 256, int n_s = 128);

// smallest |p + q| over mesh vertices: positive means no antipodal pair, so the projection
// to RP^3 is injective on the vertex set
double antipodal_gap(const Mesh& m);

struct CliffordPoint {
  double rho = 0;
  double area = 0;  // in RP^3
  double volume_inner = 0, volume_outer = 0;
  double nh_max_error = 0;  // max | |N_h| - 1 | on sampled points
};
// T_rho = {(rho e^{i a}, sqrt(1 - rho^2) e^{i b})}, descended to RP^3
CliffordPoint clifford_profile(double rho, int samples = 64);
// numeric Riemannian-equals-sub-Riemannian area of T_rho in S^3 from a mesh, halved for RP^3
double clifford_area_numeric(double rho, int n = 256);

struct ComparisonRow {
  double lambda = 0;
  double A_pansu_closed = 0, A_pansu_numeric = 0;
  double V_ode = 0, V_mc = 0;
  double rho_matched = 0, A_clifford = 0;
  bool torus_wins = false;
};
struct CompareOptions {
  bool numeric_area = true;
  int n_directions = 128, n_s = 64;
  long mc_samples = 100000;  // 0 skips Monte Carlo (V_mc = NaN)
  std::uint64_t seed = 1;
};
struct Comparison {
  std::vector<ComparisonRow> rows;
  // maximal runs of consecutive grid values where the torus has smaller area
  std::vector<std::pair<double, double>> torus_wins;
};
Comparison compare_rp3(const std::vector<double>& lambda_grid, const CompareOptions& opt = {});
// the torus T_rho of RP^3 bounding volume V on one side
double match_rho(double volume);

// "a:b:h" inclusive grid
std::vector<double> parse_grid(const std::string& spec);
void write_comparison_csv(std::ostream& os, const Comparison& c, const std::string& header_comment);

}  // namespace sasaki
