#pragma once

#include "sasaki/spaceform.hpp"

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace sasaki {

struct Mesh {
  std::vector<Vec4> vertices;
  std::vector<std::array<int, 3>> triangles;
  // optional (eps index, s index, patch) per vertex, used to skip neighbouring cells
  std::vector<std::array<int, 3>> tags;

  void append(const Mesh& other);
};

// Merge vertices closer than tol (chart distance; projective3 identifies +-),
// dropping triangles that collapse.
Mesh weld(const SpaceForm& model, const Mesh& m, double tol);
long euler_characteristic(const Mesh& m);
double mean_edge_length(const Mesh& m);

// Sum over triangles of |N_h| times the Riemannian area, using the frame at each centroid.
double subriemannian_area(const SpaceForm& model, const Mesh& m);
// Signed volume of a closed Heisenberg mesh (the chart volume form is dx dy dt).
double enclosed_volume_heisenberg(const Mesh& m);

// Stereographic projection of S^3 from `pole` onto an orthonormal basis of pole^perp.
class Stereographic {
 public:
  explicit Stereographic(const Vec4& pole);
  Vec3 operator()(const Vec4& x) const;
  const Vec4& pole() const { return pole_; }

 private:
  Vec4 pole_;
  Eigen::Matrix<double, 4, 3> basis_;
};

// Candidate point of S^3 farthest from every vertex (axes and the (+-1/2)^4 points).
Vec4 farthest_candidate(const Mesh& m, double* distance = nullptr);

enum class Projection { none4d_csv, stereographic_obj, obj };
Projection projection_from_string(const std::string& s);

// Heisenberg: OBJ with (x, y, t). sphere3: stereographic OBJ or raw 4-D CSV.
void write_mesh(std::ostream& os, const SpaceForm& model, const Mesh& m, Projection proj,
                const std::string& header_comment);

// Triangle soup in R^3: count intersecting pairs, skipping pairs accepted by `skip`.
struct IntersectionStats {
  long pairs_tested = 0;
  long intersecting = 0;
};
IntersectionStats count_intersections(const std::vector<std::array<Vec3, 3>>& tris,
                                      const std::function<bool(int, int)>& skip,
                                      double cell);

}  // namespace sasaki
