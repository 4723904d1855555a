// Python bindings: thin wrappers returning numpy arrays and plain dicts.
#include "sasaki/isoperimetry.hpp"
#include "sasaki/stability.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sasaki;

namespace {

SpaceForm model(const std::string& name) { return SpaceForm(model_from_string(name)); }

py::array_t<double> rows(const std::vector<Vec4>& v) {
  py::array_t<double> a({static_cast<py::ssize_t>(v.size()), py::ssize_t{4}});
  auto m = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (int k = 0; k < 4; ++k) m(i, k) = v[i][k];
  return a;
}

py::dict geodesic(const std::string& name, const Vec4& p, const Vec4& w, double lambda, double length,
                  double step) {
  const SpaceForm m = model(name);
  const CCGeodesic g = shoot(m, p, w, lambda, length, step);
  std::vector<Vec4> pts, vel;
  std::vector<double> s;
  for (std::size_t k = 0; k < g.size(); ++k) {
    pts.push_back(g.point(k));
    vel.push_back(g.velocity(k));
    s.push_back(g.s_at(k));
  }
  const Closure c = detect_closure(g);
  py::dict d;
  d["s"] = s;
  d["points"] = rows(pts);
  d["velocities"] = rows(vel);
  d["circle"] = c.circle;
  d["closure_length"] = c.length;
  d["closure_residual"] = c.residual;
  return d;
}

py::dict surface(const std::string& name, double lambda, double mu, double length, int generations) {
  const SurfaceAssembly a = assemble_from_base(model(name), lambda, mu, length, generations);
  py::dict d;
  d["closed"] = a.closed;
  d["circle"] = a.closure.circle;
  d["ell"] = a.ell;
  d["patches"] = a.patches.size();
  d["singular_curves"] = a.curves.size();
  d["gamma12_equal"] = a.gamma12_equal;
  d["eps0"] = a.eps0;
  d["embedded"] = a.embedded;
  d["truncated"] = a.truncated;
  d["area"] = a.total_area;
  d["notes"] = a.notes;
  return d;
}

py::dict stability(const std::string& name, double lambda, double mu, double length) {
  const SurfaceAssembly a = assemble_from_base(model(name), lambda, mu, length);
  const StabilityReport r = instability_verdict(a);
  py::dict d;
  d["C"] = r.C;
  d["ell"] = r.ell;
  d["injective"] = r.injective;
  d["test_case"] = to_string(r.test_case);
  d["profile"] = r.profile;
  d["Q_sigma"] = r.Q_sigma;
  d["Q_limit"] = r.Q_limit;
  d["flag_curvature"] = r.flag_curvature;
  d["flag_length"] = r.flag_length;
  d["verdict"] = to_string(r.verdict);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CMC surfaces and isoperimetry in 3-dimensional Sasakian space forms";
  m.attr("__version__") = SASAKI_VERSION;

  m.def("geodesic", &geodesic, py::arg("model"), py::arg("p"), py::arg("w"), py::arg("curvature"),
        py::arg("length"), py::arg("step") = 1e-3, "Shoot a CC-geodesic; returns samples and closure data.");
  m.def("cut_constant", &cut_constant, py::arg("tau"), py::arg("mu"), py::arg("side"));
  m.def(
      "vertical_jacobi",
      [](double tau, double v0, double dv0, double ddv0, const std::vector<double>& s) {
        const VerticalJacobi vj = vertical_jacobi(tau, v0, dv0, ddv0);
        std::vector<double> out;
        for (double x : s) out.push_back(vj.v(x));
        return out;
      },
      py::arg("tau"), py::arg("v0"), py::arg("dv0"), py::arg("ddv0"), py::arg("s"));
  m.def("surface", &surface, py::arg("model"), py::arg("lambda_"), py::arg("mu"), py::arg("length") = -1.0,
        py::arg("generations") = 4);
  m.def("stability", &stability, py::arg("model"), py::arg("lambda_"), py::arg("mu"), py::arg("length") = -1.0);
  m.def("q_limit_circle", &q_limit_circle, py::arg("C"), py::arg("ell"));

  m.def("pansu_area_closed", &pansu_area_closed, py::arg("lambda_"));
  m.def(
      "pansu_area",
      [](double lambda, int nd, int ns) {
        const PansuArea a = pansu_area(lambda, nd, ns);
        return py::dict(py::arg("closed") = a.closed, py::arg("numeric") = a.numeric, py::arg("rel_gap") = a.rel_gap);
      },
      py::arg("lambda_"), py::arg("n_directions") = 256, py::arg("n_s") = 128);
  m.def("pansu_volume_ode", &pansu_volume_ode, py::arg("lambda_"));
  m.def("pansu_volume_closed", &pansu_volume_closed, py::arg("lambda_"));
  m.def(
      "pansu_volume",
      [](double lambda, long samples, std::uint64_t seed) {
        PansuVolume v;
        {
          py::gil_scoped_release nogil;
          v = pansu_volume(lambda, samples, seed);
        }
        return py::dict(py::arg("closed") = v.closed, py::arg("ode") = v.ode, py::arg("montecarlo") = v.montecarlo,
                        py::arg("stderr") = v.mc_stderr, py::arg("rel_gap") = v.rel_gap,
                        py::arg("flagged") = v.flagged);
      },
      py::arg("lambda_"), py::arg("samples") = 1000000, py::arg("seed") = 1);
  m.def(
      "clifford",
      [](double rho) {
        const CliffordPoint c = clifford_profile(rho);
        return py::dict(py::arg("rho") = c.rho, py::arg("area") = c.area, py::arg("volume_inner") = c.volume_inner,
                        py::arg("volume_outer") = c.volume_outer);
      },
      py::arg("rho"));
  m.def("match_rho", &match_rho, py::arg("volume"));
  m.def(
      "compare_rp3",
      [](const std::vector<double>& grid, bool numeric_area, long mc_samples, std::uint64_t seed) {
        CompareOptions opt;
        opt.numeric_area = numeric_area;
        opt.mc_samples = mc_samples;
        opt.seed = seed;
        Comparison c;
        {
          py::gil_scoped_release nogil;
          c = compare_rp3(grid, opt);
        }
        py::list out;
        for (const auto& r : c.rows)
          out.append(py::dict(py::arg("lambda") = r.lambda, py::arg("A_pansu_closed") = r.A_pansu_closed,
                              py::arg("A_pansu_numeric") = r.A_pansu_numeric, py::arg("V_ode") = r.V_ode,
                              py::arg("V_mc") = r.V_mc, py::arg("rho_matched") = r.rho_matched,
                              py::arg("A_clifford") = r.A_clifford, py::arg("torus_wins") = r.torus_wins));
        return py::make_tuple(out, c.torus_wins);
      },
      py::arg("grid"), py::arg("numeric_area") = false, py::arg("mc_samples") = 0, py::arg("seed") = 1);
}
