// sasaki: command-line front end.
#include "verify.hpp"

#include "sasaki/isoperimetry.hpp"
#include "sasaki/stability.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace sasaki;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

// 12 significant digits; NaN and infinities become null
json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

json vec(const Vec4& v, bool four) {
  json a = json::array();
  for (int k = 0; k < (four ? 4 : 3); ++k) a.push_back(num(v[k]));
  return a;
}

std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

struct Config {
  std::string model = "sphere3";
  double lambda = 0, mu = 0, length = -1, step = 1e-3, angle = 0, ell = -1;
  int generations = 4, n_eps = 64, n_s = 32, n_dir = 256, stride = 10;
  std::string kind = "cmc", projection = "stereographic-obj";
  std::string out, json_out, obj_out, csv_out;
  std::string grid = "0.05:2.0:0.05";
  long mc_samples = 100000;
  bool no_numeric_area = false;
  unsigned long long seed = 1;
};

json meta(const std::string& sub, const json& config) {
  json m;
  m["tool"] = "sasaki";
  m["version"] = SASAKI_VERSION;
  m["subcommand"] = sub;
  m["config"] = config;
  return m;
}

// open `path` for writing, "-" or empty meaning stdout
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw ValidationError("cannot open output file '" + path + "'");
      os = &file;
    }
  }
};

SpaceForm model_of(const Config& c) { return SpaceForm(model_from_string(c.model)); }

json closure_json(const Closure& c) {
  return {{"circle", c.circle}, {"length", num(c.length)}, {"residual", num(c.residual)}};
}

json assembly_json(const SurfaceAssembly& A) {
  json j;
  j["model"] = to_string(A.model.kind());
  j["lambda"] = num(A.lambda);
  j["mu"] = num(A.mu);
  j["closure"] = closure_json(A.closure);
  j["ell"] = num(A.ell);
  j["closed"] = A.closed;
  j["gamma12_equal"] = A.gamma12_equal;
  j["eps0"] = num(A.eps0);
  j["truncated"] = A.truncated;
  j["embedded"] = A.embedded;
  j["total_area"] = num(A.total_area);
  json patches = json::array();
  for (const auto& p : A.patches)
    patches.push_back({{"generation", p.generation},
                       {"side", p.patch.side()},
                       {"lambda", num(p.patch.lambda())},
                       {"cut", num(p.patch.cut())},
                       {"from_curve", p.from_curve},
                       {"to_curve", p.to_curve}});
  j["patches"] = patches;
  json curves = json::array();
  for (const auto& c : A.curves)
    curves.push_back({{"generation", c.generation},
                      {"start", vec(c.curve->start(), A.model.spherical())},
                      {"curvature_error", num(c.curvature_error)},
                      {"edge_error", num(c.edge_error)}});
  j["singular_curves"] = curves;
  j["notes"] = A.notes;
  return j;
}

json report_json(const StabilityReport& R) {
  json j;
  j["c"] = num(R.C);
  j["ell"] = num(R.ell);
  j["injective"] = R.injective;
  j["test_case"] = to_string(R.test_case);
  j["profile"] = R.profile;
  json qs = json::array();
  for (const auto& [s, q] : R.Q_sigma) qs.push_back({{"sigma", num(s)}, {"q", num(q)}});
  j["q_sigma"] = qs;
  j["q_limit"] = num(R.Q_limit);
  j["q_limit_circle"] = R.injective ? json(nullptr) : num(R.Q_limit_circle);
  j["wirtinger_bound"] = num(R.wirtinger_bound);
  j["flag_curvature"] = R.flag_curvature;
  j["flag_length"] = R.flag_length;
  j["verdict"] = to_string(R.verdict);
  return j;
}

int cmd_geodesic(const Config& c, const json& cfg) {
  const SpaceForm m = model_of(c);
  const Vec4 o = m.spherical() ? Vec4(1, 0, 0, 0) : Vec4::Zero();
  const Frame f = m.frame_at(o);
  const double L = c.length > 0 ? c.length : (m.spherical() ? 2 * kPi + 0.2 : 10.0);
  require(c.stride >= 1, "--stride must be >= 1");
  const CCGeodesic g = shoot(m, o, std::cos(c.angle) * f.x1 + std::sin(c.angle) * f.x2, c.lambda, L, c.step);
  const Closure cl = detect_closure(g);
  {
    Sink s(c.out.empty() ? "geodesic.csv" : c.out);
    *s.os << "# " << meta("geodesic", cfg).dump() << "\n";
    *s.os << (m.spherical() ? "s,p0,p1,p2,p3,v0,v1,v2,v3\n" : "s,x,y,t,vx,vy,vt\n");
    const int dim = m.spherical() ? 4 : 3;
    for (std::size_t k = 0; k < g.size(); k += c.stride) {
      *s.os << g12(g.s_at(k));
      for (int i = 0; i < dim; ++i) *s.os << "," << g12(g.point(k)[i]);
      for (int i = 0; i < dim; ++i) *s.os << "," << g12(g.velocity(k)[i]);
      *s.os << "\n";
    }
  }
  json j = meta("geodesic", cfg);
  j["closure"] = closure_json(cl);
  j["samples"] = g.size();
  Sink s(c.json_out);
  *s.os << j.dump(2) << "\n";
  return 0;
}

int cmd_surface(const Config& c, const json& cfg) {
  const SpaceForm m = model_of(c);
  const Projection proj = projection_from_string(c.projection);
  json j = meta("surface", cfg);
  Mesh mesh;
  if (c.kind == "pansu") {
    require(m.kind() != ModelKind::projective3, "surface --kind pansu: use sphere3 or heisenberg");
    const Vec4 o = m.spherical() ? Vec4(1, 0, 0, 0) : Vec4::Zero();
    const PansuSphere P = build_pansu(m, c.lambda, o, c.n_dir, c.n_s);
    j["pansu"] = {{"lambda", num(P.lambda)},
                  {"pole", vec(P.pole, m.spherical())},
                  {"far_pole", vec(P.far_pole, m.spherical())},
                  {"focal_length", num(P.focal_length)},
                  {"area", num(P.area)},
                  {"area_closed", m.spherical() ? num(pansu_area_closed(c.lambda)) : json(nullptr)},
                  {"euler_characteristic", euler_characteristic(P.mesh)}};
    mesh = P.mesh;
  } else {
    require(c.kind == "cmc", "--kind must be cmc or pansu");
    require(c.generations >= 1, "--generations must be >= 1");
    const SurfaceAssembly A = assemble_from_base(m, c.lambda, c.mu, c.length, c.generations, c.step);
    j["assembly"] = assembly_json(A);
    mesh = assembly_mesh(A, c.n_eps, c.n_s);
    j["assembly"]["euler_characteristic"] = A.closed && A.closure.circle ? json(euler_characteristic(mesh)) : json(nullptr);
  }
  j["mesh"] = {{"vertices", mesh.vertices.size()}, {"triangles", mesh.triangles.size()}};
  {
    Sink s(c.obj_out.empty() ? "surface.obj" : c.obj_out);
    write_mesh(*s.os, m, mesh, proj, meta("surface", cfg).dump());
  }
  Sink s(c.json_out);
  *s.os << j.dump(2) << "\n";
  return 0;
}

int cmd_stability(const Config& c, const json& cfg) {
  const SpaceForm m = model_of(c);
  require(c.generations >= 2, "--generations must be >= 2 for the stability pipeline");
  const SurfaceAssembly A = assemble_from_base(m, c.lambda, c.mu, c.length, c.generations, c.step);
  StabilityOptions opt;
  opt.ell = c.ell;
  const StabilityReport R = instability_verdict(A, opt);
  json j = meta("stability", cfg);
  j["assembly"] = {{"closed", A.closed}, {"gamma12_equal", A.gamma12_equal}, {"ell", num(A.ell)},
                   {"embedded", A.embedded}, {"patches", A.patches.size()}};
  j["report"] = report_json(R);
  if (!c.csv_out.empty()) {
    Sink s(c.csv_out);
    *s.os << "# " << meta("stability", cfg).dump() << "\n";
    *s.os << "sigma,q\n";
    for (const auto& [sg, q] : R.Q_sigma) *s.os << g12(sg) << "," << g12(q) << "\n";
  }
  Sink s(c.json_out);
  *s.os << j.dump(2) << "\n";
  return 0;
}

int cmd_isoperimetric(const Config& c, const json& cfg) {
  const auto grid = parse_grid(c.grid);
  CompareOptions opt;
  opt.numeric_area = !c.no_numeric_area;
  opt.mc_samples = c.mc_samples;
  opt.seed = c.seed;
  opt.n_directions = std::max(8, c.n_dir / 2);
  opt.n_s = std::max(4, c.n_s);
  require(c.mc_samples >= 0, "--mc-samples must be >= 0");
  const Comparison cmp = compare_rp3(grid, opt);
  {
    Sink s(c.out);
    write_comparison_csv(*s.os, cmp, meta("isoperimetric", cfg).dump());
  }
  if (!c.json_out.empty()) {
    json j = meta("isoperimetric", cfg);
    json w = json::array();
    for (const auto& [a, b] : cmp.torus_wins) w.push_back({num(a), num(b)});
    j["rows"] = cmp.rows.size();
    j["torus_wins"] = w;
    Sink s(c.json_out);
    *s.os << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_verify(const Config& c) {
  bool all = true;
  cli::run_verify_suite(c.seed, [&](const cli::CheckResult& r) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << std::endl;
    all = all && r.pass;
  });
  std::cout << (all ? "all properties pass" : "some properties FAILED") << std::endl;
  return all ? 0 : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-Riemannian space forms: CC-geodesics, CMC surfaces, stability, isoperimetry"};
  app.set_version_flag("--version", std::string(SASAKI_VERSION));
  app.require_subcommand(1);
  Config c;

  auto add_model = [&](CLI::App* s) {
    s->add_option("--model", c.model, "heisenberg | sphere3 | projective3")
        ->check(CLI::IsMember({"heisenberg", "sphere3", "projective3"}))
        ->capture_default_str();
  };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "seed for all randomness")->capture_default_str(); };

  auto* geo = app.add_subcommand("geodesic", "trajectory CSV and closure report");
  add_model(geo);
  geo->add_option("--lambda", c.lambda, "curvature")->capture_default_str();
  geo->add_option("--angle", c.angle, "initial direction cos(a) X1 + sin(a) X2")->capture_default_str();
  geo->add_option("--length", c.length, "integrated length (default 2 pi + 0.2, or 10 in heisenberg)");
  geo->add_option("--step", c.step, "RK4 step")->check(CLI::PositiveNumber)->capture_default_str();
  geo->add_option("--stride", c.stride, "write every n-th sample")->capture_default_str();
  geo->add_option("--out", c.out, "trajectory CSV (default geodesic.csv)");
  geo->add_option("--json", c.json_out, "closure report JSON (default stdout)");
  add_seed(geo);

  auto* surf = app.add_subcommand("surface", "assembly JSON and mesh");
  add_model(surf);
  surf->add_option("--kind", c.kind, "cmc | pansu")->check(CLI::IsMember({"cmc", "pansu"}))->capture_default_str();
  surf->add_option("--lambda", c.lambda, "mean curvature")->capture_default_str();
  surf->add_option("--mu", c.mu, "curvature of Gamma")->capture_default_str();
  surf->add_option("--length", c.length, "integrated length of Gamma");
  surf->add_option("--step", c.step, "RK4 step")->check(CLI::PositiveNumber)->capture_default_str();
  surf->add_option("--generations", c.generations, "max generations of sheets")->capture_default_str();
  surf->add_option("--n-eps", c.n_eps, "mesh columns per sheet (cmc)")->check(CLI::PositiveNumber)->capture_default_str();
  surf->add_option("--n-s", c.n_s, "mesh rows per sheet / pencil rows")->check(CLI::PositiveNumber)->capture_default_str();
  surf->add_option("--n-dir", c.n_dir, "pencil directions (pansu)")->check(CLI::PositiveNumber)->capture_default_str();
  surf->add_option("--projection", c.projection, "obj | stereographic-obj | none4d-csv")
      ->check(CLI::IsMember({"obj", "stereographic-obj", "none4d-csv"}))
      ->capture_default_str();
  surf->add_option("--obj", c.obj_out, "mesh file (default surface.obj)");
  surf->add_option("--json", c.json_out, "assembly JSON (default stdout)");
  add_seed(surf);

  auto* stab = app.add_subcommand("stability", "instability verdict JSON and Q(sigma) CSV");
  add_model(stab);
  stab->add_option("--lambda", c.lambda, "mean curvature")->capture_default_str();
  stab->add_option("--mu", c.mu, "curvature of Gamma")->capture_default_str();
  stab->add_option("--length", c.length, "integrated length of Gamma");
  stab->add_option("--step", c.step, "RK4 step")->check(CLI::PositiveNumber)->capture_default_str();
  stab->add_option("--generations", c.generations, "max generations of sheets")->capture_default_str();
  stab->add_option("--ell", c.ell, "bump window for injective Gamma (default picks one)");
  stab->add_option("--csv", c.csv_out, "Q(sigma) CSV");
  stab->add_option("--json", c.json_out, "report JSON (default stdout)");
  add_seed(stab);

  auto* iso = app.add_subcommand("isoperimetric", "Pansu sphere vs Clifford torus table in RP^3");
  iso->add_option("--grid", c.grid, "lambda grid start:stop:step")->capture_default_str();
  iso->add_option("--mc-samples", c.mc_samples, "Monte Carlo samples per row (0 skips)")->capture_default_str();
  iso->add_flag("--no-numeric-area", c.no_numeric_area, "skip the mesh area column");
  iso->add_option("--n-dir", c.n_dir, "pencil directions x 2")->check(CLI::PositiveNumber)->capture_default_str();
  iso->add_option("--n-s", c.n_s, "pencil rows")->check(CLI::PositiveNumber)->capture_default_str();
  iso->add_option("--out", c.out, "comparison CSV (default stdout)");
  iso->add_option("--json", c.json_out, "crossover summary JSON");
  add_seed(iso);

  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  add_seed(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }

  const json cfg = {{"model", c.model},       {"lambda", num(c.lambda)},    {"mu", num(c.mu)},
                    {"length", num(c.length)}, {"step", num(c.step)},        {"angle", num(c.angle)},
                    {"ell", num(c.ell)},       {"generations", c.generations}, {"n_eps", c.n_eps},
                    {"n_s", c.n_s},           {"n_dir", c.n_dir},           {"kind", c.kind},
                    {"projection", c.projection}, {"grid", c.grid},          {"mc_samples", c.mc_samples},
                    {"numeric_area", !c.no_numeric_area}, {"seed", c.seed}};
  try {
    if (*geo) return cmd_geodesic(c, cfg);
    if (*surf) return cmd_surface(c, cfg);
    if (*stab) return cmd_stability(c, cfg);
    if (*iso) return cmd_isoperimetric(c, cfg);
    if (*ver) return cmd_verify(c);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitValidation;
}
