#include "sasaki/stability.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sasaki {

EpsProfile EpsProfile::sine(int k, double ell) {
  require(k >= 1, "sine profile: k must be >= 1");
  require(ell > 0, "sine profile: period must be positive");
  return EpsProfile(Kind::sine, 0.0, ell, k, 0.0);
}

EpsProfile EpsProfile::bump(double alpha, double length) {
  require(length > 0, "bump profile: length must be positive");
  return EpsProfile(Kind::bump, alpha, length, 0, 0.0);
}

EpsProfile EpsProfile::constant(double c, double ell) {
  require(ell > 0, "constant profile: period must be positive");
  return EpsProfile(Kind::constant, 0.0, ell, 0, c);
}

double EpsProfile::value(double e) const {
  switch (kind_) {
    case Kind::sine:
      return std::sin(2 * kPi * mode_ * e / len_);
    case Kind::constant:
      return c_;
    case Kind::bump: {
      const double x = (e - lo_) / len_;
      if (x <= 0 || x >= 1) return 0.0;
      const double s = std::sin(kPi * x);
      return std::sin(2 * kPi * x) * s * s;
    }
  }
  return 0.0;
}

double EpsProfile::deriv(double e) const {
  switch (kind_) {
    case Kind::sine: {
      const double w = 2 * kPi * mode_ / len_;
      return w * std::cos(w * e);
    }
    case Kind::constant:
      return 0.0;
    case Kind::bump: {
      const double x = (e - lo_) / len_;
      if (x <= 0 || x >= 1) return 0.0;
      const double s = std::sin(kPi * x), s2 = std::sin(2 * kPi * x);
      return kPi / len_ * (2 * std::cos(2 * kPi * x) * s * s + s2 * s2);
    }
  }
  return 0.0;
}

double EpsProfile::integral() const {
  return integrate([this](double e) { return value(e); }, lo(), hi(), 1e-13);
}
double EpsProfile::l2() const {
  return integrate([this](double e) { return value(e) * value(e); }, lo(), hi(), 1e-13);
}
double EpsProfile::h1() const {
  return integrate([this](double e) { return deriv(e) * deriv(e); }, lo(), hi(), 1e-13);
}

std::string EpsProfile::describe() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::sine:
      os << "sine(k=" << mode_ << ", ell=" << len_ << ")";
      break;
    case Kind::bump:
      os << "bump(alpha=" << lo_ << ", length=" << len_ << ")";
      break;
    case Kind::constant:
      os << "constant(" << c_ << ")";
      break;
  }
  return os.str();
}

std::string to_string(TestCase c) { return c == TestCase::closed ? "closed" : "open"; }
std::string to_string(Verdict v) {
  return v == Verdict::unstable_certified ? "unstable_certified" : "criterion_inconclusive";
}

namespace {

int third_sheet(const SurfaceAssembly& A) {
  const int g2 = A.patches.at(1).to_curve;
  for (std::size_t k = 2; k < A.patches.size(); ++k)
    if (A.patches[k].from_curve == g2 && A.patches[k].patch.side() == 1) return static_cast<int>(k);
  return -1;
}

double piece_integral(const RuledPatch& P, const Piece& pc) {
  if (pc.b <= pc.a) return 0.0;
  ScalarFn f;
  switch (pc.kind) {
    case Piece::Kind::constant:
      f = [&](double s) {
        const auto x = P.scalars(0, s);
        return -pc.value * pc.value * x.q_over_Nh * x.j;
      };
      break;
    case Piece::Kind::normal_t:
      // |N_h|^{-1} <N,T>'^2 in its continuous form |N_h| (<B(Z),S> - 1)^2
      f = [&](double s) {
        const auto x = P.scalars(0, s);
        const double d = x.BZS - 1;
        return pc.value * pc.value * (x.Nh * d * d - x.q_over_Nh * x.NT * x.NT) * x.j;
      };
      break;
    case Piece::Kind::custom: {
      const double c = P.cut();
      for (double end : {0.0, c})
        if (std::abs(pc.a - end) < 1e-12 * c || std::abs(pc.b - end) < 1e-12 * c)
          if (std::abs(pc.dpsi(end)) > 1e-8)
            throw ValidationError("divergent integrand: Z(u) is nonzero at a singular curve");
      f = [&](double s) {
        const auto x = P.scalars(0, s);
        const double p = pc.psi(s), dp = pc.dpsi(s);
        const double grad = x.Nh > 0 ? dp * dp / x.Nh : 0.0;
        return (grad - x.q_over_Nh * p * p) * x.j;
      };
      break;
    }
  }
  return integrate(f, pc.a, pc.b, 1e-12);
}

double piece_mass(const RuledPatch& P, const Piece& pc) {
  return integrate(
      [&](double s) {
        const auto x = P.scalars(0, s);
        double psi = pc.value;
        if (pc.kind == Piece::Kind::normal_t) psi *= x.NT;
        if (pc.kind == Piece::Kind::custom) psi = pc.psi(s);
        return psi * x.j;
      },
      pc.a, pc.b, 1e-12);
}

}  // namespace

TestFunction make_test_function(const SurfaceAssembly& A, const EpsProfile& phi, double sigma) {
  require(A.patches.size() >= 2, "test function: assembly needs both first-generation sheets");
  require(phi.kind() != EpsProfile::Kind::constant, "test function: phi must have zero mean");
  require(std::abs(phi.integral()) <= 1e-9 * std::sqrt(phi.l2() * phi.length()),
          "test function: phi must have zero mean");
  const RuledPatch& P1 = A.patches[0].patch;
  const RuledPatch& P2 = A.patches[1].patch;
  const double s1 = P1.cut(), s2 = P2.cut();
  require(sigma > 0 && sigma < 0.5 * std::min(s1, s2), "test function: need 0 < sigma < min(s1, s2)/2");
  if (A.closure.circle) {
    require(phi.periodic() && std::abs(phi.length() - A.ell) <= 1e-9 * A.ell,
            "test function: on a circle phi must be periodic with the circle's length");
  } else {
    const Generator& g = P1.generator();
    require(phi.kind() == EpsProfile::Kind::bump && phi.lo() >= g.eps_lo && phi.hi() <= g.eps_hi,
            "test function: on an injective curve phi must be a bump inside the integrated window");
  }

  TestFunction u;
  u.phi = phi;
  u.sigma = sigma;
  const double c = P1.scalars(0, sigma).NT;
  using K = Piece::Kind;
  auto pc = [](double a, double b, K k, double value) {
    Piece p;
    p.a = a;
    p.b = b;
    p.kind = k;
    p.value = value;
    return p;
  };
  if (A.gamma12_equal) {
    u.kind = TestCase::closed;
    u.eps0 = A.eps0;
    if (!A.closure.circle) {
      const double e0 = A.eps0;
      require(phi.lo() + e0 >= P1.generator().eps_lo && phi.hi() + e0 <= P1.generator().eps_hi &&
                  phi.lo() >= P1.generator().eps_lo && phi.hi() <= P1.generator().eps_hi,
              "test function: shifted support leaves the integrated window");
    }
    u.patches.push_back({0,
                         {pc(0, sigma, K::constant, c),
                          pc(sigma, 0.5 * s1, K::normal_t, 1.0),
                          pc(0.5 * s1, s1 - sigma, K::normal_t, -1.0),
                          pc(s1 - sigma, s1, K::constant, c)}});
    u.patches.push_back({1, {pc(0, s2, K::constant, c)}});
    u.curves = {{0, c}, {A.patches[0].to_curve, c}};
  } else {
    u.kind = TestCase::open;
    const int k3 = third_sheet(A);
    require(k3 >= 0, "test function: open case needs the sheet grown from Gamma_2 (max_generations >= 2)");
    require(A.patches[1].to_curve != 0, "test function: unsupported assembly topology");
    u.patches.push_back({0, {pc(0, sigma, K::constant, c), pc(sigma, 0.5 * s1, K::normal_t, 1.0)}});
    u.patches.push_back({1, {pc(0, s2, K::constant, c)}});
    // <N_3,T> = -<N_1,T>, so -<N_3,T> continues the first sheet
    u.patches.push_back({k3, {pc(0, sigma, K::constant, c), pc(sigma, 0.5 * s1, K::normal_t, -1.0)}});
    u.curves = {{0, c}, {A.patches[1].to_curve, c}};
  }
  return u;
}

QValue evaluate_Q(const SurfaceAssembly& A, const TestFunction& u) {
  QValue out;
  const double l2 = u.phi.l2(), h1 = u.phi.h1();
  for (const auto& pf : u.patches) {
    const RuledPatch& P = A.patches.at(pf.patch).patch;
    for (const auto& pc : pf.pieces) out.surface += l2 * piece_integral(P, pc);
  }
  for (const auto& cv : u.curves) out.line += cv.value * cv.value * (h1 - 4 * l2);
  return out;
}

double test_function_mean(const SurfaceAssembly& A, const TestFunction& u) {
  const double m = u.phi.integral();
  double total = 0;
  for (const auto& pf : u.patches)
    for (const auto& pc : pf.pieces) total += m * piece_mass(A.patches.at(pf.patch).patch, pc);
  return total;
}

double test_function_sup(const SurfaceAssembly& A, const TestFunction& u) {
  double phimax = 0;
  for (int k = 0; k <= 2000; ++k)
    phimax = std::max(phimax, std::abs(u.phi.value(u.phi.lo() + u.phi.length() * k / 2000.0)));
  double psimax = 0;
  for (const auto& pf : u.patches)
    for (const auto& pc : pf.pieces) {
      const RuledPatch& P = A.patches.at(pf.patch).patch;
      for (int k = 0; k <= 200; ++k) {
        const double s = pc.a + (pc.b - pc.a) * k / 200.0;
        double psi = pc.value;
        if (pc.kind == Piece::Kind::normal_t) psi *= P.scalars(0, s).NT;
        if (pc.kind == Piece::Kind::custom) psi = pc.psi(s);
        psimax = std::max(psimax, std::abs(psi));
      }
    }
  return phimax * psimax;
}

double constant_C(const RuledPatch& P) {
  require(std::isfinite(P.cut()), "constant_C: the sheet has no far singular curve");
  return integrate(
      [&](double s) {
        const auto x = P.scalars(0, s);
        return x.q_over_Nh * x.j;
      },
      0.0, P.cut(), 1e-10);
}

double constant_C(const SurfaceAssembly& A) {
  require(A.patches.size() >= 2, "constant_C: assembly has no second sheet");
  return constant_C(A.patches[1].patch);
}

double aux_band_value(const RuledPatch& P, double a, double b, double phi_l2, double ell) {
  require(0 <= a && a <= b && b <= P.cut(), "aux_band_value: need 0 <= a <= b <= s_i");
  require(ell > 0, "aux_band_value: ell must be positive");
  if (a == b) return 0.0;
  const double lam = P.lambda();
  auto bracket = [&](double s) {
    const auto x = P.scalars(0, s);
    const double L = ell * std::sqrt(x.j * x.j + lam * lam * x.v * x.v);  // ell |X|
    return x.NT * (x.BZS - 1) * L / std::sqrt(1 + lam * lam * x.Nh * x.Nh);
  };
  return phi_l2 / ell * (bracket(b) - bracket(a));
}

double band_integral(const RuledPatch& P, double a, double b, double phi_l2) {
  Piece pc;
  pc.a = a;
  pc.b = b;
  pc.kind = Piece::Kind::normal_t;
  pc.value = 1.0;
  return phi_l2 * piece_integral(P, pc);
}

double q_limit(double C, const EpsProfile& phi) { return 2 * phi.h1() - (C + 4) * phi.l2(); }

double q_limit_circle(double C, double ell) {
  return 4 * kPi * kPi / ell - (C + 4) * ell / 2;
}

double wirtinger_min_rayleigh(double ell, int degree) {
  require(ell > 0 && degree >= 1, "wirtinger: need ell > 0 and degree >= 1");
  const int n = 2 * degree;
  const GaussRule g = gauss_legendre(4 * degree + 16);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < g.x.size(); ++q) {
    const double e = 0.5 * ell * (g.x[q] + 1), w = 0.5 * ell * g.w[q];
    Eigen::VectorXd f(n), df(n);
    for (int k = 1; k <= degree; ++k) {
      const double om = 2 * kPi * k / ell;
      f[2 * k - 2] = std::cos(om * e);
      f[2 * k - 1] = std::sin(om * e);
      df[2 * k - 2] = -om * std::sin(om * e);
      df[2 * k - 1] = om * std::cos(om * e);
    }
    K += w * df * df.transpose();
    M += w * f * f.transpose();
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  if (es.info() != Eigen::Success) throw NumericError("wirtinger: eigen solver failed");
  return es.eigenvalues().minCoeff();
}

StabilityReport instability_verdict(const SurfaceAssembly& A, const StabilityOptions& opt) {
  if (!A.embedded)
    throw ValidationError("instability_verdict: assembly is not embedded, the criterion does not apply");
  require(!opt.sigma_fractions.empty(), "instability_verdict: no sigma values");
  StabilityReport R;
  const RuledPatch& P1 = A.patches.at(0).patch;
  R.C = constant_C(A);
  R.injective = !A.closure.circle;
  const double lk = A.lambda * A.lambda + A.model.kappa();
  R.flag_curvature = lk >= 1 - 1e-12;

  EpsProfile phi = EpsProfile::sine(1, A.closure.circle ? A.ell : 1.0);
  if (R.injective) {
    const Generator& g = P1.generator();
    const double W = g.length();
    double ell = opt.ell > 0 ? opt.ell : std::min(6 * kPi, 0.75 * W);
    require(ell < W, "instability_verdict: bump window longer than the integrated curve");
    double alpha = g.eps_lo + 0.5 * (W - ell);
    if (A.gamma12_equal) {  // the copy shifted by eps0 has to fit as well
      const double e0 = A.eps0;
      require(ell + std::abs(e0) < W, "instability_verdict: window too short for the eps shift");
      alpha = g.eps_lo + 0.5 * (W - ell - std::abs(e0)) - std::min(0.0, e0);
    }
    phi = EpsProfile::bump(alpha, ell);
    R.ell = ell;
  } else {
    R.ell = A.ell;
    R.Q_limit_circle = q_limit_circle(R.C, R.ell);
  }
  R.flag_length = R.injective || R.ell > std::sqrt(2.0) * kPi;
  R.profile = phi.describe();
  R.wirtinger_bound = 4 * kPi * kPi / (R.ell * R.ell);
  R.Q_limit = q_limit(R.C, phi);

  const double smin = std::min(P1.cut(), A.patches.at(1).patch.cut());
  for (double f : opt.sigma_fractions) {
    const TestFunction u = make_test_function(A, phi, f * smin);
    R.test_case = u.kind;
    R.Q_sigma.push_back({f * smin, evaluate_Q(A, u).total()});
  }
  std::sort(R.Q_sigma.begin(), R.Q_sigma.end(), [](auto& a, auto& b) { return a.first > b.first; });
  const bool certified = R.flag_curvature && R.flag_length && R.Q_limit < 0 && R.Q_sigma.back().second < 0;
  R.verdict = certified ? Verdict::unstable_certified : Verdict::criterion_inconclusive;
  return R;
}

SecondVariation second_variation_vertical(const SurfaceAssembly& A, const EpsProfile& rho,
                                          double radius, double h) {
  require(A.patches.size() >= 2, "second variation: assembly needs both first-generation sheets");
  require(radius > 0 && h > 0, "second variation: radius and step must be positive");
  const RuledPatch& P1 = A.patches[0].patch;
  const RuledPatch& P2 = A.patches[1].patch;
  require(P1.generator().constant_torsion, "second variation: generator must be a CC-geodesic");
  const SpaceForm& m = A.model;
  const VerticalJacobi v1 = P1.vj(), v2 = P2.vj();

  // shrink until s -> v(s) is strictly decreasing on [-r, r]
  double r0 = std::min(radius, 0.25 * std::min(P1.cut(), P2.cut()));
  for (;;) {
    bool ok = true;
    for (int k = 0; k <= 200 && ok; ++k) {
      const double s = r0 * k / 200.0;
      ok = v1.dv(s) < 0 && v2.dv(s) > 0;
    }
    if (ok) break;
    r0 *= 0.5;
    if (r0 < 1e-6) throw NumericError("second variation: no monotone neighbourhood found");
  }
  SecondVariation out;
  out.radius = r0;

  auto vfun = [&](double s) { return s >= 0 ? v1.v(s) : v2.v(-s); };
  auto W = [&](double s) { return s >= 0 ? v1.integral(s) : -v2.integral(-s); };
  // int_{-r0}^{r0} |c + v(s)| ds, exact up to the root
  auto inner = [&](double c) {
    auto F = [&](double s) { return c * s + W(s); };
    auto f = [&](double s) { return c + vfun(s); };
    if (f(-r0) <= 0) return -(F(r0) - F(-r0));
    if (f(r0) >= 0) return F(r0) - F(-r0);
    const double root = bisect_root(f, -r0, r0, 1e-15);
    return (F(root) - F(-r0)) - (F(r0) - F(root));
  };
  const GaussRule ge = gauss_legendre(64);
  const double elo = rho.lo(), ehi = rho.hi(), half = 0.5 * (ehi - elo);
  std::vector<double> eps(ge.x.size()), we(ge.x.size());
  for (std::size_t k = 0; k < ge.x.size(); ++k) {
    eps[k] = elo + half * (ge.x[k] + 1);
    we[k] = half * ge.w[k];
  }
  auto area = [&](double r) {
    double s = 0;
    for (std::size_t k = 0; k < eps.size(); ++k) s += we[k] * inner(r * rho.deriv(eps[k]));
    return s;
  };
  const double A0 = area(0);
  auto D = [&](double hh) { return (area(hh) - 2 * A0 + area(-hh)) / (hh * hh); };
  out.A2_numeric = (4 * D(0.5 * h) - D(h)) / 3;
  out.A2_closed = rho.h1();

  // volume swept by (r', eps, s) -> flow_T(F(eps, s), r' rho(eps))
  const GaussRule gs = gauss_legendre(16), gr = gauss_legendre(4);
  const double he = 1e-5;
  struct Sample {
    double w, e, j;
    Vec4 p, pm, pp, ds;
  };
  std::vector<Sample> samples;
  for (std::size_t k = 0; k < eps.size(); ++k)
    for (int sheet = 0; sheet < 2; ++sheet)
      for (std::size_t q = 0; q < gs.x.size(); ++q) {
        const double s = 0.5 * r0 * (gs.x[q] + 1);
        const RuledPatch& P = sheet == 0 ? P1 : P2;
        const PatchFields f = P.fields_at(eps[k], s);
        Sample sm;
        sm.w = we[k] * 0.5 * r0 * gs.w[q];
        sm.e = eps[k];
        sm.j = f.scalars.j;
        sm.p = f.point;
        sm.pm = P.fields_at(eps[k] - he, s).point;
        sm.pp = P.fields_at(eps[k] + he, s).point;
        sm.ds = sheet == 0 ? f.Z : Vec4(-f.Z);  // d/ds with s < 0 on the second sheet
        samples.push_back(sm);
      }
  auto volume = [&](double r) {
    double V = 0;
    for (const Sample& sm : samples)
      for (std::size_t a = 0; a < gr.x.size(); ++a) {
        const double rr = 0.5 * r * (gr.x[a] + 1), wr = 0.5 * r * gr.w[a];
        const Vec4 x = m.reeb_flow(sm.p, rr * rho.value(sm.e));
        const Vec4 de = (m.reeb_flow(sm.pp, rr * rho.value(sm.e + he)) -
                         m.reeb_flow(sm.pm, rr * rho.value(sm.e - he))) / (2 * he);
        const Vec4 ds = m.reeb_flow_vector(sm.ds, rr * rho.value(sm.e));
        const Vec4 dr = rho.value(sm.e) * m.reeb(x);
        V += wr * sm.w * m.volume_form(x, dr, de, ds);
      }
    return V;
  };
  out.V2_numeric = (volume(h) + volume(-h)) / (h * h);
  for (const Sample& sm : samples) out.scale += sm.w * rho.value(sm.e) * rho.value(sm.e) * sm.j;
  return out;
}

}  // namespace sasaki
