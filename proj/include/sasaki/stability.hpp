#pragma once

#include "sasaki/ruled.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sasaki {

// Profile phi(eps) of a separable test function.
class EpsProfile {
 public:
  enum class Kind { sine, bump, constant };
  // sin(2 pi k eps / ell), ell-periodic
  static EpsProfile sine(int k, double ell);
  // sin(2 pi x) sin^2(pi x), x = (eps - alpha) / length, supported on [alpha, alpha + length]
  static EpsProfile bump(double alpha, double length);
  // not admissible for make_test_function (nonzero mean); used for the pure line term
  static EpsProfile constant(double c, double ell);

  Kind kind() const { return kind_; }
  double value(double eps) const;
  double deriv(double eps) const;
  double lo() const { return lo_; }
  double hi() const { return lo_ + len_; }
  double length() const { return len_; }
  bool periodic() const { return kind_ != Kind::bump; }
  double integral() const;     // int phi
  double l2() const;           // int phi^2
  double h1() const;           // int phi'^2
  std::string describe() const;

 private:
  EpsProfile(Kind k, double lo, double len, int mode, double c)
      : kind_(k), lo_(lo), len_(len), mode_(mode), c_(c) {}
  Kind kind_;
  double lo_, len_;
  int mode_;
  double c_;
};

// psi(s) on [a, b] of one patch.
struct Piece {
  enum class Kind { constant, normal_t, custom };
  double a = 0, b = 0;
  Kind kind = Kind::constant;
  double value = 0;  // constant value, or the sign multiplying <N,T>
  std::function<double(double)> psi, dpsi;  // custom only
};

struct PatchFunction {
  int patch = 0;
  std::vector<Piece> pieces;  // ordered, zero outside
};

struct CurveValue {
  int curve = 0;
  double value = 0;
};

enum class TestCase { closed, open };
std::string to_string(TestCase c);

struct TestFunction {
  EpsProfile phi = EpsProfile::sine(1, 2 * kPi);
  double sigma = 0;
  TestCase kind = TestCase::closed;
  double eps0 = 0;
  std::vector<PatchFunction> patches;
  std::vector<CurveValue> curves;
};

// w_sigma from the closed / open piecewise tables.
TestFunction make_test_function(const SurfaceAssembly& a, const EpsProfile& phi, double sigma);

struct QValue {
  double surface = 0, line = 0;
  double total() const { return surface + line; }
};
QValue evaluate_Q(const SurfaceAssembly& a, const TestFunction& u);
// int w da over the assembly
double test_function_mean(const SurfaceAssembly& a, const TestFunction& u);
// sup |w|
double test_function_sup(const SurfaceAssembly& a, const TestFunction& u);

// int_0^{s_2} |N_h|^{-1} q j_2 ds on the second sheet
double constant_C(const SurfaceAssembly& a);
double constant_C(const RuledPatch& sigma2);

// Band identity: boundary bracket <N,T>(<B(Z),S> - 1) L(s) / sqrt(1 + lambda^2 |N_h|^2),
// with L(s) = ell |X(s)| the length of the eps-curve over a window of length ell.
double aux_band_value(const RuledPatch& p, double a, double b, double phi_l2, double ell);
// Direct (eps, s) quadrature of |N_h|^{-1}(Z(w)^2 - q w^2) da for w = phi <N,T>.
double band_integral(const RuledPatch& p, double a, double b, double phi_l2);

double q_limit(double C, const EpsProfile& phi);
double q_limit_circle(double C, double ell);

// min of int phi'^2 / int phi^2 over mean-zero trigonometric polynomials of given degree
double wirtinger_min_rayleigh(double ell, int degree = 8);

enum class Verdict { unstable_certified, criterion_inconclusive };
std::string to_string(Verdict v);

struct StabilityOptions {
  std::vector<double> sigma_fractions{0.2, 0.1, 0.05, 0.025};
  double ell = -1;  // bump window for injective curves; <= 0 picks one
};

struct StabilityReport {
  double C = 0;
  double ell = 0;
  bool injective = false;
  TestCase test_case = TestCase::closed;
  std::string profile;
  std::vector<std::pair<double, double>> Q_sigma;
  double Q_limit = 0;
  double Q_limit_circle = 0;  // only meaningful for circles
  double wirtinger_bound = 0;
  bool flag_curvature = false;  // lambda^2 + kappa >= 1
  bool flag_length = false;     // injective or ell > sqrt(2) pi
  Verdict verdict = Verdict::criterion_inconclusive;
};

StabilityReport instability_verdict(const SurfaceAssembly& a, const StabilityOptions& opt = {});

struct SecondVariation {
  double radius = 0;
  double A2_numeric = 0, A2_closed = 0;
  double V2_numeric = 0, scale = 0;
};
// Vertical variation exp(r rho(eps) T) of the lambda-neighbourhood of Gamma spanned by the
// first two sheets of `a`.
SecondVariation second_variation_vertical(const SurfaceAssembly& a, const EpsProfile& rho,
                                          double radius, double h = 1e-2);

}  // namespace sasaki
