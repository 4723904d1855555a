#pragma once

#include <Eigen/Dense>

#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace sasaki {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

inline constexpr double kPi = std::numbers::pi;

// Precondition violations (CLI exit code 2).
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Quadrature / root finding / integration failures (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

using ScalarFn = std::function<double(double)>;

// Adaptive Simpson on [a, b]; throws NumericError when max_depth is exhausted
// before the local error estimate drops below its share of abs_tol.
double integrate(const ScalarFn& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 48);

// Brent minimization on [a, b]; returns the abscissa.
double minimize(const ScalarFn& f, double a, double b);

// Root of f on [a, b] by bisection; f(a), f(b) must differ in sign.
double bisect_root(const ScalarFn& f, double a, double b, double xtol = 1e-15);

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
GaussRule gauss_legendre(int n);

}  // namespace sasaki
