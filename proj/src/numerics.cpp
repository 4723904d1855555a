#include "sasaki/numerics.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>

namespace sasaki {

namespace {

struct SimpsonState {
  const ScalarFn& f;
  int max_depth;
  bool exhausted = false;
};

double simpson_rec(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = st.f(lm), frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // depth floor of 4 keeps narrow features from slipping between the first nodes
  if ((depth >= 4 && std::abs(delta) <= 15.0 * tol) || depth >= st.max_depth) {
    if (depth >= st.max_depth && std::abs(delta) > 15.0 * tol) st.exhausted = true;
    return left + right + delta / 15.0;
  }
  return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const ScalarFn& f, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  SimpsonState st{f, max_depth};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double r = simpson_rec(st, a, b, fa, fm, fb, whole, abs_tol, 0);
  if (!std::isfinite(r)) throw NumericError("quadrature produced a non-finite value");
  if (st.exhausted) throw NumericError("adaptive quadrature did not converge");
  return r;
}

double minimize(const ScalarFn& f, double a, double b) {
  std::uintmax_t iters = 500;
  auto r = boost::math::tools::brent_find_minima(f, a, b, std::numeric_limits<double>::digits,
                                                 iters);
  return r.first;
}

double bisect_root(const ScalarFn& f, double a, double b, double xtol) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw NumericError("bisection bracket has no sign change");
  for (int k = 0; k < 400 && (b - a) > xtol; ++k) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

GaussRule gauss_legendre(int n) {
  GaussRule g;
  auto zeros = boost::math::legendre_p_zeros<double>(n);
  // zeros holds the nonnegative roots only
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(n, z);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    g.x.push_back(z);
    g.w.push_back(w);
    if (z != 0.0) {
      g.x.push_back(-z);
      g.w.push_back(w);
    }
  }
  return g;
}

}  // namespace sasaki
