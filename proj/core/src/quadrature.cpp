#include "dft/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "dft/error.hpp"

namespace dft {

namespace {

constexpr int kInitialPanels = 8;

struct Simpson {
  const std::function<double(double)>& f;
  int max_depth;
  QuadResult acc;

  void refine(double a, double fa, double m, double fm, double b, double fb,
              double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double both = left + right;
    const double delta = both - whole;
    const bool tiny =
        (b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(a), std::abs(b));
    if (std::abs(delta) <= 15.0 * tol || tiny) {
      acc.value += both + delta / 15.0;
      acc.error += std::abs(delta) / 15.0;
      return;
    }
    if (depth >= max_depth || !std::isfinite(delta)) {
      throw QuadratureFailure(depth);
    }
    refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1);
    refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a,
                     double b, double tol, int max_depth) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_depth < 1) throw std::invalid_argument("depth must be >= 1");
  if (!(b > a)) return {};
  Simpson s{f, max_depth, {}};
  const double h = (b - a) / kInitialPanels;
  double x0 = a;
  double f0 = f(a);
  for (int i = 0; i < kInitialPanels; ++i) {
    const double x1 = i + 1 == kInitialPanels ? b : a + (i + 1) * h;
    const double m = 0.5 * (x0 + x1);
    const double fm = f(m);
    const double f1 = f(x1);
    const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
    s.refine(x0, f0, m, fm, x1, f1, whole, tol / kInitialPanels, 1);
    x0 = x1;
    f0 = f1;
  }
  return s.acc;
}

}  // namespace dft
