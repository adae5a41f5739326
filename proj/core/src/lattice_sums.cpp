#include "chargedrop/lattice_sums.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "chargedrop/error.hpp"

namespace chargedrop::capacity {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kRange = 5;

// Sum over nonzero integer vectors with |n_i| <= kRange of f(|n|^2).
template <class F>
double lattice_sum(int k, F&& f) {
  double s = 0.0;
  const int lo = -kRange, hi = kRange;
  const int ylo = k >= 2 ? lo : 0, yhi = k >= 2 ? hi : 0;
  const int zlo = k >= 3 ? lo : 0, zhi = k >= 3 ? hi : 0;
  for (int a = lo; a <= hi; ++a)
    for (int b = ylo; b <= yhi; ++b)
      for (int c = zlo; c <= zhi; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        s += f(static_cast<double>(a * a + b * b + c * c));
      }
  return s;
}
}  // namespace

double lattice_zeta(int k, double s) {
  if (k < 1 || k > 3) fail(ErrorCategory::invalid_argument, "lattice dimension must be 1, 2 or 3");
  if (!(s > 0.0 && s < k)) {
    fail(ErrorCategory::invalid_argument, "lattice sum exponent must lie in (0, " + std::to_string(k) + ")");
  }
  const double w = 0.5 * s;
  const double half = 0.5 * k;
  using boost::math::tgamma;
  const double direct = lattice_sum(k, [&](double n2) {
    const double z = kPi * n2;
    return tgamma(w, z) * std::pow(z, -w);
  });
  const double dual = lattice_sum(k, [&](double n2) {
    const double z = kPi * n2;
    return tgamma(half - w, z) * std::pow(z, w - half);
  });
  return std::pow(kPi, w) / tgamma(w) * (direct + dual + 1.0 / (w - half) - 1.0 / w);
}

double unit_body_self_energy(int k, double s) {
  if (!(s > 0.0 && s < k)) fail(ErrorCategory::invalid_argument, "self-energy exponent out of range");
  if (k == 1) return 2.0 / ((1.0 - s) * (2.0 - s));
  boost::math::quadrature::tanh_sinh<double> integrator;
  if (k == 2) {
    // Pair-distance density of the unit disk: 2 pi d times the lens area.
    auto f = [s](double d) {
      const double lens = 2.0 * std::acos(0.5 * d) - 0.5 * d * std::sqrt(std::max(0.0, 4.0 - d * d));
      return 2.0 * kPi * std::pow(d, 1.0 - s) * lens;
    };
    return integrator.integrate(f, 0.0, 2.0);
  }
  if (k == 3) {
    auto f = [s](double d) {
      const double lens = kPi * (4.0 + d) * (2.0 - d) * (2.0 - d) / 12.0;
      return 4.0 * kPi * std::pow(d, 2.0 - s) * lens;
    };
    return integrator.integrate(f, 0.0, 2.0);
  }
  fail(ErrorCategory::invalid_argument, "body dimension must be 1, 2 or 3");
}

}  // namespace chargedrop::capacity
