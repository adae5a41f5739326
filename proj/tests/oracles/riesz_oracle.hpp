// One-dimensional integrals for Riesz energies of simple measures.
#pragma once
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

namespace oracle {

// Energy of the uniform probability measure on the unit sphere in R^3 for the
// kernel |x - y|^-s: for fixed x, |x - y|^2 = 2 - 2t with t uniform on [-1, 1].
inline double uniform_sphere_energy(double s) {
  boost::math::quadrature::tanh_sinh<double> q;
  return 0.5 * q.integrate([s](double t) { return std::pow(2.0 - 2.0 * t, -0.5 * s); }, -1.0, 1.0);
}

// Minimal energy of the unit disk in R^2 for |x - y|^-(2 - alpha), 0 < alpha < 2.
// The equilibrium density is c (1 - |x|^2)^(-alpha/2); evaluating its potential
// at the center gives (1 - alpha/2) pi / sin(pi alpha / 2) in closed form.
inline double disk_energy(double alpha) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double a = 0.5 * alpha;
  // mass = 2 pi int r (1 - r^2)^-a dr = pi / (1 - a); with r = sin u the center
  // potential 2 pi int r^(alpha - 1) (1 - r^2)^-a dr becomes a regular integral.
  const double mass = M_PI / (1.0 - a);
  const double center = 2.0 * M_PI * q.integrate(
      [alpha](double u) { return std::pow(std::sin(u), alpha - 1.0) * std::pow(std::cos(u), 1.0 - alpha); }, 0.0,
      0.5 * M_PI);
  return center / mass;
}

}  // namespace oracle
