#pragma once

#include <Eigen/Geometry>
#include <array>
#include <functional>
#include <random>
#include <vector>

#include "chargedrop/sphere_grid.hpp"

namespace chargedrop::smoothing {

using sphere::GridPtr;
using sphere::Vec3;
using MapFunction = std::function<Vec3(const Vec3&)>;

// A map psi from the unit sphere to R^3 sampled on a grid. Derivatives are
// taken spectrally from the degree-L projection of the node values, in the
// orthonormal frame (e_t, e_p) of the parametrizing sphere.
class ParametrizedMap {
 public:
  // Keeps f as the pointwise evaluator used by mollification.
  static ParametrizedMap from_function(GridPtr grid, MapFunction f);
  // Band-limited map; point evaluation goes through the harmonic expansion.
  static ParametrizedMap from_values(GridPtr grid, std::array<std::vector<double>, 3> values);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return grid_->size(); }
  Vec3 value(std::size_t node) const;
  Vec3 d1(std::size_t node) const { return d1_[node]; }
  Vec3 d2(std::size_t node) const { return d2_[node]; }
  double gradient_norm(std::size_t node) const;
  double wedge_norm(std::size_t node) const { return d1_[node].cross(d2_[node]).norm(); }
  // h with h^2 = |grad psi|^2 / 2.
  double conformal_factor(std::size_t node) const;
  double conformal_defect() const;  // max |h - 1|
  const std::array<std::vector<double>, 3>& values() const { return values_; }
  const std::array<std::vector<double>, 3>& coeffs() const { return coeffs_; }

  Vec3 evaluate(const Vec3& direction) const;

 private:
  void derive();
  GridPtr grid_;
  MapFunction exact_;
  std::array<std::vector<double>, 3> values_, coeffs_;
  std::vector<Vec3> d1_, d2_;
};

struct Bounds {
  double min_wedge = 0;
  double max_gradient = 0;
};
Bounds wedge_and_grad_bounds(const ParametrizedMap& psi);

// The constants the mollified map has to respect.
inline constexpr double kMinWedge = 0.125;
inline constexpr double kMaxGradient = 2.0;
inline constexpr double kMaxConformalDefect = 0.25;

struct MollifyOptions {
  int points = 8;        // per dimension of the product rule on the eps-ball
  int check_points = 12; // comparison rule for the resolution check
  std::size_t check_stride = 7;  // every k-th node is re-evaluated with the comparison rule
  double check_tolerance = 1e-4;
};

struct MollifyResult {
  ParametrizedMap map;
  double resolution_difference = 0;  // max over checked nodes of |psi_eps(8^3) - psi_eps(12^3)|
  bool resolution_ok = true;
};

// psi_eps(x) = int rho_eps(z) psi((x - z)/|x - z|) dz at every node: psi is
// extended 0-homogeneously and convolved with a normalized smooth bump of
// radius eps. Refuses inputs with max |h - 1| > 1/4.
MollifyResult mollify(const ParametrizedMap& psi, double eps, const MollifyOptions& options = {});

// psi_eps at one arbitrary direction, with the same rule as mollify.
Vec3 mollified_value(const ParametrizedMap& psi, double eps, const Vec3& direction, int points = 8);

// Scalar version, used for the per-degree damping factors.
std::vector<double> mollify_scalar(const sphere::SphereGrid& grid, const std::function<double(const Vec3&)>& f,
                                   double eps, int points);

// Ratio of degree-l coefficients after and before mollifying Y_l^0, l = 0..L.
std::vector<double> damping_factors(const GridPtr& grid, double eps, int points = 8);

// Discrete W^{2,2} distance: sqrt of the quadrature sum of |D|^2 + |grad D|^2 + |Hess D|^2
// with D = a - b and covariant Hessians taken spectrally.
double sobolev_distance(const ParametrizedMap& a, const ParametrizedMap& b);

// psi composed with a rotation on the right: x -> psi(R x).
ParametrizedMap precomposed(const ParametrizedMap& psi, const Eigen::Matrix3d& rotation);

// Exactly conformal map: stereographic dilation by k about the north pole,
// between two rotations. Its conformal factor ranges over [1/k, k].
MapFunction stereographic_dilation(double k, const Eigen::Matrix3d& before, const Eigen::Matrix3d& after);

// x -> (1 + a (x.e)|x.e|) x: second derivatives jump across the great circle orthogonal to e.
MapFunction curvature_kink(double a, const Vec3& e);

// Inputs satisfying the conformal-factor bound: identity, stereographic
// dilations, rotated radial graphs with small random band-limited profiles,
// and graphs with a curvature kink.
std::vector<ParametrizedMap> admissible_inputs(const GridPtr& grid, std::size_t count, std::uint64_t seed);

}  // namespace chargedrop::smoothing
