#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "chargedrop/sphere_grid.hpp"

namespace chargedrop::sphere {

// Scalar field on the unit sphere held both as node values and as spherical
// harmonic coefficients of degree <= L.
class SphereField {
 public:
  explicit SphereField(GridPtr grid);

  // Missing high-degree coefficients are treated as zero.
  static SphereField from_coefficients(GridPtr grid, std::vector<double> coeffs);
  // Keeps the given node values; coefficients are their projection.
  static SphereField from_values(GridPtr grid, std::vector<double> values);
  // Samples f at the nodes and projects.
  static SphereField from_function(GridPtr grid, const std::function<double(const Vec3&)>& f);

  const GridPtr& grid() const { return grid_; }
  int band_limit() const { return grid_->band_limit(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int l, int m) const { return coeffs_[coeff_index(l, m)]; }

  double min_value() const;
  double sup_norm() const;
  // max |f| + max |grad f| over the nodes, gradient on the unit sphere.
  double c1_norm() const;
  // L2 norm of the coefficients with degree >= min_degree.
  double degree_norm(int min_degree) const;

  double evaluate(const Vec3& direction) const { return sh_evaluate(coeffs_, direction); }

  SphereField scaled(double factor) const;
  SphereField plus(const SphereField& other) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::vector<double> coeffs_;
};

// Field x -> f(R x).
SphereField rotated(const SphereField& field, const Eigen::Matrix3d& rotation);

// Random band-limited field with Gaussian coefficients decaying like
// (1+l)^-decay on degrees [min_degree, max_degree], rescaled so that the
// chosen norm equals target. Degree 0 is never populated.
struct RandomFieldOptions {
  int min_degree = 1;
  int max_degree = 8;
  double decay = 3.0;
  enum class Norm { sup, c1 } norm = Norm::sup;
  double target = 0.1;
};
SphereField random_field(GridPtr grid, std::mt19937_64& rng, const RandomFieldOptions& options);

Eigen::Matrix3d random_rotation(std::mt19937_64& rng);

// Smallest allowed value of 1 + phi at any node.
inline constexpr double kMinRadiusFactor = 0.05;

}  // namespace chargedrop::sphere
