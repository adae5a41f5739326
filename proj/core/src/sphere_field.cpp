#include "chargedrop/sphere_field.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <string>

#include "chargedrop/error.hpp"

namespace chargedrop::sphere {

SphereField::SphereField(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_->size(), 0.0), coeffs_(coeff_count(grid_->band_limit()), 0.0) {}

SphereField SphereField::from_coefficients(GridPtr grid, std::vector<double> coeffs) {
  const std::size_t full = coeff_count(grid->band_limit());
  if (coeffs.size() > full) {
    fail(ErrorCategory::invalid_argument,
         "coefficient degree exceeds grid band limit " + std::to_string(grid->band_limit()));
  }
  band_limit_of(coeffs.size());
  for (double c : coeffs) {
    if (!std::isfinite(c)) fail(ErrorCategory::invalid_argument, "non-finite coefficient");
  }
  coeffs.resize(full, 0.0);
  SphereField f(grid);
  f.values_ = sh_synthesize(*grid, coeffs);
  f.coeffs_ = std::move(coeffs);
  return f;
}

SphereField SphereField::from_values(GridPtr grid, std::vector<double> values) {
  SphereField f(grid);
  f.coeffs_ = sh_analyze(*grid, values);
  f.values_ = std::move(values);
  return f;
}

SphereField SphereField::from_function(GridPtr grid, const std::function<double(const Vec3&)>& fn) {
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = fn(grid->node(k));
  return from_values(std::move(grid), std::move(v));
}

double SphereField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

double SphereField::sup_norm() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double SphereField::c1_norm() const {
  const auto d = sh_derivatives(*grid_, coeffs_);
  double g = 0.0;
  for (std::size_t k = 0; k < d.value.size(); ++k) g = std::max(g, std::hypot(d.d_t[k], d.d_p[k]));
  return sup_norm() + g;
}

double SphereField::degree_norm(int min_degree) const {
  double s = 0.0;
  for (std::size_t k = coeff_index(std::max(0, min_degree), -std::max(0, min_degree)); k < coeffs_.size(); ++k) {
    s += coeffs_[k] * coeffs_[k];
  }
  return std::sqrt(s);
}

SphereField SphereField::scaled(double factor) const {
  auto c = coeffs_;
  for (double& x : c) x *= factor;
  SphereField f(grid_);
  f.coeffs_ = std::move(c);
  f.values_ = values_;
  for (double& x : f.values_) x *= factor;
  return f;
}

SphereField SphereField::plus(const SphereField& other) const {
  if (other.grid_ != grid_) fail(ErrorCategory::invalid_argument, "fields live on different grids");
  SphereField f(grid_);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) f.coeffs_[k] = coeffs_[k] + other.coeffs_[k];
  for (std::size_t k = 0; k < values_.size(); ++k) f.values_[k] = values_[k] + other.values_[k];
  return f;
}

SphereField rotated(const SphereField& field, const Eigen::Matrix3d& rotation) {
  const auto& grid = field.grid();
  std::vector<double> v(grid->size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = field.evaluate(rotation * grid->node(k));
  return SphereField::from_values(grid, std::move(v));
}

SphereField random_field(GridPtr grid, std::mt19937_64& rng, const RandomFieldOptions& o) {
  const int lo = std::max(1, o.min_degree);
  const int hi = std::min(o.max_degree, grid->band_limit());
  if (hi < lo) fail(ErrorCategory::invalid_argument, "empty degree range for random field");
  if (!(o.target >= 0.0)) fail(ErrorCategory::invalid_argument, "random field norm target must be nonnegative");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(coeff_count(grid->band_limit()), 0.0);
  for (int l = lo; l <= hi; ++l) {
    const double scale = std::pow(1.0 + l, -o.decay);
    for (int m = -l; m <= l; ++m) c[coeff_index(l, m)] = scale * normal(rng);
  }
  auto f = SphereField::from_coefficients(grid, std::move(c));
  const double n = o.norm == RandomFieldOptions::Norm::sup ? f.sup_norm() : f.c1_norm();
  return n > 0.0 ? f.scaled(o.target / n) : f;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  q.normalize();
  return q.toRotationMatrix();
}

}  // namespace chargedrop::sphere
