#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <random>
#include <vector>

namespace chargedrop::curve {

using Vec2 = Eigen::Vector2d;

// Star-shaped closed curve r (1 + rho(t)) (cos t, sin t) with
// rho(t) = a_0 + sum_{k=1..K} a_k cos(k t) + b_k sin(k t).
class CurveShape {
 public:
  CurveShape(int modes = 64, std::size_t samples = 1024, double radius = 1.0);

  static CurveShape from_coefficients(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                                      double radius = 1.0, std::size_t samples = 1024);
  // Discrete Fourier projection of uniformly sampled rho onto the first `modes` modes.
  static CurveShape from_samples(const std::vector<double>& values, int modes, double radius = 1.0);

  int modes() const { return static_cast<int>(cos_.size()) - 1; }
  std::size_t samples() const { return samples_; }
  double radius() const { return radius_; }
  const std::vector<double>& cos_coeffs() const { return cos_; }
  const std::vector<double>& sin_coeffs() const { return sin_; }
  double sample_angle(std::size_t j) const;

  // rho and its first two derivatives at angle t.
  double rho(double t) const;
  void rho_derivatives(double t, double& value, double& d1, double& d2) const;
  std::vector<double> sample_values() const;

  double min_radius_factor() const;
  CurveShape with_radius(double radius) const;
  // rho(t - angle): the curve rotated by angle.
  CurveShape rotated(double angle) const;
  // L2 norm of coefficients with mode >= min_mode, in the convention int rho^2 dt / pi.
  double mode_norm(int min_mode) const;

 private:
  std::vector<double> cos_, sin_;
  std::size_t samples_;
  double radius_;
};

struct CurveMeasures {
  double length = 0;
  double area = 0;
  double elastic_energy = 0;  // integral of curvature^2 ds
};

// Throws inadmissible_shape when min(1 + rho) < kMinRadiusFactor.
void require_admissible(const CurveShape& shape);
inline constexpr double kMinRadiusFactor = 0.05;

CurveMeasures curve_measures(const CurveShape& shape);

// Signed curvature at angle t (positive for counterclockwise convex curves).
double curvature(const CurveShape& shape, double t);

// Centroid of the enclosed region.
Vec2 barycenter(const CurveShape& shape);
// The same curve as a radial graph about its centroid (same radius and modes).
CurveShape recentered(const CurveShape& shape);

// Random shape with Gaussian Fourier coefficients decaying like (1+k)^-decay on
// modes [min_mode, max_mode], rescaled to max |rho| = amplitude.
CurveShape random_curve(std::mt19937_64& rng, int min_mode, int max_mode, double decay,
                        double amplitude, int modes = 64, std::size_t samples = 1024);

}  // namespace chargedrop::curve
