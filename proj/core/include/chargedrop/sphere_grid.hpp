#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace chargedrop::sphere {

using Vec3 = Eigen::Vector3d;

// Real orthonormal spherical harmonics, no Condon-Shortley phase:
//   Y_l^0 = P_l^0(cos t),  Y_l^m = sqrt(2) P_l^m(cos t) cos(m p),
//   Y_l^{-m} = sqrt(2) P_l^m(cos t) sin(m p),   m > 0,
// with P_l^m normalized so that each Y has unit L2 norm on the sphere.
constexpr std::size_t coeff_index(int l, int m) {
  return static_cast<std::size_t>(l * l + l + m);
}
constexpr std::size_t coeff_count(int band_limit) {
  return static_cast<std::size_t>((band_limit + 1) * (band_limit + 1));
}

// Gauss-Legendre nodes x_i (ascending) and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights);

// Normalized associated Legendre values and their first two colatitude
// derivatives at one colatitude, for all 0 <= m <= l <= L. Stored in
// triangular order l(l+1)/2 + m. Requires 0 < t < pi for derivatives.
struct LegendreColumn {
  std::vector<double> p, dp, d2p;
};
constexpr std::size_t tri_index(int l, int m) {
  return static_cast<std::size_t>(l * (l + 1) / 2 + m);
}
void legendre_column(int band_limit, double colatitude, LegendreColumn& out,
                     bool with_derivatives = true);

// Gauss-Legendre colatitudes times uniform longitudes. With oversample k the
// grid has k(L+1) colatitudes and 2k(L+1) longitudes, so products of up to
// 2k band-limited factors are integrated exactly. Immutable after creation.
class SphereGrid {
 public:
  static std::shared_ptr<const SphereGrid> create(int band_limit, int oversample = 4);

  int band_limit() const { return band_limit_; }
  int oversample() const { return oversample_; }
  std::size_t nlat() const { return nlat_; }
  std::size_t nlon() const { return nlon_; }
  std::size_t size() const { return nlat_ * nlon_; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * nlon_ + j; }

  double colatitude(std::size_t i) const { return theta_[i]; }
  double cos_colatitude(std::size_t i) const { return cos_theta_[i]; }
  double sin_colatitude(std::size_t i) const { return sin_theta_[i]; }
  double longitude(std::size_t j) const { return phi_[j]; }

  // Quadrature weight of node (i, j) for the surface measure of the unit sphere.
  double weight(std::size_t node) const { return lat_weight_[node / nlon_] * dphi_; }
  double latitude_weight(std::size_t i) const { return lat_weight_[i]; }
  double longitude_step() const { return dphi_; }
  const std::vector<double>& weights() const { return weights_; }

  Vec3 node(std::size_t k) const;

  const LegendreColumn& legendre(std::size_t i) const { return legendre_[i]; }
  double cos_mphi(int m, std::size_t j) const { return cos_table_[static_cast<std::size_t>(m) * nlon_ + j]; }
  double sin_mphi(int m, std::size_t j) const { return sin_table_[static_cast<std::size_t>(m) * nlon_ + j]; }

 private:
  SphereGrid() = default;
  int band_limit_ = 0;
  int oversample_ = 1;
  std::size_t nlat_ = 0, nlon_ = 0;
  double dphi_ = 0;
  std::vector<double> theta_, cos_theta_, sin_theta_, lat_weight_, phi_, weights_;
  std::vector<LegendreColumn> legendre_;
  std::vector<double> cos_table_, sin_table_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

// Forward transform. Exact for fields of degree <= L sampled on the grid.
std::vector<double> sh_analyze(const SphereGrid& grid, std::span<const double> values);

// Inverse transform. Accepts any square coefficient count up to (L+1)^2.
std::vector<double> sh_synthesize(const SphereGrid& grid, std::span<const double> coeffs);

// Node values of a field and of its spectral derivatives. The longitude
// derivatives are divided by powers of sin(t), which keeps them bounded.
struct SphericalDerivatives {
  std::vector<double> value;
  std::vector<double> d_t;        // df/dt
  std::vector<double> d_p;        // (df/dp) / sin t
  std::vector<double> d_tt;       // d2f/dt2
  std::vector<double> d_tp;       // (d2f/dt dp) / sin t
  std::vector<double> d_pp;       // (d2f/dp2) / sin^2 t
};
SphericalDerivatives sh_derivatives(const SphereGrid& grid, std::span<const double> coeffs);

// Point evaluation of an expansion at an arbitrary direction.
double sh_evaluate(std::span<const double> coeffs, const Vec3& direction);

struct PointGradient {
  double value = 0;
  double d_t = 0;  // df/dt
  double d_p = 0;  // (df/dp) / sin t
};
// Requires the direction to be off the poles (sin t > 1e-8).
PointGradient sh_evaluate_gradient(std::span<const double> coeffs, const Vec3& direction);

int band_limit_of(std::size_t coeff_count);

}  // namespace chargedrop::sphere
