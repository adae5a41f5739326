#include "chargedrop/surface_geometry.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "chargedrop/error.hpp"

namespace chargedrop::sphere {

void require_admissible(const SphereField& phi) {
  const double lowest = 1.0 + phi.min_value();
  if (!(lowest >= kMinRadiusFactor)) {
    fail(ErrorCategory::inadmissible_shape,
         "degenerate radius: min(1 + phi) = " + std::to_string(lowest) + " < " +
             std::to_string(kMinRadiusFactor));
  }
}

SurfaceGeometry surface_from_field(const SphereField& phi, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorCategory::invalid_argument, "radius must be positive and finite");
  require_admissible(phi);
  const auto& grid = *phi.grid();
  const auto d = sh_derivatives(grid, phi.coeffs());
  const std::size_t n = grid.size();

  SurfaceGeometry g;
  g.grid = phi.grid();
  g.radius = r;
  g.position.resize(n);
  g.tangent_t.resize(n);
  g.tangent_p.resize(n);
  g.normal.resize(n);
  g.metric.resize(n);
  g.second_form.resize(n);
  g.mean_curvature.resize(n);
  g.second_form_sq.resize(n);
  g.area_element.resize(n);

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k / grid.nlon(), j = k % grid.nlon();
    const double ct = grid.cos_colatitude(i), st = grid.sin_colatitude(i);
    const double cp = grid.cos_mphi(1, j), sp = grid.sin_mphi(1, j);
    const double cot = ct / st;
    const Vec3 x(st * cp, st * sp, ct);
    const Vec3 et(ct * cp, ct * sp, -st);
    const Vec3 ep(-sp, cp, 0.0);

    // Radius function and its derivatives; longitude derivatives carry 1/sin t factors.
    const double R = r * (1.0 + d.value[k]);
    const double Rt = r * d.d_t[k], Rp = r * d.d_p[k];
    const double Rtt = r * d.d_tt[k], Rtp = r * d.d_tp[k], Rpp = r * d.d_pp[k];

    const Vec3 X1 = Rt * x + R * et;
    const Vec3 X2 = Rp * x + R * ep;
    const Vec3 X11 = (Rtt - R) * x + 2.0 * Rt * et;
    const Vec3 X12 = Rtp * x + Rp * et + (Rt + R * cot) * ep;
    const Vec3 X22 = (Rpp - R) * x + 2.0 * Rp * ep - R * cot * et;

    const Vec3 cross = X1.cross(X2);
    const double jac = cross.norm();
    const Vec3 nu = cross / jac;

    Eigen::Matrix2d G, B;
    G << X1.dot(X1), X1.dot(X2), X1.dot(X2), X2.dot(X2);
    B << -X11.dot(nu), -X12.dot(nu), -X12.dot(nu), -X22.dot(nu);
    const Eigen::Matrix2d S = G.inverse() * B;

    g.position[k] = R * x;
    g.tangent_t[k] = X1;
    g.tangent_p[k] = X2;
    g.normal[k] = nu;
    g.metric[k] = G;
    g.second_form[k] = B;
    g.mean_curvature[k] = S.trace();
    g.second_form_sq[k] = (S * S).trace();
    g.area_element[k] = jac * grid.weight(k);
  }
  return g;
}

double area(const SurfaceGeometry& g) {
  double s = 0.0;
  for (double a : g.area_element) s += a;
  return s;
}

double volume(const SurfaceGeometry& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.position.size(); ++k) s += g.position[k].dot(g.normal[k]) * g.area_element[k];
  return s / 3.0;
}

BendingEnergies bending_energies(const SurfaceGeometry& g) {
  BendingEnergies e;
  for (std::size_t k = 0; k < g.area_element.size(); ++k) {
    const double h2 = g.mean_curvature[k] * g.mean_curvature[k];
    const double a2 = g.second_form_sq[k];
    e.mean_sq += h2 * g.area_element[k];
    e.second_form_sq += a2 * g.area_element[k];
    e.traceless_sq += std::max(0.0, a2 - 0.5 * h2) * g.area_element[k];
  }
  return e;
}

double gauss_bonnet_defect(const SurfaceGeometry& g) {
  // Integrate the Gauss curvature form directly so the two large terms do not cancel.
  double s = 0.0;
  for (std::size_t k = 0; k < g.area_element.size(); ++k) {
    s += 0.25 * (g.mean_curvature[k] * g.mean_curvature[k] - g.second_form_sq[k]) * g.area_element[k];
  }
  return s - 2.0 * std::numbers::pi;
}

bool li_yau_check(const SurfaceGeometry& g, double tolerance) {
  return 0.25 * bending_energies(g).second_form_sq >= 2.0 * std::numbers::pi - tolerance;
}

double enclosed_volume(const SphereField& phi, double r) {
  const auto& grid = *phi.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double R = r * (1.0 + phi.values()[k]);
    s += R * R * R * grid.weight(k);
  }
  return s / 3.0;
}

Vec3 barycenter(const SphereField& phi, double r) {
  const auto& grid = *phi.grid();
  Vec3 m = Vec3::Zero();
  double v = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double R = r * (1.0 + phi.values()[k]);
    const double R3 = R * R * R;
    v += R3 / 3.0 * grid.weight(k);
    m += (R3 * R / 4.0) * grid.weight(k) * grid.node(k);
  }
  return m / v;
}

SphereField recentered(const SphereField& phi, double r, Vec3* center_out) {
  const Vec3 c = barycenter(phi, r);
  if (center_out != nullptr) *center_out = c;
  if (c.norm() == 0.0) return phi;
  const auto& grid = phi.grid();
  std::vector<double> values(grid->size());
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Vec3 u = grid->node(k);
    // g(t) = |c + t u| - R((c + t u)/|c + t u|) changes sign once along the ray
    // for a star-shaped body containing c.
    auto g = [&](double t) {
      const Vec3 p = c + t * u;
      const double n = p.norm();
      return n - r * (1.0 + phi.evaluate(p / n));
    };
    double lo = 0.0, hi = r * (1.0 + phi.sup_norm()) + c.norm();
    double glo = g(lo), ghi = g(hi);
    double t = hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      t = lo - glo * (hi - lo) / (ghi - glo);
      if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
      // Illinois-style safeguard keeps the bracket shrinking from both ends.
      const double gt = g(t);
      if (gt == 0.0) break;
      if ((gt < 0.0) == (glo < 0.0)) {
        lo = t;
        glo = gt;
        ghi *= 0.5;
      } else {
        hi = t;
        ghi = gt;
        glo *= 0.5;
      }
    }
    values[k] = t / r - 1.0;
  }
  return SphereField::from_values(grid, std::move(values));
}

SurfacePoint surface_point(const SphereField& phi, double r, const Vec3& direction) {
  const auto p = sh_evaluate_gradient(phi.coeffs(), direction);
  const double R = r * (1.0 + p.value);
  if (!(1.0 + p.value > 0.0)) fail(ErrorCategory::inadmissible_shape, "degenerate radius at panel direction");
  const double grad2 = r * r * (p.d_t * p.d_t + p.d_p * p.d_p);
  SurfacePoint out;
  out.position = R * direction.normalized();
  out.area_ratio = R * std::sqrt(R * R + grad2);
  return out;
}

}  // namespace chargedrop::sphere
