#include "chargedrop/set_builders.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chargedrop/error.hpp"

namespace chargedrop::capacity {

namespace {
constexpr double kPi = std::numbers::pi;

Vec3 direction_of(double t, double p) {
  return {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
}
}  // namespace

std::vector<RingPanel> ring_partition_with_counts(const std::vector<double>& edges,
                                                 const std::vector<std::size_t>& counts) {
  if (edges.size() < 2 || edges.front() != 0.0 || std::abs(edges.back() - kPi) > 1e-14) {
    fail(ErrorCategory::invalid_argument, "ring edges must run from 0 to pi");
  }
  if (counts.size() + 1 != edges.size()) fail(ErrorCategory::invalid_argument, "one panel count per band required");
  std::vector<RingPanel> panels;
  const std::size_t bands = edges.size() - 1;
  for (std::size_t b = 0; b < bands; ++b) {
    const double t0 = edges[b], t1 = b + 1 == bands ? kPi : edges[b + 1];
    if (!(t1 > t0)) fail(ErrorCategory::invalid_argument, "ring edges must increase");
    if (counts[b] == 0) fail(ErrorCategory::invalid_argument, "every band needs at least one panel");
    const double band_area = 2.0 * kPi * (std::cos(t0) - std::cos(t1));
    // Colatitude splitting the band into equal areas.
    const double tc = std::acos(0.5 * (std::cos(t0) + std::cos(t1)));
    const double offset = (b % 2 == 1) ? 0.5 : 0.0;
    const double dphi = 2.0 * kPi / static_cast<double>(counts[b]);
    for (std::size_t k = 0; k < counts[b]; ++k) {
      RingPanel p;
      p.direction = direction_of(tc, dphi * (static_cast<double>(k) + offset));
      p.solid_angle = band_area / static_cast<double>(counts[b]);
      p.theta_width = t1 - t0;
      p.phi_width = dphi;
      panels.push_back(p);
    }
  }
  return panels;
}

std::vector<RingPanel> ring_partition_from_edges(const std::vector<double>& edges) {
  if (edges.size() < 2) fail(ErrorCategory::invalid_argument, "ring edges must run from 0 to pi");
  const std::size_t bands = edges.size() - 1;
  std::vector<std::size_t> counts(bands);
  for (std::size_t b = 0; b < bands; ++b) {
    const double t0 = edges[b], t1 = edges[b + 1];
    const double band_area = 2.0 * kPi * (std::cos(t0) - std::cos(t1));
    const double width = t1 - t0;
    const bool polar = b == 0 || b + 1 == bands;
    counts[b] = static_cast<std::size_t>(std::max<long>(polar ? 3 : 1, std::lround(band_area / (width * width))));
  }
  return ring_partition_with_counts(edges, counts);
}

std::vector<RingPanel> ring_partition(std::size_t n) {
  if (n < 8) fail(ErrorCategory::invalid_argument, "ring partition needs at least 8 panels");
  const auto bands = static_cast<std::size_t>(std::max<long>(2, std::lround(std::sqrt(kPi * static_cast<double>(n)) / 2.0)));
  std::vector<double> edges(bands + 1);
  for (std::size_t b = 0; b <= bands; ++b) edges[b] = kPi * static_cast<double>(b) / static_cast<double>(bands);
  edges.back() = kPi;

  // Panel counts proportional to band area, rounded by largest remainder so
  // the total is exactly n; polar caps keep at least 3 sectors.
  std::vector<double> ideal(bands);
  std::vector<std::size_t> counts(bands);
  std::size_t assigned = 0;
  for (std::size_t b = 0; b < bands; ++b) {
    ideal[b] = static_cast<double>(n) * 0.5 * (std::cos(edges[b]) - std::cos(edges[b + 1]));
    const bool polar = b == 0 || b + 1 == bands;
    counts[b] = std::max<std::size_t>(polar ? 3 : 1, static_cast<std::size_t>(std::floor(ideal[b])));
    assigned += counts[b];
  }
  std::vector<std::size_t> order(bands);
  for (std::size_t b = 0; b < bands; ++b) order[b] = b;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return ideal[a] - static_cast<double>(counts[a]) > ideal[b] - static_cast<double>(counts[b]);
  });
  for (std::size_t k = 0; assigned < n; k = (k + 1) % bands) {
    ++counts[order[k]];
    ++assigned;
  }
  for (std::size_t k = bands; assigned > n && k-- > 0;) {
    const std::size_t b = order[k];
    const bool polar = b == 0 || b + 1 == bands;
    if (counts[b] > (polar ? 3u : 1u)) {
      --counts[b];
      --assigned;
    }
  }
  return ring_partition_with_counts(edges, counts);
}

std::vector<double> graded_polar_edges(double focus, double fine, double coarse, double growth) {
  if (!(fine > 0.0 && coarse >= fine && growth > 1.0 && focus >= 0.0 && focus < kPi)) {
    fail(ErrorCategory::invalid_argument, "invalid graded partition parameters");
  }
  std::vector<double> edges{0.0};
  double width = fine;
  while (edges.back() < kPi) {
    const double t = edges.back();
    if (t >= focus) width = std::min(coarse, width * growth);
    double next = t + width;
    if (next > kPi - 0.5 * width) next = kPi;
    edges.push_back(next);
  }
  edges.back() = kPi;
  return edges;
}

SurfaceMap field_surface(const sphere::SphereField& phi, double radius) {
  sphere::require_admissible(phi);
  return [phi, radius](const Vec3& d) { return sphere::surface_point(phi, radius, d); };
}

SurfaceMap zonal_surface(std::function<void(double, double&, double&)> profile) {
  return [profile = std::move(profile)](const Vec3& d) {
    const Vec3 u = d.normalized();
    const double t = std::acos(std::clamp(u.z(), -1.0, 1.0));
    double R = 0.0, dR = 0.0;
    profile(t, R, dR);
    if (!(R > 0.0)) fail(ErrorCategory::inadmissible_shape, "zonal profile radius must be positive");
    sphere::SurfacePoint p;
    p.position = R * u;
    p.area_ratio = R * std::sqrt(R * R + dR * dR);
    return p;
  };
}

DiscretizedSet boundary_panels(const std::vector<RingPanel>& partition, const SurfaceMap& surface) {
  DiscretizedSet set;
  set.dimension = 3;
  set.mode = SetMode::boundary;
  set.elements.reserve(partition.size());
  for (const auto& p : partition) {
    const auto sp = surface(p.direction);
    Element e;
    e.centroid = sp.position;
    e.measure = p.solid_angle * sp.area_ratio;
    const double sin_t = std::sqrt(std::max(0.0, 1.0 - p.direction.z() * p.direction.z()));
    e.diameter = std::sqrt(sp.area_ratio) * std::hypot(p.theta_width, sin_t * p.phi_width);
    set.elements.push_back(e);
  }
  return set;
}

DiscretizedSet field_boundary_panels(const sphere::SphereField& phi, double radius, std::size_t n) {
  return boundary_panels(ring_partition(n), field_surface(phi, radius));
}

DiscretizedSet volume_cells(const SurfaceMap& surface, std::size_t n) {
  if (n < 8) fail(ErrorCategory::invalid_argument, "volume discretization needs at least 8 cells");
  const auto shells = std::max<long>(2, std::lround(std::cbrt(3.0 * static_cast<double>(n) / (4.0 * kPi))));
  const double h = 1.0 / static_cast<double>(shells);
  DiscretizedSet set;
  set.dimension = 3;
  set.mode = SetMode::volumetric;
  for (long k = 0; k < shells; ++k) {
    const double u0 = h * static_cast<double>(k), u1 = u0 + h;
    const double radial = (u1 * u1 * u1 - u0 * u0 * u0) / 3.0;
    // Volume-weighted mean radial parameter of the shell.
    const double uc = 0.75 * (std::pow(u1, 4) - std::pow(u0, 4)) / (u1 * u1 * u1 - u0 * u0 * u0);
    if (k == 0) {
      // Central cell: the parameter ball of radius h, measured on a coarse partition.
      Element e;
      e.centroid = Vec3::Zero();
      for (const auto& p : ring_partition(32)) {
        const double R = surface(p.direction).position.norm();
        e.measure += radial * p.solid_angle * R * R * R;
      }
      e.diameter = 2.0 * h * std::cbrt(3.0 * e.measure / (4.0 * kPi * radial));
      set.elements.push_back(e);
      continue;
    }
    const double mid = 0.5 * (u0 + u1);
    const auto count = static_cast<std::size_t>(std::max<long>(8, std::lround(4.0 * kPi * mid * mid / (h * h))));
    for (const auto& p : ring_partition(count)) {
      const double R = surface(p.direction).position.norm();
      Element e;
      e.centroid = uc * R * p.direction;
      e.measure = radial * p.solid_angle * R * R * R;
      e.diameter = std::cbrt(e.measure) * std::sqrt(3.0);
      set.elements.push_back(e);
    }
  }
  return set;
}

DiscretizedSet field_volume_cells(const sphere::SphereField& phi, double radius, std::size_t n) {
  return volume_cells(field_surface(phi, radius), n);
}

DiscretizedSet disk_cells(const curve::CurveShape& shape, std::size_t n) {
  curve::require_admissible(shape);
  if (n < 4) fail(ErrorCategory::invalid_argument, "disk discretization needs at least 4 cells");
  const auto rings = std::max<long>(1, std::lround(std::sqrt(static_cast<double>(n) / kPi)));
  const double h = 1.0 / static_cast<double>(rings);
  DiscretizedSet set;
  set.dimension = 2;
  set.mode = SetMode::volumetric;
  for (long k = 0; k < rings; ++k) {
    const double u0 = h * static_cast<double>(k), u1 = u0 + h;
    const auto count = std::max<long>(1, std::lround(kPi * (u1 * u1 - u0 * u0) / (h * h)));
    const double uc = std::sqrt(0.5 * (u0 * u0 + u1 * u1));
    const double dt = 2.0 * kPi / static_cast<double>(count);
    const double offset = (k % 2 == 1) ? 0.5 : 0.0;
    for (long j = 0; j < count; ++j) {
      const double t = dt * (static_cast<double>(j) + offset);
      const double R = shape.radius() * (1.0 + shape.rho(t));
      Element e;
      e.centroid = Vec3(uc * R * std::cos(t), uc * R * std::sin(t), 0.0);
      e.measure = 0.5 * (u1 * u1 - u0 * u0) * dt * R * R;
      e.diameter = std::sqrt(2.0 * e.measure);
      set.elements.push_back(e);
    }
  }
  return set;
}

DiscretizedSet curve_panels(const curve::CurveShape& shape, std::size_t n) {
  curve::require_admissible(shape);
  if (n < 3) fail(ErrorCategory::invalid_argument, "curve discretization needs at least 3 panels");
  DiscretizedSet set;
  set.dimension = 2;
  set.mode = SetMode::boundary;
  const double dt = 2.0 * kPi / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = dt * (static_cast<double>(j) + 0.5);
    double v, d1, d2;
    shape.rho_derivatives(t, v, d1, d2);
    const double R = shape.radius() * (1.0 + v), R1 = shape.radius() * d1;
    Element e;
    e.centroid = Vec3(R * std::cos(t), R * std::sin(t), 0.0);
    e.measure = std::hypot(R, R1) * dt;
    e.diameter = e.measure;
    set.elements.push_back(e);
  }
  return set;
}

}  // namespace chargedrop::capacity
