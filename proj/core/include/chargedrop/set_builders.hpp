#pragma once

#include <functional>
#include <vector>

#include "chargedrop/curve_shape.hpp"
#include "chargedrop/riesz_capacity.hpp"
#include "chargedrop/surface_geometry.hpp"

namespace chargedrop::capacity {

// Panel of a zonal partition of the unit sphere: bands in colatitude, each cut
// into equal longitude sectors of roughly the band's width. Alternate bands are
// shifted by half a sector.
struct RingPanel {
  Vec3 direction;          // area centroid direction of the panel
  double solid_angle = 0;  // exact area on the unit sphere
  double theta_width = 0;
  double phi_width = 0;
};

// Exactly n near-square panels from equal-width bands.
std::vector<RingPanel> ring_partition(std::size_t n);
// Bands between colatitude edges with the given number of sectors each.
std::vector<RingPanel> ring_partition_with_counts(const std::vector<double>& edges,
                                                 const std::vector<std::size_t>& counts);
// Bands between the given colatitude edges (0 = e_0 < ... < e_B = pi); each
// band is cut into max(3, round(area / width^2)) sectors when it touches a pole,
// max(1, ...) otherwise.
std::vector<RingPanel> ring_partition_from_edges(const std::vector<double>& edges);
// Band edges of width `fine` on [0, focus], growing geometrically by `growth`
// up to width `coarse`, then uniform to pi.
std::vector<double> graded_polar_edges(double focus, double fine, double coarse, double growth = 1.15);

// Maps a unit direction to a point of a star-shaped surface and its area density.
using SurfaceMap = std::function<sphere::SurfacePoint(const Vec3&)>;

SurfaceMap field_surface(const sphere::SphereField& phi, double radius);
// Surface of revolution about the z axis: profile(t, R, dR/dt).
SurfaceMap zonal_surface(std::function<void(double, double&, double&)> profile);

// Boundary panels: centroid = mapped panel direction, measure = solid angle
// times area density there.
DiscretizedSet boundary_panels(const std::vector<RingPanel>& partition, const SurfaceMap& surface);
DiscretizedSet field_boundary_panels(const sphere::SphereField& phi, double radius, std::size_t n);

// Volumetric cells of the star-shaped body: equal-width shells in the radial
// parameter, each shell cut by a ring partition into near-cubic cells. About n cells.
DiscretizedSet volume_cells(const SurfaceMap& surface, std::size_t n);
DiscretizedSet field_volume_cells(const sphere::SphereField& phi, double radius, std::size_t n);

// 2D volumetric cells of the region bounded by a star-shaped curve: equal-width
// annuli in the radial parameter cut into near-square sectors. About n cells.
DiscretizedSet disk_cells(const curve::CurveShape& shape, std::size_t n);
// 2D boundary panels: n equal-angle arcs, measure = arclength.
DiscretizedSet curve_panels(const curve::CurveShape& shape, std::size_t n);

}  // namespace chargedrop::capacity
