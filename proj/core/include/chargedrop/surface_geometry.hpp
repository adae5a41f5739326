#pragma once

#include <Eigen/Core>
#include <vector>

#include "chargedrop/sphere_field.hpp"

namespace chargedrop::sphere {

// Per-node geometry of the radial graph X(x) = r (1 + phi(x)) x.
//
// Frame: tangent_t and tangent_p are the push-forwards of the unit sphere's
// colatitude and longitude unit vectors. metric and second_form are expressed
// in that frame. Second form is A[X,Y] = -(D_X Y).nu with nu the outward
// normal, so convex surfaces have positive A and the unit sphere has H = 2.
struct SurfaceGeometry {
  GridPtr grid;
  double radius = 1.0;
  std::vector<Vec3> position;
  std::vector<Vec3> tangent_t;
  std::vector<Vec3> tangent_p;
  std::vector<Vec3> normal;
  std::vector<Eigen::Matrix2d> metric;
  std::vector<Eigen::Matrix2d> second_form;
  std::vector<double> mean_curvature;   // tr(g^-1 A)
  std::vector<double> second_form_sq;   // |A|^2 = tr((g^-1 A)^2)
  std::vector<double> area_element;     // sqrt(det g) times the node weight
};

SurfaceGeometry surface_from_field(const SphereField& phi, double radius);

double area(const SurfaceGeometry& geom);
double volume(const SurfaceGeometry& geom);

struct BendingEnergies {
  double mean_sq = 0;         // integral of H^2
  double second_form_sq = 0;  // integral of |A|^2
  double traceless_sq = 0;    // integral of |A - (H/2) g|^2 = |A|^2 - H^2/2
};
BendingEnergies bending_energies(const SurfaceGeometry& geom);

// (1/4) int H^2 - (1/4) int |A|^2 - 2 pi, zero for closed genus-0 surfaces.
double gauss_bonnet_defect(const SurfaceGeometry& geom);

// (1/4) int |A|^2 >= 2 pi - tolerance.
bool li_yau_check(const SurfaceGeometry& geom, double tolerance = 1e-9);

// Volume enclosed by r (1 + phi(x)) x, by exact cubic quadrature of the radial
// integral. Cheaper than building the geometry.
double enclosed_volume(const SphereField& phi, double radius);

// Centre of mass of the enclosed body.
Vec3 barycenter(const SphereField& phi, double radius);

// The same surface written as a radial graph about its barycenter: returns
// phi' with r (1 + phi'(u)) u + c on the surface for every direction u. Each
// node's ray is intersected with the surface by a safeguarded secant iteration.
SphereField recentered(const SphereField& phi, double radius, Vec3* center_out = nullptr);

// Throws inadmissible_shape when min(1 + phi) < kMinRadiusFactor.
void require_admissible(const SphereField& phi);

// Position and surface-measure density of the radial graph at a direction;
// used to map parameter-sphere panels onto the surface.
struct SurfacePoint {
  Vec3 position;
  double area_ratio = 1.0;  // dA / dOmega
};
SurfacePoint surface_point(const SphereField& phi, double radius, const Vec3& direction);

}  // namespace chargedrop::sphere
