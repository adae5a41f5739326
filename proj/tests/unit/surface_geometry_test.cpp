#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chargedrop/error.hpp"
#include "chargedrop/surface_geometry.hpp"
#include "mesh_oracle.hpp"

using namespace chargedrop;
using namespace chargedrop::sphere;

namespace {

SphereField sample_field(const GridPtr& g) {
  return SphereField::from_function(
      g, [](const Vec3& x) { return 0.1 * x.z() * x.z() + 0.05 * x.x() * x.y() + 0.03 * x.x(); });
}

}  // namespace

TEST(SurfaceGeometry, UnitSphereIdentities) {
  const auto g = SphereGrid::create(32);
  const auto geo = surface_from_field(SphereField(g), 1.0);
  const auto b = bending_energies(geo);
  EXPECT_NEAR(area(geo), 4.0 * M_PI, 1e-11);
  EXPECT_NEAR(volume(geo), 4.0 * M_PI / 3.0, 1e-11);
  EXPECT_NEAR(0.25 * b.mean_sq, 4.0 * M_PI, 1e-11);
  EXPECT_NEAR(b.second_form_sq, 8.0 * M_PI, 1e-11);
  EXPECT_NEAR(b.traceless_sq, 0.0, 1e-11);
}

TEST(SurfaceGeometry, ScalingLaws) {
  // Area ~ r^2, volume ~ r^3, bending energies scale-invariant.
  const auto g = SphereGrid::create(12);
  const auto f = sample_field(g);
  const auto a = surface_from_field(f, 1.0), b = surface_from_field(f, 2.5);
  EXPECT_NEAR(area(b) / area(a), 6.25, 1e-12);
  EXPECT_NEAR(volume(b) / volume(a), 15.625, 1e-12);
  EXPECT_NEAR(bending_energies(b).mean_sq, bending_energies(a).mean_sq, 1e-10);
}

TEST(SurfaceGeometry, MatchesTriangulatedMeshOracle) {
  // Live oracle at icosphere levels 5 and 6, plus frozen level 6/7 values.
  const auto g = SphereGrid::create(16);
  const auto f = sample_field(g);
  const auto geo = surface_from_field(f, 1.0);
  const auto coarse = oracle::mesh_measures([&](const Vec3& x) { return 1.0 + f.evaluate(x); }, 5);
  const auto fine = oracle::mesh_measures([&](const Vec3& x) { return 1.0 + f.evaluate(x); }, 6);
  EXPECT_NEAR(area(geo), oracle::richardson(coarse.area, fine.area), 1e-6);
  EXPECT_NEAR(volume(geo), oracle::richardson(coarse.volume, fine.volume), 1e-6);
  EXPECT_NEAR(bending_energies(geo).mean_sq, oracle::richardson(coarse.mean_sq, fine.mean_sq), 1e-4);
  EXPECT_NEAR(area(geo), 13.4785841791, 5e-8);
  EXPECT_NEAR(volume(geo), 4.6393699748, 5e-8);
  EXPECT_NEAR(bending_energies(geo).mean_sq, 50.5622065355, 2e-6);
}

TEST(SurfaceGeometry, GaussBonnetOnRandomFields) {
  const auto g = SphereGrid::create(16);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    RandomFieldOptions o;
    o.max_degree = 16;
    o.target = 0.3;
    const auto f = random_field(g, rng, o);
    const auto geo = surface_from_field(f, 1.0);
    EXPECT_LT(std::abs(gauss_bonnet_defect(geo)), 1e-8) << t;
    EXPECT_TRUE(li_yau_check(geo)) << t;
  }
}

TEST(SurfaceGeometry, InvariantUnderRotation) {
  const auto g = SphereGrid::create(16);
  std::mt19937_64 rng(4);
  RandomFieldOptions o;
  o.max_degree = 6;
  o.target = 0.2;
  const auto f = random_field(g, rng, o);
  const auto r = rotated(f, random_rotation(rng));
  const auto a = surface_from_field(f, 1.0), b = surface_from_field(r, 1.0);
  EXPECT_NEAR(area(a), area(b), 1e-10);
  EXPECT_NEAR(volume(a), volume(b), 1e-10);
  EXPECT_NEAR(bending_energies(a).mean_sq, bending_energies(b).mean_sq, 1e-8);
}

TEST(SurfaceGeometry, EnclosedVolumeAgreesWithSurfaceIntegral) {
  const auto g = SphereGrid::create(12);
  const auto f = sample_field(g);
  EXPECT_NEAR(enclosed_volume(f, 1.3), volume(surface_from_field(f, 1.3)), 1e-12);
}

TEST(SurfaceGeometry, RecenteringRemovesTranslation) {
  // A unit sphere shifted by c has radial function close to 1 + c.x to first order.
  const auto g = SphereGrid::create(16);
  const Vec3 c(0.05, -0.02, 0.03);
  const auto shifted = SphereField::from_function(g, [&](const Vec3& x) {
    const double b = x.dot(c);
    return b + std::sqrt(b * b - c.squaredNorm() + 1.0) - 1.0;
  });
  EXPECT_NEAR((barycenter(shifted, 1.0) - c).norm(), 0.0, 1e-9);
  Vec3 found;
  const auto back = recentered(shifted, 1.0, &found);
  EXPECT_NEAR((found - c).norm(), 0.0, 1e-9);
  EXPECT_LT(back.sup_norm(), 1e-8);
}

TEST(SurfaceGeometry, RejectsCollapsedRadius) {
  const auto g = SphereGrid::create(8);
  const auto f = SphereField::from_function(g, [](const Vec3& x) { return -0.99 * x.z() * x.z(); });
  EXPECT_THROW(require_admissible(f), Error);
}
