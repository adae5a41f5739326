#include <gtest/gtest.h>

#include <cmath>

#include "chargedrop/error.hpp"
#include "chargedrop/optimizer.hpp"

using namespace chargedrop;
using namespace chargedrop::optimize;

namespace {

OptimizerConfig small_config(int band_limit = 4) {
  OptimizerConfig c;
  c.band_limit = band_limit;
  c.capacity.panels = 256;
  return c;
}

}  // namespace

TEST(Optimizer, BallIsStationaryWithoutCharge) {
  const auto c = small_config();
  const Shape3D ball{sphere::SphereField(sphere::SphereGrid::create(c.band_limit, c.grid_oversample)), 1.0};
  const auto r = minimize(ball, c);
  EXPECT_EQ(r.trajectory.status, Status::converged_gradient);
  EXPECT_EQ(r.trajectory.accepted_steps, 0);
  EXPECT_NEAR(r.trajectory.final_objective, 2.0 * M_PI, 1e-10);
}

TEST(Optimizer, RandomStartReachesBall) {
  auto c = small_config(6);
  c.seed = 5;
  const auto start = random_initial_shape(c, 0.2, 4);
  EXPECT_NEAR(start.phi.c1_norm(), 0.2, 1e-9);
  const auto r = minimize(start, c);
  EXPECT_LT(r.trajectory.distance_to_ball, 1e-3);
  EXPECT_NEAR(r.trajectory.final_objective, 2.0 * M_PI, 1e-4);
  // every accepted iterate lowers the objective
  double last = INFINITY;
  for (const auto& it : r.trajectory.iterations) {
    if (!it.accepted) continue;
    EXPECT_LE(it.objective, last);
    last = it.objective;
  }
}

TEST(Optimizer, CurveReachesCircle) {
  auto c = small_config(6);
  c.params.dimension = 2;
  c.params.alpha = 1.5;
  c.params.lambda = 1.0;
  c.seed = 2;
  const auto r = minimize(random_initial_curve(c, 0.2, 4), c);
  EXPECT_LT(r.trajectory.distance_to_ball, 1e-3);
  EXPECT_NEAR(r.trajectory.final_objective, 4.0 * M_PI, 1e-4);
}

TEST(Optimizer, SeededRunsAreIdentical) {
  auto c = small_config();
  c.params.charge = 0.3;
  c.seed = 9;
  c.max_iterations = 5;
  const auto a = minimize(random_initial_shape(c, 0.1, 3), c);
  const auto b = minimize(random_initial_shape(c, 0.1, 3), c);
  ASSERT_EQ(a.trajectory.iterations.size(), b.trajectory.iterations.size());
  EXPECT_EQ(a.trajectory.final_objective, b.trajectory.final_objective);
  EXPECT_EQ(a.shape.phi.coeffs(), b.shape.phi.coeffs());
}

TEST(Optimizer, DilationKeepsVolume) {
  auto c = small_config();
  c.max_iterations = 3;
  const auto r = minimize(random_initial_shape(c, 0.2, 3), c);
  for (const auto& it : r.trajectory.iterations) EXPECT_NEAR(it.volume, 4.0 * M_PI / 3.0, 1e-9);
}

TEST(Optimizer, DistanceToBallIgnoresTranslation) {
  const auto g = sphere::SphereGrid::create(8);
  const sphere::Vec3 s(0.03, 0.0, -0.02);
  const auto shifted = sphere::SphereField::from_function(g, [&](const sphere::Vec3& x) {
    const double b = x.dot(s);
    return b + std::sqrt(b * b - s.squaredNorm() + 1.0) - 1.0;
  });
  EXPECT_LT(distance_to_ball(shifted, 1.0), 1e-6);
}

TEST(Optimizer, ConfigValidation) {
  auto c = small_config();
  c.fd_step = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.band_limit = 1;
  EXPECT_THROW(c.validate(), Error);
}
