#include <gtest/gtest.h>

#include <cmath>

#include "chargedrop/experiments.hpp"

using namespace chargedrop;
using namespace chargedrop::experiments;

TEST(RevolutionMeasures, UnitSphere) {
  const auto m = revolution_measures([](double, double& R, double& dR, double& d2R) {
    R = 1.0;
    dR = d2R = 0.0;
  });
  EXPECT_NEAR(m.area, 4.0 * M_PI, 1e-12);
  EXPECT_NEAR(m.volume, 4.0 * M_PI / 3.0, 1e-12);
  EXPECT_NEAR(m.mean_sq, 16.0 * M_PI, 1e-11);
  EXPECT_NEAR(m.second_form_sq, 8.0 * M_PI, 1e-11);
}

TEST(RevolutionMeasures, ProlateSpheroidGaussBonnet) {
  // R(t) of the spheroid x^2 + y^2 + z^2 / 1.44 = 1; genus zero, so int H^2 - int |A|^2 = 8 pi.
  const auto m = revolution_measures([](double t, double& R, double& dR, double& d2R) {
    const double c = std::cos(t), s = std::sin(t), q = s * s + c * c / 1.44;
    R = 1.0 / std::sqrt(q);
    const double dq = 2.0 * s * c * (1.0 - 1.0 / 1.44);
    const double d2q = 2.0 * (c * c - s * s) * (1.0 - 1.0 / 1.44);
    dR = -0.5 * std::pow(q, -1.5) * dq;
    d2R = 0.75 * std::pow(q, -2.5) * dq * dq - 0.5 * std::pow(q, -1.5) * d2q;
  });
  EXPECT_NEAR(m.mean_sq - m.second_form_sq, 8.0 * M_PI, 1e-9);
  EXPECT_NEAR(m.volume, 4.0 * M_PI / 3.0 * 1.2, 1e-11);
}

TEST(Bump, RaisesBendingAndLowersEnergy) {
  BumpOptions o;
  o.capacity.panels = 1024;
  const auto r = compare_bump(0.2, o);
  EXPECT_GT(r.willmore_increase, 0.0);
  EXPECT_GT(r.capacity_decrease, 0.0);
  EXPECT_GT(r.volume_change, 0.0);
  EXPECT_EQ(r.capacitary_gain, 0.0);  // Q = 0
  EXPECT_GT(r.net_change, 0.0);
}

TEST(Bump, ScaledBumpKeepsShape) {
  const auto a = scaled_bump(0.1), b = scaled_bump(0.2);
  EXPECT_NEAR(b.height / a.height, 2.0, 1e-14);
  EXPECT_NEAR(b.half_width / a.half_width, 2.0, 1e-14);
}
