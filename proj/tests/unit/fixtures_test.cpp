// Fixture files and golden records. The golden breakdowns were produced by
// the library when the formats were frozen; any change to them is a
// regression unless the record is deliberately regenerated.
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "chargedrop/energy.hpp"
#include "chargedrop/io.hpp"

using namespace chargedrop;

namespace {

std::string fixture(const std::string& name) { return std::string(CHARGEDROP_FIXTURE_DIR) + "/" + name; }

void expect_matches_golden(const energy::EnergyBreakdown& b, const std::string& golden) {
  const auto expected = nlohmann::json::parse(io::load_text(fixture(golden))).at("breakdown");
  const auto actual = io::to_json(b);
  for (const auto& [key, value] : expected.items()) {
    ASSERT_TRUE(actual.contains(key)) << key;
    if (value.is_number_float()) {
      const double e = value.get<double>(), a = actual.at(key).get<double>();
      EXPECT_NEAR(a, e, 1e-10 * std::max(1.0, std::abs(e))) << key;
    } else {
      EXPECT_EQ(actual.at(key), value) << key;
    }
  }
}

}  // namespace

TEST(Fixtures, UnitBallWillmore) {
  const auto f = io::load_field(fixture("unit_ball.field"));
  EXPECT_NEAR(energy::evaluate(f.phi, f.radius, {}).willmore, 4.0 * M_PI, 1e-11);
}

TEST(Fixtures, UnitCircleWithPerimeter) {
  energy::ModelParams p;
  p.dimension = 2;
  p.alpha = 1.0;
  p.lambda = 1.0;
  EXPECT_NEAR(energy::evaluate(io::load_curve(fixture("unit_circle.curve")), p).total_F, 4.0 * M_PI, 1e-12);
}

TEST(Fixtures, PerturbedBallGolden) {
  const auto f = io::load_field(fixture("perturbed_ball.field"));
  energy::ModelParams p;
  p.charge = 0.5;
  p.penalty = energy::default_penalty(0.5);
  energy::CapacityDiscretization d;
  d.panels = 512;
  expect_matches_golden(energy::evaluate(f.phi, f.radius, p, d), "perturbed_ball.golden.json");
}

TEST(Fixtures, WavyCurveGolden) {
  energy::ModelParams p;
  p.dimension = 2;
  p.alpha = 1.0;
  p.lambda = 1.0;
  p.charge = 0.3;
  p.penalty = energy::default_penalty(0.3);
  energy::CapacityDiscretization d;
  d.cells = 500;
  expect_matches_golden(energy::evaluate(io::load_curve(fixture("wavy.curve")), p, d), "wavy.golden.json");
}

TEST(Fixtures, SphereSetCapacity) {
  const auto set = io::load_set(fixture("unit_sphere_512.set"));
  const capacity::RieszKernelSpec newton{3, 2.0, 0.0};
  const double i = capacity::equilibrium_measure(set, newton).value;
  EXPECT_NEAR(i, 1.0, 1e-3);
  EXPECT_NEAR(i, 0.99994338, 1e-8);
  // lambda-scaled set: I scales by lambda^(alpha - 3)
  EXPECT_NEAR(capacity::equilibrium_measure(capacity::dilated(set, 2.0), newton).value / i, 0.5, 1e-12);
  // eta = 1 can only raise the energy
  EXPECT_GT(capacity::equilibrium_measure(set, {3, 2.0, 1.0}).value, i);
}
