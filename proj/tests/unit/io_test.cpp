#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "chargedrop/error.hpp"
#include "chargedrop/io.hpp"
#include "chargedrop/set_builders.hpp"

using namespace chargedrop;

TEST(Io, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 4.0 * M_PI})
    EXPECT_EQ(io::parse_double(io::format_double(v), "t"), v);
  EXPECT_THROW(io::parse_double("1.5x", "t"), Error);
  EXPECT_THROW(io::parse_double("nan", "t"), Error);
}

TEST(Io, FieldRoundTripIsExact) {
  const auto g = sphere::SphereGrid::create(6, 3);
  std::mt19937_64 rng(1);
  const auto f = sphere::random_field(g, rng, {});
  std::stringstream s;
  io::write_field(s, f, 1.25);
  const auto back = io::read_field(s);
  EXPECT_EQ(back.radius, 1.25);
  EXPECT_EQ(back.phi.band_limit(), 6);
  EXPECT_EQ(back.phi.grid()->oversample(), 3);
  EXPECT_EQ(back.phi.coeffs(), f.coeffs());
}

TEST(Io, CurveRoundTripIsExact) {
  std::mt19937_64 rng(2);
  const auto c = curve::random_curve(rng, 2, 5, 2.0, 0.1, 8, 128);
  std::stringstream s;
  io::write_curve(s, c);
  const auto back = io::read_curve(s);
  EXPECT_EQ(back.cos_coeffs(), c.cos_coeffs());
  EXPECT_EQ(back.sin_coeffs(), c.sin_coeffs());
  EXPECT_EQ(back.samples(), c.samples());
}

TEST(Io, SetRoundTripIsExact) {
  const auto set = capacity::disk_cells(curve::CurveShape(4, 64, 1.0), 50);
  std::stringstream s;
  io::write_set(s, set);
  const auto back = io::read_set(s);
  ASSERT_EQ(back.size(), set.size());
  EXPECT_EQ(back.dimension, 2);
  EXPECT_EQ(back.mode, capacity::SetMode::volumetric);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(back.elements[i].centroid, set.elements[i].centroid);
    EXPECT_EQ(back.elements[i].measure, set.elements[i].measure);
  }
}

TEST(Io, ParseErrorsCarryLineNumbers) {
  std::stringstream s("chargedrop-field 1\nband_limit 2\noversample 1\nradius oops\n");
  try {
    io::read_field(s, "bad.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::parse_error);
    EXPECT_NE(std::string(e.what()).find("bad.txt:4:"), std::string::npos) << e.what();
  }
}

TEST(Io, ConfigRejectsUnknownKeys) {
  const auto j = nlohmann::json::parse(R"({"band_limit": 4, "bandlimit": 5})");
  EXPECT_THROW(io::config_from_json(j), Error);
  const auto ok = io::config_from_json(nlohmann::json::parse(R"({"band_limit": 4, "params": {"charge": 0.5}})"));
  EXPECT_EQ(ok.band_limit, 4);
  EXPECT_DOUBLE_EQ(ok.params.penalty, 2.5);
}

TEST(Io, ConfigRoundTrip) {
  optimize::OptimizerConfig c;
  c.band_limit = 5;
  c.params.charge = 0.25;
  c.seed = 77;
  const auto back = io::config_from_json(io::to_json(c));
  EXPECT_EQ(io::to_json(back), io::to_json(c));
}

TEST(Io, CsvRowsHaveHeaderArity) {
  energy::EnergyBreakdown b;
  const auto header = io::breakdown_csv_header(), row = io::breakdown_csv_row(b);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
}
