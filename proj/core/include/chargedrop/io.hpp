#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "chargedrop/analysis.hpp"
#include "chargedrop/curve_shape.hpp"
#include "chargedrop/energy.hpp"
#include "chargedrop/optimizer.hpp"
#include "chargedrop/riesz_capacity.hpp"
#include "chargedrop/smoothing.hpp"
#include "chargedrop/sphere_field.hpp"
#include "chargedrop/stability.hpp"

// Plain-text interchange formats. Numbers are written in the shortest form
// that parses back to the same double, so every format round-trips exactly.
// Parse errors carry "source:line:" prefixes.
namespace chargedrop::io {

std::string format_double(double v);
double parse_double(std::string_view token, const std::string& where);

enum class ShapeKind { field, curve, set, map, unknown };
ShapeKind detect_kind(const std::string& path);

struct FieldFile {
  sphere::SphereField phi;
  double radius = 1.0;
};
void write_field(std::ostream& out, const sphere::SphereField& phi, double radius);
FieldFile read_field(std::istream& in, const std::string& source = "<stream>");

void write_curve(std::ostream& out, const curve::CurveShape& shape);
curve::CurveShape read_curve(std::istream& in, const std::string& source = "<stream>");

void write_set(std::ostream& out, const capacity::DiscretizedSet& set);
capacity::DiscretizedSet read_set(std::istream& in, const std::string& source = "<stream>");

void write_map(std::ostream& out, const smoothing::ParametrizedMap& map);
smoothing::ParametrizedMap read_map(std::istream& in, const std::string& source = "<stream>");

FieldFile load_field(const std::string& path);
curve::CurveShape load_curve(const std::string& path);
capacity::DiscretizedSet load_set(const std::string& path);
smoothing::ParametrizedMap load_map(const std::string& path);
void save_text(const std::string& path, const std::string& content);
std::string load_text(const std::string& path);

nlohmann::json to_json(const capacity::RieszKernelSpec& spec);
nlohmann::json to_json(const capacity::ChargeDistribution& mu);
nlohmann::json to_json(const energy::EnergyBreakdown& b);
nlohmann::json to_json(const energy::ModelParams& p);
energy::ModelParams params_from_json(const nlohmann::json& j, energy::ModelParams base = {});

// Optimizer configuration file: a JSON object whose keys mirror OptimizerConfig
// (unknown keys are rejected).
nlohmann::json to_json(const optimize::OptimizerConfig& c);
optimize::OptimizerConfig config_from_json(const nlohmann::json& j);

// CSV tables. The first line names the schema and its version.
inline constexpr const char* kBreakdownSchema = "# schema chargedrop.breakdown v1";
inline constexpr const char* kTrajectorySchema = "# schema chargedrop.trajectory v1";
inline constexpr const char* kHessianSchema = "# schema chargedrop.hessian v1";
inline constexpr const char* kSweepSchema = "# schema chargedrop.sweep v1";
inline constexpr const char* kHarnessSchema = "# schema chargedrop.harness v1";
inline constexpr const char* kDecaySchema = "# schema chargedrop.decay v1";
inline constexpr const char* kBumpSchema = "# schema chargedrop.bump v1";
inline constexpr const char* kSmoothingSchema = "# schema chargedrop.smoothing v1";

std::string breakdown_csv_header();
std::string breakdown_csv_row(const energy::EnergyBreakdown& b);
void write_trajectory_csv(std::ostream& out, const optimize::TrajectoryRecord& t);
void write_hessian_csv(std::ostream& out, const stability::HessianReport& r);
void write_sweep_csv(std::ostream& out, const stability::SweepResult& s);
void write_harness_csv(std::ostream& out, const analysis::StabilitySummary& s);

}  // namespace chargedrop::io
