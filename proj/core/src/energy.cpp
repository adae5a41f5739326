#include "chargedrop/energy.hpp"

#include <cmath>
#include <numbers>

#include "chargedrop/error.hpp"
#include "chargedrop/set_builders.hpp"
#include "chargedrop/surface_geometry.hpp"

namespace chargedrop::energy {

namespace {
constexpr double kPi = std::numbers::pi;

void finish_totals(EnergyBreakdown& b, const ModelParams& p) {
  b.capacitary = b.capacity_solved ? p.charge * p.charge * b.capacity : 0.0;
  b.volume_penalty = p.penalty * std::abs(b.volume - p.target());
  b.total_F = p.lambda * b.perimeter + b.willmore + b.capacitary;
  b.total_F_eta = b.willmore + b.capacitary;
  if (b.dimension == 3) {
    b.total_relaxed = 0.25 * b.bending + b.capacitary;
    b.total_penalized = b.total_relaxed + b.volume_penalty;
  } else {
    b.total_relaxed = b.total_F;
    b.total_penalized = b.total_F + b.volume_penalty;
  }
}

capacity::EquilibriumOptions solve_options(const CapacityDiscretization& disc, const EvaluationExtras& extras) {
  capacity::EquilibriumOptions o;
  o.rule = disc.rule;
  o.relative_tolerance = disc.tolerance;
  o.initial_guess = extras.warm_start;
  return o;
}

void solve_capacity(EnergyBreakdown& b, const capacity::DiscretizedSet& set, const ModelParams& params,
                    const CapacityDiscretization& disc, const EvaluationExtras& extras) {
  const auto mu = capacity::equilibrium_measure(set, params.kernel(), solve_options(disc, extras));
  b.capacity = mu.value;
  b.capacity_solved = true;
  if (extras.solution_out != nullptr) *extras.solution_out = mu.raw_solution;
}
}  // namespace

double ModelParams::target() const {
  if (target_volume > 0.0) return target_volume;
  return dimension == 3 ? 4.0 * kPi / 3.0 : kPi;
}

void ModelParams::validate() const {
  kernel().validate();
  auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      fail(ErrorCategory::invalid_argument, std::string(name) + " must be finite and nonnegative");
    }
  };
  check(lambda, "perimeter weight");
  check(charge, "charge");
  check(penalty, "volume penalty");
  if (eta > 1.0) fail(ErrorCategory::invalid_argument, "eta must lie in [0, 1]");
  if (!std::isfinite(target_volume)) fail(ErrorCategory::invalid_argument, "target volume must be finite");
}

double default_penalty(double reference_charge) { return 10.0 * reference_charge * reference_charge; }

capacity::DiscretizedSet capacity_set(const sphere::SphereField& phi, double radius, const ModelParams& params,
                                      const CapacityDiscretization& disc) {
  if (params.eta > 0.0) return capacity::field_volume_cells(phi, radius, disc.cells);
  return capacity::field_boundary_panels(phi, radius, disc.panels);
}

capacity::DiscretizedSet capacity_set(const curve::CurveShape& shape, const ModelParams&,
                                      const CapacityDiscretization& disc) {
  return capacity::disk_cells(shape, disc.cells);
}

EnergyBreakdown evaluate(const sphere::SphereField& phi, double radius, const ModelParams& params,
                         const CapacityDiscretization& disc, const EvaluationExtras& extras) {
  params.validate();
  if (params.dimension != 3) fail(ErrorCategory::invalid_argument, "sphere fields describe 3D shapes");
  const auto geom = sphere::surface_from_field(phi, radius);
  const auto bend = sphere::bending_energies(geom);
  EnergyBreakdown b;
  b.dimension = 3;
  b.perimeter = sphere::area(geom);
  b.willmore = 0.25 * bend.mean_sq;
  b.bending = bend.second_form_sq;
  b.traceless = bend.traceless_sq;
  b.volume = sphere::enclosed_volume(phi, radius);
  if (params.charge > 0.0 || disc.always_solve) {
    solve_capacity(b, capacity_set(phi, radius, params, disc), params, disc, extras);
  }
  finish_totals(b, params);
  return b;
}

EnergyBreakdown evaluate(const curve::CurveShape& shape, const ModelParams& params,
                         const CapacityDiscretization& disc, const EvaluationExtras& extras) {
  params.validate();
  if (params.dimension != 2) fail(ErrorCategory::invalid_argument, "curves describe 2D shapes");
  const auto m = curve::curve_measures(shape);
  EnergyBreakdown b;
  b.dimension = 2;
  b.perimeter = m.length;
  b.willmore = m.elastic_energy;
  b.bending = m.elastic_energy;
  b.traceless = 0.0;
  b.volume = m.area;
  if (params.charge > 0.0 || disc.always_solve) {
    solve_capacity(b, capacity_set(shape, params, disc), params, disc, extras);
  }
  finish_totals(b, params);
  return b;
}

EnergyBreakdown with_charge(const EnergyBreakdown& b, const ModelParams& params) {
  EnergyBreakdown out = b;
  finish_totals(out, params);
  return out;
}

Diagnostic sphere_type_guard(const EnergyBreakdown& b) {
  Diagnostic d;
  if (b.dimension != 3) return d;
  if (b.willmore >= 8.0 * kPi) {
    d.warning = true;
    d.message = "Willmore energy >= 8 pi: sphere-type minimizers are not guaranteed";
  } else if (0.25 * b.bending >= 4.0 * kPi) {
    d.warning = true;
    d.message = "(1/4) int |A|^2 >= 4 pi: sphere-type minimizers are not guaranteed";
  }
  return d;
}

double relation_residual(const EnergyBreakdown& b) {
  return b.total_F_eta - (0.25 * b.bending + b.capacitary) - 2.0 * kPi;
}

double projected_radius(const sphere::SphereField& phi, double radius, double target_volume) {
  const double v = sphere::enclosed_volume(phi, radius);
  if (!(v > 0.0)) fail(ErrorCategory::inadmissible_shape, "shape has nonpositive volume");
  return radius * std::cbrt(target_volume / v);
}

double curve_area(const curve::CurveShape& shape) {
  // rho is a trigonometric polynomial of degree K, so R^2 has degree 2K and the
  // trapezoid rule on more than 2K points integrates it exactly.
  const std::size_t n = 2 * static_cast<std::size_t>(shape.modes()) + 2;
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double R = shape.radius() * (1.0 + shape.rho(2.0 * kPi * static_cast<double>(j) / static_cast<double>(n)));
    s += R * R;
  }
  return 0.5 * s * 2.0 * kPi / static_cast<double>(n);
}

double projected_radius(const curve::CurveShape& shape, double target_area) {
  const double a = curve_area(shape);
  if (!(a > 0.0)) fail(ErrorCategory::inadmissible_shape, "curve encloses nonpositive area");
  return shape.radius() * std::sqrt(target_area / a);
}

}  // namespace chargedrop::energy
