#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chargedrop/curve_shape.hpp"
#include "chargedrop/energy.hpp"
#include "chargedrop/sphere_field.hpp"

namespace chargedrop::optimize {

enum class VolumeMode { dilation, penalty };

struct OptimizerConfig {
  energy::ModelParams params;
  energy::CapacityDiscretization capacity{512, 700};
  int band_limit = 6;       // spherical-harmonic degree (3D) or Fourier modes (2D) being optimized
  int grid_oversample = 4;  // 3D geometry quadrature
  std::size_t curve_samples = 256;
  double initial_step = 1.0;
  double max_coefficient_step = 0.05;  // cap on any coefficient change per trial step
  double backtracking = 0.5;
  int max_backtracks = 30;
  double armijo = 1e-4;
  double fd_step = 1e-4;
  double gradient_tolerance = 1e-6;
  double energy_tolerance = 1e-13;  // relative change of the objective
  int max_iterations = 200;
  VolumeMode volume_mode = VolumeMode::dilation;
  bool free_translations = false;  // optimize degree-1 modes too
  int lbfgs_memory = 8;
  std::uint64_t seed = 1;

  void validate() const;
};

enum class Status { converged_gradient, converged_energy, budget_exhausted, line_search_failed };
std::string status_name(Status s);

struct IterationRecord {
  int iteration = 0;
  bool accepted = false;
  double step = 0;
  double objective = 0;
  energy::EnergyBreakdown breakdown;
  double volume = 0;
  double gradient_norm = 0;  // at accepted iterates; NaN for rejected trials
  double max_abs_perturbation = 0;
};

struct TrajectoryRecord {
  std::vector<IterationRecord> iterations;
  Status status = Status::budget_exhausted;
  int accepted_steps = 0;
  double final_objective = 0;
  double distance_to_ball = 0;  // degree >= 2 coefficient norm after recentering, relative to mean radius
  std::uint64_t seed = 0;
};

struct Shape3D {
  sphere::SphereField phi;
  double radius = 1.0;
};

struct Result3D {
  Shape3D shape;
  TrajectoryRecord trajectory;
};

struct Result2D {
  curve::CurveShape shape;
  TrajectoryRecord trajectory;
};

// Descent on spherical-harmonic coefficients: limited-memory BFGS directions,
// Armijo backtracking, central finite-difference gradients evaluated in
// parallel. In dilation mode every iterate is rescaled to the target volume.
Result3D minimize(const Shape3D& initial, const OptimizerConfig& config);
// 2D counterpart on Fourier coefficients, minimizing lambda P + W + Q^2 I (+ penalty).
Result2D minimize(const curve::CurveShape& initial, const OptimizerConfig& config);

double distance_to_ball(const sphere::SphereField& phi, double radius);
double distance_to_disk(const curve::CurveShape& shape);

// Random initial shapes with the requested C^1 size (3D) or sup size (2D).
Shape3D random_initial_shape(const OptimizerConfig& config, double c1_size, int max_degree);
curve::CurveShape random_initial_curve(const OptimizerConfig& config, double size, int max_mode);

}  // namespace chargedrop::optimize
