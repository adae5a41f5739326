#pragma once

#include <Eigen/Core>
#include <string>

#include "chargedrop/curve_shape.hpp"
#include "chargedrop/riesz_capacity.hpp"
#include "chargedrop/sphere_field.hpp"

namespace chargedrop::energy {

struct ModelParams {
  int dimension = 3;
  double lambda = 0.0;  // perimeter weight
  double charge = 0.0;  // Q
  double alpha = 2.0;
  double eta = 0.0;
  double penalty = 0.0;  // volume-penalty weight Lambda
  double target_volume = -1.0;  // negative selects the unit ball (4 pi / 3) or unit disk (pi)

  double target() const;
  capacity::RieszKernelSpec kernel() const { return {dimension, alpha, eta}; }
  void validate() const;
};

// Penalty weight used when none is given: ten times the squared reference charge.
double default_penalty(double reference_charge);

// How the capacitary term is discretized from a shape.
struct CapacityDiscretization {
  std::size_t panels = 1024;  // 3D boundary panels (eta = 0)
  std::size_t cells = 2000;   // volumetric cells (2D always; 3D when eta > 0)
  capacity::DiagonalRule rule = capacity::DiagonalRule::lattice_corrected;
  double tolerance = 1e-10;
  // Solve the capacity problem even when Q = 0.
  bool always_solve = false;
};

struct EnergyBreakdown {
  int dimension = 3;
  double perimeter = 0;
  double willmore = 0;   // (1/4) int H^2 in 3D, int kappa^2 in 2D
  double bending = 0;    // int |A|^2
  double traceless = 0;  // int |A - (H/2) g|^2
  double capacity = 0;   // I_alpha^eta of the shape (0 when not solved)
  bool capacity_solved = false;
  double capacitary = 0;  // Q^2 I
  double volume = 0;
  double volume_penalty = 0;  // Lambda | |E| - target |
  double total_F = 0;         // lambda P + W + Q^2 I
  double total_F_eta = 0;     // W + Q^2 I
  double total_relaxed = 0;   // (1/4) int |A|^2 + Q^2 I in 3D; equals total_F in 2D
  double total_penalized = 0; // total_relaxed + volume penalty in 3D, total_F + penalty in 2D
};

struct EvaluationExtras {
  const Eigen::VectorXd* warm_start = nullptr;
  Eigen::VectorXd* solution_out = nullptr;
};

capacity::DiscretizedSet capacity_set(const sphere::SphereField& phi, double radius, const ModelParams& params,
                                      const CapacityDiscretization& disc);
capacity::DiscretizedSet capacity_set(const curve::CurveShape& shape, const ModelParams& params,
                                      const CapacityDiscretization& disc);

EnergyBreakdown evaluate(const sphere::SphereField& phi, double radius, const ModelParams& params,
                         const CapacityDiscretization& disc = {}, const EvaluationExtras& extras = {});
EnergyBreakdown evaluate(const curve::CurveShape& shape, const ModelParams& params,
                         const CapacityDiscretization& disc = {}, const EvaluationExtras& extras = {});

// Re-prices a breakdown at another charge without re-solving the capacity problem.
EnergyBreakdown with_charge(const EnergyBreakdown& b, const ModelParams& params);

struct Diagnostic {
  bool warning = false;
  std::string message;
};
// Warns outside the range where minimizers are guaranteed to be of sphere type:
// W >= 8 pi or (1/4) int |A|^2 >= 4 pi (3D only).
Diagnostic sphere_type_guard(const EnergyBreakdown& b);

// F_Q^eta - relaxed F_Q^eta - 2 pi; zero for genus-0 surfaces.
double relation_residual(const EnergyBreakdown& b);

// Radius rescaling that brings r (1 + phi) to the target volume.
double projected_radius(const sphere::SphereField& phi, double radius, double target_volume);
double projected_radius(const curve::CurveShape& shape, double target_area);

double curve_area(const curve::CurveShape& shape);

}  // namespace chargedrop::energy
