#pragma once

#include <vector>

#include "chargedrop/energy.hpp"

namespace chargedrop::stability {

struct HessianOptions {
  int max_degree = 8;        // spherical-harmonic degree (3D) or Fourier mode (2D)
  int min_degree = 1;
  bool zonal_only = false;   // 3D: only m = 0 modes (the eigenvalue depends on l alone)
  double step = 0.01;        // differencing amplitude h; h/2 is used for the consistency check
  double consistency_tolerance = 1e-3;  // relative, with an absolute floor of 1e-6
  int grid_oversample = 4;
  std::size_t curve_samples = 512;
  energy::CapacityDiscretization capacity{2048, 2000};
};

// Second derivative of the volume-projected energy along t * (mode) at the ball,
// split into the charge-independent part and the capacity part, so that the
// eigenvalue at charge Q is geometric + Q^2 * capacity.
struct ModeCurvature {
  int degree = 0;
  int order = 0;  // m in 3D; +k for cos, -k for sin in 2D
  double geometric = 0;
  double capacity = 0;
  double geometric_half_step = 0;
  double capacity_half_step = 0;
  bool consistent = true;
  double step = 0;
  std::vector<energy::EnergyBreakdown> stencil;  // at -2h, -h, 0, h, 2h

  // Stencil applied to the totals re-priced at charge q.
  double eigenvalue(const energy::ModelParams& params, double q) const;
};

struct HessianReport {
  energy::ModelParams params;
  double radius = 1.0;  // of the ball with the target volume
  double step = 0;
  std::vector<ModeCurvature> modes;
  bool consistent = true;
  // Smallest Q where some mode of degree >= 2 loses positivity; +inf when none does.
  double critical_charge = 0;
  int critical_degree = 0;

  double min_eigenvalue(double q, int min_degree) const;
};

// Five-point central second differences of the projected relaxed energy
// (3D: bending/4 + Q^2 I, dilated to the target volume; 2D: lambda P + W + Q^2 I,
// dilated to the target area).
HessianReport hessian_at_ball(const energy::ModelParams& params, const HessianOptions& options = {});

// Bisection on min over degree >= 2 of eigenvalue(Q).
double bisect_critical_charge(const HessianReport& report, int* degree_out = nullptr);

struct ThresholdRow {
  double mass = 0;
  double critical_charge = 0;
  int critical_degree = 0;
};

struct SweepResult {
  std::vector<ThresholdRow> rows;
  double slope = 0;      // least-squares slope of log Q* against log m
  double intercept = 0;
};

SweepResult threshold_sweep(const energy::ModelParams& params, const std::vector<double>& masses,
                            const HessianOptions& options);

// Least-squares fit y = a + b x; returns {a, b}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace chargedrop::stability
