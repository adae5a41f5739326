#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chargedrop/curve_shape.hpp"
#include "chargedrop/energy.hpp"
#include "chargedrop/sphere_field.hpp"

namespace chargedrop::analysis {

// psi(theta r) <= gamma psi(r) + lambda r^delta on (0, r0].
struct DecayHypothesis {
  double theta = 0.5;
  double gamma = 0.5;
  double delta = 1.0;
  double lambda = 1.0;
  double r0 = 1.0;
  std::function<double(double)> psi;

  void validate() const;  // parameter ranges only
};

struct DecayConstants {
  double beta = 0;
  double C = 0;
};

// beta = min(delta, ln gamma / ln theta) / 2 and the smallest C (rounded up in
// floating point) with gamma + 1/C <= theta^beta, so that the induction step
// psi(theta^k r0) <= C theta^{k beta} (psi(r0) + lambda r0^beta) closes.
DecayConstants decay_exponent(double theta, double gamma, double delta);

struct DecayCheck {
  bool hypothesis_holds = true;  // at the sampled radii
  bool conclusion_holds = true;
  double max_hypothesis_violation = 0;  // max of lhs - rhs, relative to rhs
  double max_violation = 0;             // same for the conclusion
};

// Samples r_k = theta^k r0, k = 0..samples.
DecayCheck verify_decay(const DecayHypothesis& hyp, double beta, double C, int samples);

// Saturates the hypothesis with equality along r_k, scaled by per-step factors
// in [slack_min, 1]; psi(r) returns the value at the nearest sampled radius.
DecayHypothesis saturated_hypothesis(double theta, double gamma, double delta, double lambda, double r0,
                                     double psi0, int steps, std::mt19937_64* rng = nullptr, double slack_min = 1.0);

// A draw of parameters with a hypothesis-satisfying synthetic psi.
DecayHypothesis random_hypothesis(std::mt19937_64& rng, int steps);

struct StabilityRow {
  std::string family;
  double parameter = 0;
  double willmore_excess = 0;   // W(E) - W(B)
  double perimeter_excess = 0;  // P(E) - P(B)
  double capacity_deficit = 0;  // I(B) - I(E)
  bool included = false;        // false for shapes indistinguishable from the ball
  double perimeter_over_willmore = 0;
  double capacity_over_perimeter = 0;
};

struct StabilitySummary {
  std::string family;
  std::vector<StabilityRow> rows;
  bool all_nonnegative = true;
  double max_perimeter_over_willmore = 0, min_perimeter_over_willmore = 0;
  double max_capacity_over_perimeter = 0, min_capacity_over_perimeter = 0;
  double spread() const;  // largest max/min - 1 over both ratios
};

struct HarnessOptions {
  energy::CapacityDiscretization capacity{2048, 2000};
  double tolerance = 1e-10;  // excesses above -tolerance count as nonnegative
  double exclusion = 1e-9;   // perimeter excess below this marks the ball itself
};

// Shapes are dilated to the volume (area) of the unit ball (disk) first. Every
// shape is compared with the ball discretized the same way. Throws
// numerical_failure when P(E) < P(B) beyond tolerance.
StabilitySummary stability_ratio_harness(const std::string& family, const std::vector<double>& parameters,
                                         const std::vector<sphere::SphereField>& shapes, double alpha,
                                         const HarnessOptions& options = {});
StabilitySummary stability_ratio_harness(const std::string& family, const std::vector<double>& parameters,
                                         const std::vector<curve::CurveShape>& shapes, double alpha,
                                         const HarnessOptions& options = {});

// phi = t Y_l^m on a grid of band limit L.
std::vector<sphere::SphereField> harmonic_family(int L, int l, int m, const std::vector<double>& amplitudes);
// rho = t cos(k theta).
std::vector<curve::CurveShape> cosine_family(int k, const std::vector<double>& amplitudes, int modes = 16,
                                             std::size_t samples = 512);

}  // namespace chargedrop::analysis
