#pragma once

#include <functional>
#include <vector>

#include "chargedrop/energy.hpp"
#include "chargedrop/set_builders.hpp"

namespace chargedrop::experiments {

// Radial profile R(t) of a surface of revolution about the z axis, with its
// first two colatitude derivatives.
using ZonalProfile = std::function<void(double t, double& R, double& dR, double& d2R)>;

struct RevolutionMeasures {
  double area = 0;
  double volume = 0;
  double mean_sq = 0;         // int H^2
  double second_form_sq = 0;  // int |A|^2
  double willmore() const { return 0.25 * mean_sq; }
};

// Adaptive Gauss-Kronrod integration along the meridian using the principal
// curvatures of the profile curve; `breaks` are extra colatitudes where the
// profile changes character (for example the edge of a bump's support).
RevolutionMeasures revolution_measures(const ZonalProfile& profile, const std::vector<double>& breaks = {});

// Unit sphere with a smooth outward bump at the north pole: R = 1 + b(t),
// b = h exp(1 - 1/(1 - (t/w)^2)) for t < w, zero elsewhere.
struct Bump {
  double height = 0;
  double half_width = 0;  // w, a colatitude
  void profile(double t, double& R, double& dR, double& d2R) const;
};
// Fixed-shape bump of scale rho: w = 0.7 rho, h = 0.3 rho.
Bump scaled_bump(double rho);

struct BumpOptions {
  double alpha = 2.0;
  double eta = 0.0;
  double charge = 0.0;
  double fine_fraction = 0.1;  // polar band width as a fraction of w
  double coarse_width = 0.08;  // band width away from the bump
  energy::CapacityDiscretization capacity{2048, 2000};
};

struct BumpRecord {
  double rho = 0;
  std::size_t panels = 0;
  double willmore_increase = 0;   // W(bumped) - W(sphere)
  double capacity_decrease = 0;   // I(sphere) - I(bumped), same partition for both
  double capacitary_gain = 0;     // Q^2 times the decrease
  double net_change = 0;          // relaxed energy change: willmore increase - capacitary gain
  double volume_change = 0;
};

// Both shapes are discretized with one graded ring partition refined at the pole.
BumpRecord compare_bump(double rho, const BumpOptions& options);

struct BumpStudy {
  std::vector<BumpRecord> records;
  double capacity_slope = 0;  // log-log slope of the capacity decrease against rho
  double willmore_slope = 0;
};
BumpStudy bump_study(const std::vector<double>& rhos, const BumpOptions& options);

}  // namespace chargedrop::experiments
