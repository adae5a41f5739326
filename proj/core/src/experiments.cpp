#include "chargedrop/experiments.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "chargedrop/error.hpp"
#include "chargedrop/stability.hpp"

namespace chargedrop::experiments {

namespace {
constexpr double kPi = std::numbers::pi;

struct Densities {
  double area, volume, mean_sq, second_form_sq;
};

Densities densities(const ZonalProfile& profile, double t) {
  double R, dR, d2R;
  profile(t, R, dR, d2R);
  const double s = std::sin(t), c = std::cos(t);
  const double speed = std::sqrt(R * R + dR * dR);
  const double k1 = (R * R + 2.0 * dR * dR - R * d2R) / (speed * speed * speed);
  const double k2 = (R * s - dR * c) / (speed * R * s);
  const double dA = 2.0 * kPi * R * s * speed;
  return {dA, 2.0 * kPi * R * R * R * s / 3.0, (k1 + k2) * (k1 + k2) * dA, (k1 * k1 + k2 * k2) * dA};
}
}  // namespace

RevolutionMeasures revolution_measures(const ZonalProfile& profile, const std::vector<double>& breaks) {
  std::vector<double> pts{0.0};
  for (double b : breaks) {
    if (b > 0.0 && b < kPi) pts.push_back(b);
  }
  pts.push_back(kPi);
  std::sort(pts.begin(), pts.end());
  RevolutionMeasures m;
  using boost::math::quadrature::gauss_kronrod;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    if (!(b > a)) continue;
    auto integrate = [&](auto pick) {
      return gauss_kronrod<double, 61>::integrate([&](double t) { return pick(densities(profile, t)); }, a, b, 15,
                                                  1e-14);
    };
    m.area += integrate([](const Densities& d) { return d.area; });
    m.volume += integrate([](const Densities& d) { return d.volume; });
    m.mean_sq += integrate([](const Densities& d) { return d.mean_sq; });
    m.second_form_sq += integrate([](const Densities& d) { return d.second_form_sq; });
  }
  return m;
}

void Bump::profile(double t, double& R, double& dR, double& d2R) const {
  R = 1.0;
  dR = d2R = 0.0;
  if (!(t < half_width)) return;
  const double u = t / half_width, g = 1.0 - u * u;
  const double b = height * std::exp(1.0 - 1.0 / g);
  const double q = -2.0 * u / (half_width * g * g);  // d/dt of -1/g
  R += b;
  dR = b * q;
  d2R = b * (q * q - 2.0 / (half_width * half_width) * (1.0 / (g * g) + 4.0 * u * u / (g * g * g)));
}

Bump scaled_bump(double rho) {
  if (!(rho > 0.0 && rho <= 1.0)) fail(ErrorCategory::invalid_argument, "bump scale must lie in (0, 1]");
  return {0.3 * rho, 0.7 * rho};
}

BumpRecord compare_bump(double rho, const BumpOptions& o) {
  const Bump bump = scaled_bump(rho);
  const ZonalProfile bumped = [bump](double t, double& R, double& dR, double& d2R) { bump.profile(t, R, dR, d2R); };
  const ZonalProfile sphere = [](double, double& R, double& dR, double& d2R) {
    R = 1.0;
    dR = d2R = 0.0;
  };
  const auto with_first = [](const ZonalProfile& p) {
    return [p](double t, double& R, double& dR) {
      double d2;
      p(t, R, dR, d2);
    };
  };

  const double fine = o.fine_fraction * bump.half_width;
  const auto edges = capacity::graded_polar_edges(1.2 * bump.half_width, fine, o.coarse_width);
  const auto partition = capacity::ring_partition_from_edges(edges);
  const auto set_b = capacity::boundary_panels(partition, capacity::zonal_surface(with_first(bumped)));
  const auto set_s = capacity::boundary_panels(partition, capacity::zonal_surface(with_first(sphere)));

  const capacity::RieszKernelSpec spec{3, o.alpha, o.eta};
  capacity::EquilibriumOptions eo;
  eo.rule = o.capacity.rule;
  eo.relative_tolerance = o.capacity.tolerance;
  const auto pb = capacity::perturbation_bound_check(set_s, set_b, rho, spec, 1.0, eo);

  const auto mb = revolution_measures(bumped, {bump.half_width});
  const auto ms = revolution_measures(sphere);
  BumpRecord r;
  r.rho = rho;
  r.panels = partition.size();
  r.willmore_increase = mb.willmore() - ms.willmore();
  r.capacity_decrease = pb.difference;
  r.capacitary_gain = o.charge * o.charge * r.capacity_decrease;
  r.net_change = r.willmore_increase - r.capacitary_gain;
  r.volume_change = mb.volume - ms.volume;
  return r;
}

BumpStudy bump_study(const std::vector<double>& rhos, const BumpOptions& options) {
  BumpStudy s;
  std::vector<double> lx, lc, lw;
  for (double rho : rhos) {
    s.records.push_back(compare_bump(rho, options));
    const auto& r = s.records.back();
    lx.push_back(std::log(rho));
    lc.push_back(std::log(std::max(r.capacity_decrease, std::numeric_limits<double>::min())));
    lw.push_back(std::log(std::max(r.willmore_increase, std::numeric_limits<double>::min())));
  }
  if (lx.size() >= 2) {
    s.capacity_slope = stability::linear_fit(lx, lc).second;
    s.willmore_slope = stability::linear_fit(lx, lw).second;
  }
  return s;
}

}  // namespace chargedrop::experiments
