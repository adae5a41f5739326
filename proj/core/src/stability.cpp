#include "chargedrop/stability.hpp"

#include <cmath>
#include <limits>

#include "chargedrop/error.hpp"
#include "chargedrop/parallel.hpp"
#include "chargedrop/sphere_grid.hpp"

namespace chargedrop::stability {

namespace {

// Weights of the five-point second difference at -2, -1, 0, 1, 2 (divide by 12 h^2).
constexpr double kStencil[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};

template <class Value>
double second_difference(const std::vector<energy::EnergyBreakdown>& b, double h, Value value) {
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kStencil[i] * value(b[static_cast<std::size_t>(i)]);
  return s / (12.0 * h * h);
}

double geometric_part(const energy::EnergyBreakdown& b, const energy::ModelParams& p) {
  return b.dimension == 3 ? 0.25 * b.bending : p.lambda * b.perimeter + b.willmore;
}

bool agree(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-6;
}

struct Mode {
  int degree, order;
};

class BallFamily {
 public:
  BallFamily(const energy::ModelParams& params, const HessianOptions& o) : params_(params), options_(o) {
    if (params.dimension == 3) grid_ = sphere::SphereGrid::create(std::max(o.max_degree, 2), o.grid_oversample);
    solve_ = o.capacity;
    solve_.always_solve = true;
  }

  energy::EnergyBreakdown evaluate(const Mode& mode, double t) const {
    if (params_.dimension == 3) {
      std::vector<double> c(sphere::coeff_count(grid_->band_limit()), 0.0);
      c[sphere::coeff_index(mode.degree, mode.order)] = t;
      const auto phi = sphere::SphereField::from_coefficients(grid_, std::move(c));
      const double r = energy::projected_radius(phi, 1.0, params_.target());
      return energy::evaluate(phi, r, params_, solve_);
    }
    const auto K = static_cast<std::size_t>(options_.max_degree);
    std::vector<double> cs(K + 1, 0.0), sn(K + 1, 0.0);
    const auto k = static_cast<std::size_t>(mode.degree);
    (mode.order >= 0 ? cs : sn)[k] = t;
    auto shape = curve::CurveShape::from_coefficients(std::move(cs), std::move(sn), 1.0, options_.curve_samples);
    shape = shape.with_radius(energy::projected_radius(shape, params_.target()));
    return energy::evaluate(shape, params_, solve_);
  }

 private:
  energy::ModelParams params_;
  HessianOptions options_;
  sphere::GridPtr grid_;
  energy::CapacityDiscretization solve_;
};

}  // namespace

double ModeCurvature::eigenvalue(const energy::ModelParams& params, double q) const {
  if (stencil.size() != 5) fail(ErrorCategory::precondition_violated, "mode curvature has no stencil");
  auto p = params;
  p.charge = q;
  return second_difference(stencil, step, [&](const energy::EnergyBreakdown& b) {
    return energy::with_charge(b, p).total_relaxed;
  });
}

double HessianReport::min_eigenvalue(double q, int min_degree) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : modes) {
    if (m.degree >= min_degree) best = std::min(best, m.eigenvalue(params, q));
  }
  return best;
}

HessianReport hessian_at_ball(const energy::ModelParams& params, const HessianOptions& options) {
  params.validate();
  if (!(options.step > 0.0 && options.step <= 0.1)) fail(ErrorCategory::invalid_argument, "differencing step must lie in (0, 0.1]");
  if (options.min_degree < 1 || options.max_degree < options.min_degree) {
    fail(ErrorCategory::invalid_argument, "degree range must satisfy 1 <= min <= max");
  }
  std::vector<Mode> modes;
  for (int l = options.min_degree; l <= options.max_degree; ++l) {
    if (params.dimension == 3) {
      if (options.zonal_only) {
        modes.push_back({l, 0});
      } else {
        for (int m = -l; m <= l; ++m) modes.push_back({l, m});
      }
    } else {
      modes.push_back({l, l});
      if (!options.zonal_only) modes.push_back({l, -l});
    }
  }

  const BallFamily family(params, options);
  const double h = options.step;
  const double offsets[8] = {-2 * h, -h, h, 2 * h, -h, -h / 2, h / 2, h};
  // Task 0 is the ball itself; then 8 per mode.
  const std::size_t tasks = 1 + 8 * modes.size();
  std::vector<energy::EnergyBreakdown> results(tasks);
  parallel_for(0, tasks, [&](std::size_t i) {
    if (i == 0) {
      results[0] = family.evaluate(modes.front(), 0.0);
      return;
    }
    const std::size_t k = (i - 1) / 8, j = (i - 1) % 8;
    results[i] = family.evaluate(modes[k], offsets[j]);
  });

  HessianReport report;
  report.params = params;
  report.step = h;
  report.radius = params.dimension == 3 ? std::cbrt(3.0 * params.target() / (4.0 * M_PI))
                                        : std::sqrt(params.target() / M_PI);
  const auto& center = results[0];
  auto geo = [&](const energy::EnergyBreakdown& b) { return geometric_part(b, params); };
  auto cap = [](const energy::EnergyBreakdown& b) { return b.capacity; };
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto* r = &results[1 + 8 * k];
    ModeCurvature mc;
    mc.degree = modes[k].degree;
    mc.order = modes[k].order;
    if (params.dimension == 2 && mc.order < 0) mc.order = -mc.degree;
    mc.step = h;
    mc.stencil = {r[0], r[1], center, r[2], r[3]};
    // h/2 stencil: offsets -h, -h/2, 0, h/2, h
    const std::vector<energy::EnergyBreakdown> half = {r[4], r[5], center, r[6], r[7]};
    mc.geometric = second_difference(mc.stencil, h, geo);
    mc.capacity = second_difference(mc.stencil, h, cap);
    mc.geometric_half_step = second_difference(half, h / 2, geo);
    mc.capacity_half_step = second_difference(half, h / 2, cap);
    mc.consistent = agree(mc.geometric, mc.geometric_half_step, options.consistency_tolerance) &&
                    agree(mc.capacity, mc.capacity_half_step, options.consistency_tolerance);
    report.consistent = report.consistent && mc.consistent;
    report.modes.push_back(std::move(mc));
  }
  report.critical_charge = bisect_critical_charge(report, &report.critical_degree);
  return report;
}

double bisect_critical_charge(const HessianReport& report, int* degree_out) {
  const auto f = [&](double q) { return report.min_eigenvalue(q, 2); };
  if (degree_out != nullptr) *degree_out = 0;
  if (!(f(0.0) > 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return std::numeric_limits<double>::infinity();
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double q = 0.5 * (lo + hi);
  if (degree_out != nullptr) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& m : report.modes) {
      if (m.degree < 2) continue;
      const double e = m.eigenvalue(report.params, hi);
      if (e < worst) {
        worst = e;
        *degree_out = m.degree;
      }
    }
  }
  return q;
}

std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorCategory::invalid_argument, "linear fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) fail(ErrorCategory::invalid_argument, "linear fit needs distinct abscissae");
  const double b = (n * sxy - sx * sy) / den;
  return {(sy - b * sx) / n, b};
}

SweepResult threshold_sweep(const energy::ModelParams& params, const std::vector<double>& masses,
                            const HessianOptions& options) {
  SweepResult out;
  std::vector<double> lx, ly;
  for (double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) fail(ErrorCategory::invalid_argument, "masses must be positive");
    auto p = params;
    p.target_volume = m;
    auto o = options;
    o.min_degree = std::max(o.min_degree, 2);
    const auto report = hessian_at_ball(p, o);
    out.rows.push_back({m, report.critical_charge, report.critical_degree});
    if (!std::isfinite(report.critical_charge) || report.critical_charge <= 0.0) {
      fail(ErrorCategory::numerical_failure, "no finite instability threshold at mass " + std::to_string(m));
    }
    lx.push_back(std::log(m));
    ly.push_back(std::log(report.critical_charge));
  }
  if (lx.size() >= 2) {
    const auto [a, b] = linear_fit(lx, ly);
    out.intercept = a;
    out.slope = b;
  }
  return out;
}

}  // namespace chargedrop::stability
