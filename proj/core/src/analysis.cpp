#include "chargedrop/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chargedrop/error.hpp"
#include "chargedrop/parallel.hpp"

namespace chargedrop::analysis {

namespace {

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

// delta = 1 is accepted: the construction only needs beta < delta.
void check_ranges(double theta, double gamma, double delta) {
  if (!in_open_unit(theta) || !in_open_unit(gamma) || !(delta > 0.0 && delta <= 1.0)) {
    fail(ErrorCategory::invalid_argument, "theta and gamma must lie in (0, 1) and delta in (0, 1]");
  }
}

double sample_radius(double r0, double theta, int k) { return r0 * std::pow(theta, k); }

double relative_excess(double lhs, double rhs) {
  return (lhs - rhs) / std::max(std::abs(rhs), std::numeric_limits<double>::min());
}

// Comparisons of quantities that went through pow/exp allow this much roundoff.
constexpr double kRoundoff = 1e-12;

struct Measured {
  double willmore, perimeter, capacity;
};

void summarize(StabilitySummary& s, const HarnessOptions& o) {
  bool first = true;
  for (auto& r : s.rows) {
    if (r.willmore_excess < -o.tolerance || r.perimeter_excess < -o.tolerance || r.capacity_deficit < -o.tolerance) {
      s.all_nonnegative = false;
    }
    r.included = r.perimeter_excess > o.exclusion;
    if (!r.included) continue;
    r.perimeter_over_willmore = r.perimeter_excess / r.willmore_excess;
    r.capacity_over_perimeter = r.capacity_deficit / r.perimeter_excess;
    if (first) {
      s.max_perimeter_over_willmore = s.min_perimeter_over_willmore = r.perimeter_over_willmore;
      s.max_capacity_over_perimeter = s.min_capacity_over_perimeter = r.capacity_over_perimeter;
      first = false;
    } else {
      s.max_perimeter_over_willmore = std::max(s.max_perimeter_over_willmore, r.perimeter_over_willmore);
      s.min_perimeter_over_willmore = std::min(s.min_perimeter_over_willmore, r.perimeter_over_willmore);
      s.max_capacity_over_perimeter = std::max(s.max_capacity_over_perimeter, r.capacity_over_perimeter);
      s.min_capacity_over_perimeter = std::min(s.min_capacity_over_perimeter, r.capacity_over_perimeter);
    }
  }
}

template <class Measure>
StabilitySummary run_harness(const std::string& family, const std::vector<double>& parameters, std::size_t count,
                             const Measured& ball, Measure measure, const HarnessOptions& options) {
  if (parameters.size() != count) fail(ErrorCategory::invalid_argument, "one parameter per shape is required");
  std::vector<Measured> m(count);
  parallel_for(0, count, [&](std::size_t i) { m[i] = measure(i); });
  StabilitySummary s;
  s.family = family;
  for (std::size_t i = 0; i < count; ++i) {
    StabilityRow r;
    r.family = family;
    r.parameter = parameters[i];
    r.willmore_excess = m[i].willmore - ball.willmore;
    r.perimeter_excess = m[i].perimeter - ball.perimeter;
    r.capacity_deficit = ball.capacity - m[i].capacity;
    if (r.perimeter_excess < -options.tolerance) {
      fail(ErrorCategory::numerical_failure,
           "perimeter below the ball's at equal volume (" + family + ", parameter " + std::to_string(r.parameter) +
               "): isoperimetric inequality violated, geometry is inconsistent");
    }
    s.rows.push_back(r);
  }
  summarize(s, options);
  return s;
}

energy::ModelParams harness_params(int dimension, double alpha) {
  energy::ModelParams p;
  p.dimension = dimension;
  p.alpha = alpha;
  return p;
}

}  // namespace

void DecayHypothesis::validate() const {
  check_ranges(theta, gamma, delta);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) fail(ErrorCategory::invalid_argument, "lambda must be positive");
  if (!(r0 > 0.0 && r0 <= 1.0)) fail(ErrorCategory::invalid_argument, "r0 must lie in (0, 1]");
  if (!psi) fail(ErrorCategory::invalid_argument, "psi is not set");
}

DecayConstants decay_exponent(double theta, double gamma, double delta) {
  check_ranges(theta, gamma, delta);
  DecayConstants d;
  d.beta = 0.5 * std::min(delta, std::log(gamma) / std::log(theta));
  const double tb = std::pow(theta, d.beta);
  d.C = 1.0 / (tb - gamma);
  while (gamma + 1.0 / d.C > tb) d.C = std::nextafter(d.C, std::numeric_limits<double>::infinity());
  return d;
}

DecayCheck verify_decay(const DecayHypothesis& hyp, double beta, double C, int samples) {
  hyp.validate();
  if (samples < 1) fail(ErrorCategory::invalid_argument, "at least one sample is required");
  DecayCheck out;
  const double psi0 = hyp.psi(hyp.r0);
  const double scale = psi0 + hyp.lambda * std::pow(hyp.r0, beta);
  for (int k = 0; k <= samples; ++k) {
    const double r = sample_radius(hyp.r0, hyp.theta, k);
    const double value = hyp.psi(r);
    if (k < samples) {
      const double next = hyp.psi(sample_radius(hyp.r0, hyp.theta, k + 1));
      const double v = relative_excess(next, hyp.gamma * value + hyp.lambda * std::pow(r, hyp.delta));
      out.max_hypothesis_violation = std::max(out.max_hypothesis_violation, v);
      if (v > kRoundoff) out.hypothesis_holds = false;
    }
    const double bound = C * std::pow(r / hyp.r0, beta) * scale;
    const double v = relative_excess(value, bound);
    out.max_violation = std::max(out.max_violation, v);
    if (v > kRoundoff) out.conclusion_holds = false;
  }
  return out;
}

DecayHypothesis saturated_hypothesis(double theta, double gamma, double delta, double lambda, double r0, double psi0,
                                     int steps, std::mt19937_64* rng, double slack_min) {
  auto values = std::make_shared<std::vector<double>>();
  values->push_back(psi0);
  std::uniform_real_distribution<double> slack(slack_min, 1.0);
  for (int k = 0; k < steps; ++k) {
    const double s = (rng != nullptr && slack_min < 1.0) ? slack(*rng) : 1.0;
    values->push_back(s * (gamma * values->back() + lambda * std::pow(sample_radius(r0, theta, k), delta)));
  }
  DecayHypothesis h{theta, gamma, delta, lambda, r0, nullptr};
  h.psi = [values, theta, r0](double r) {
    const double k = std::round(std::log(r / r0) / std::log(theta));
    const auto i = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(values->size() - 1)));
    return (*values)[i];
  };
  return h;
}

DecayHypothesis random_hypothesis(std::mt19937_64& rng, int steps) {
  std::uniform_real_distribution<double> unit(0.02, 0.98), logu(-3.0, 1.0);
  const double theta = unit(rng), gamma = unit(rng), delta = unit(rng);
  const double lambda = std::pow(10.0, logu(rng));
  const double r0 = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  const double psi0 = std::pow(10.0, logu(rng));
  return saturated_hypothesis(theta, gamma, delta, lambda, r0, psi0, steps, &rng, 0.5);
}

double StabilitySummary::spread() const {
  auto rel = [](double hi, double lo) { return lo > 0.0 ? hi / lo - 1.0 : std::numeric_limits<double>::infinity(); };
  return std::max(rel(max_perimeter_over_willmore, min_perimeter_over_willmore),
                  rel(max_capacity_over_perimeter, min_capacity_over_perimeter));
}

StabilitySummary stability_ratio_harness(const std::string& family, const std::vector<double>& parameters,
                                         const std::vector<sphere::SphereField>& shapes, double alpha,
                                         const HarnessOptions& options) {
  if (shapes.empty()) fail(ErrorCategory::invalid_argument, "no shapes given");
  const auto params = harness_params(3, alpha);
  auto disc = options.capacity;
  disc.always_solve = true;
  auto measure_field = [&](const sphere::SphereField& phi) {
    const double r = energy::projected_radius(phi, 1.0, params.target());
    const auto b = energy::evaluate(phi, r, params, disc);
    return Measured{b.willmore, b.perimeter, b.capacity};
  };
  const Measured ball = measure_field(sphere::SphereField(shapes.front().grid()));
  return run_harness(family, parameters, shapes.size(), ball, [&](std::size_t i) { return measure_field(shapes[i]); },
                     options);
}

StabilitySummary stability_ratio_harness(const std::string& family, const std::vector<double>& parameters,
                                         const std::vector<curve::CurveShape>& shapes, double alpha,
                                         const HarnessOptions& options) {
  if (shapes.empty()) fail(ErrorCategory::invalid_argument, "no shapes given");
  const auto params = harness_params(2, alpha);
  auto disc = options.capacity;
  disc.always_solve = true;
  auto measure_curve = [&](const curve::CurveShape& c) {
    const auto s = c.with_radius(energy::projected_radius(c, params.target()));
    const auto b = energy::evaluate(s, params, disc);
    return Measured{b.willmore, b.perimeter, b.capacity};
  };
  const auto& ref = shapes.front();
  const Measured ball = measure_curve(curve::CurveShape(ref.modes(), ref.samples(), 1.0));
  return run_harness(family, parameters, shapes.size(), ball, [&](std::size_t i) { return measure_curve(shapes[i]); },
                     options);
}

std::vector<sphere::SphereField> harmonic_family(int L, int l, int m, const std::vector<double>& amplitudes) {
  if (l < 0 || l > L || m < -l || m > l) fail(ErrorCategory::invalid_argument, "mode outside the band limit");
  auto grid = sphere::SphereGrid::create(L);
  std::vector<sphere::SphereField> out;
  for (double t : amplitudes) {
    std::vector<double> c(sphere::coeff_count(L), 0.0);
    c[sphere::coeff_index(l, m)] = t;
    out.push_back(sphere::SphereField::from_coefficients(grid, std::move(c)));
  }
  return out;
}

std::vector<curve::CurveShape> cosine_family(int k, const std::vector<double>& amplitudes, int modes,
                                             std::size_t samples) {
  if (k < 0 || k > modes) fail(ErrorCategory::invalid_argument, "mode outside the band limit");
  std::vector<curve::CurveShape> out;
  for (double t : amplitudes) {
    std::vector<double> c(static_cast<std::size_t>(modes) + 1, 0.0), s(c.size(), 0.0);
    c[static_cast<std::size_t>(k)] = t;
    out.push_back(curve::CurveShape::from_coefficients(std::move(c), std::move(s), 1.0, samples));
  }
  return out;
}

}  // namespace chargedrop::analysis
