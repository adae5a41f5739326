#include "chargedrop/curve_shape.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chargedrop/error.hpp"

namespace chargedrop::curve {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CurveShape::CurveShape(int modes, std::size_t samples, double radius)
    : cos_(static_cast<std::size_t>(std::max(modes, 0) + 1), 0.0),
      sin_(static_cast<std::size_t>(std::max(modes, 0) + 1), 0.0),
      samples_(samples),
      radius_(radius) {
  if (modes < 0) fail(ErrorCategory::invalid_argument, "mode count must be nonnegative");
  if (samples < 2 * static_cast<std::size_t>(modes) + 1) {
    fail(ErrorCategory::invalid_argument, "sample count must exceed twice the mode count");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCategory::invalid_argument, "radius must be positive");
}

CurveShape CurveShape::from_coefficients(std::vector<double> c, std::vector<double> s, double radius,
                                         std::size_t samples) {
  if (c.empty()) c.push_back(0.0);
  const std::size_t n = std::max(c.size(), s.size());
  c.resize(n, 0.0);
  s.resize(n, 0.0);
  s[0] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(c[k]) || !std::isfinite(s[k])) fail(ErrorCategory::invalid_argument, "non-finite curve coefficient");
  }
  CurveShape shape(static_cast<int>(n) - 1, samples, radius);
  shape.cos_ = std::move(c);
  shape.sin_ = std::move(s);
  return shape;
}

CurveShape CurveShape::from_samples(const std::vector<double>& values, int modes, double radius) {
  const std::size_t N = values.size();
  CurveShape shape(modes, N, radius);
  for (double v : values) {
    if (!std::isfinite(v)) fail(ErrorCategory::invalid_argument, "non-finite curve sample");
  }
  for (int k = 0; k <= modes; ++k) {
    double a = 0.0, b = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      const double t = kTwoPi * static_cast<double>((static_cast<std::size_t>(k) * j) % N) / static_cast<double>(N);
      a += values[j] * std::cos(t);
      b += values[j] * std::sin(t);
    }
    const double scale = (k == 0 ? 1.0 : 2.0) / static_cast<double>(N);
    shape.cos_[static_cast<std::size_t>(k)] = a * scale;
    shape.sin_[static_cast<std::size_t>(k)] = k == 0 ? 0.0 : b * scale;
  }
  return shape;
}

double CurveShape::sample_angle(std::size_t j) const {
  return kTwoPi * static_cast<double>(j) / static_cast<double>(samples_);
}

double CurveShape::rho(double t) const {
  double v = cos_[0];
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kt = static_cast<double>(k) * t;
    v += cos_[k] * std::cos(kt) + sin_[k] * std::sin(kt);
  }
  return v;
}

void CurveShape::rho_derivatives(double t, double& value, double& d1, double& d2) const {
  value = cos_[0];
  d1 = d2 = 0.0;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kd = static_cast<double>(k);
    const double c = std::cos(kd * t), s = std::sin(kd * t);
    value += cos_[k] * c + sin_[k] * s;
    d1 += kd * (sin_[k] * c - cos_[k] * s);
    d2 -= kd * kd * (cos_[k] * c + sin_[k] * s);
  }
}

std::vector<double> CurveShape::sample_values() const {
  std::vector<double> v(samples_);
  for (std::size_t j = 0; j < samples_; ++j) v[j] = rho(sample_angle(j));
  return v;
}

double CurveShape::min_radius_factor() const {
  double lo = INFINITY;
  for (std::size_t j = 0; j < samples_; ++j) lo = std::min(lo, 1.0 + rho(sample_angle(j)));
  return lo;
}

CurveShape CurveShape::with_radius(double radius) const {
  CurveShape s = *this;
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorCategory::invalid_argument, "radius must be positive");
  s.radius_ = radius;
  return s;
}

CurveShape CurveShape::rotated(double angle) const {
  CurveShape s = *this;
  for (std::size_t k = 1; k < cos_.size(); ++k) {
    const double kd = static_cast<double>(k) * angle;
    // a cos(k(t - d)) + b sin(k(t - d)) re-expanded in cos(kt), sin(kt).
    s.cos_[k] = cos_[k] * std::cos(kd) - sin_[k] * std::sin(kd);
    s.sin_[k] = cos_[k] * std::sin(kd) + sin_[k] * std::cos(kd);
  }
  return s;
}

double CurveShape::mode_norm(int min_mode) const {
  double s = 0.0;
  for (std::size_t k = static_cast<std::size_t>(std::max(min_mode, 1)); k < cos_.size(); ++k) {
    s += cos_[k] * cos_[k] + sin_[k] * sin_[k];
  }
  if (min_mode <= 0) s += 2.0 * cos_[0] * cos_[0];
  return std::sqrt(s);
}

void require_admissible(const CurveShape& shape) {
  const double lowest = shape.min_radius_factor();
  if (!(lowest >= kMinRadiusFactor)) {
    fail(ErrorCategory::inadmissible_shape,
         "degenerate radius: min(1 + rho) = " + std::to_string(lowest));
  }
}

double curvature(const CurveShape& shape, double t) {
  double v, d1, d2;
  shape.rho_derivatives(t, v, d1, d2);
  const double r = shape.radius();
  const double R = r * (1.0 + v), R1 = r * d1, R2 = r * d2;
  const double speed2 = R * R + R1 * R1;
  return (R * R + 2.0 * R1 * R1 - R * R2) / (speed2 * std::sqrt(speed2));
}

CurveMeasures curve_measures(const CurveShape& shape) {
  require_admissible(shape);
  const std::size_t N = shape.samples();
  const double dt = kTwoPi / static_cast<double>(N);
  const double r = shape.radius();
  CurveMeasures m;
  for (std::size_t j = 0; j < N; ++j) {
    double v, d1, d2;
    shape.rho_derivatives(shape.sample_angle(j), v, d1, d2);
    const double R = r * (1.0 + v), R1 = r * d1, R2 = r * d2;
    const double speed2 = R * R + R1 * R1;
    const double speed = std::sqrt(speed2);
    const double kappa = (R * R + 2.0 * R1 * R1 - R * R2) / (speed2 * speed);
    m.length += speed;
    m.area += 0.5 * R * R;
    m.elastic_energy += kappa * kappa * speed;
  }
  m.length *= dt;
  m.area *= dt;
  m.elastic_energy *= dt;
  return m;
}

Vec2 barycenter(const CurveShape& shape) {
  const std::size_t n = shape.samples();
  const double dt = kTwoPi / static_cast<double>(n);
  double area = 0.0;
  Vec2 m = Vec2::Zero();
  for (std::size_t j = 0; j < n; ++j) {
    const double t = shape.sample_angle(j);
    const double R = shape.radius() * (1.0 + shape.rho(t));
    area += 0.5 * R * R * dt;
    m += (R * R * R / 3.0) * dt * Vec2(std::cos(t), std::sin(t));
  }
  return m / area;
}

CurveShape recentered(const CurveShape& shape) {
  const Vec2 c = barycenter(shape);
  if (c.norm() == 0.0) return shape;
  const std::size_t n = shape.samples();
  const double r = shape.radius();
  double peak = 0.0;
  for (double v : shape.sample_values()) peak = std::max(peak, std::abs(v));
  std::vector<double> values(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = shape.sample_angle(j);
    const Vec2 u(std::cos(a), std::sin(a));
    auto g = [&](double t) {
      const Vec2 p = c + t * u;
      return p.norm() - r * (1.0 + shape.rho(std::atan2(p.y(), p.x())));
    };
    double lo = 0.0, hi = r * (1.0 + peak) + c.norm();
    double glo = g(lo), ghi = g(hi), t = hi;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      t = lo - glo * (hi - lo) / (ghi - glo);
      if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
      const double gt = g(t);
      if (gt == 0.0) break;
      if ((gt < 0.0) == (glo < 0.0)) {
        lo = t;
        glo = gt;
        ghi *= 0.5;
      } else {
        hi = t;
        ghi = gt;
        glo *= 0.5;
      }
    }
    values[j] = t / r - 1.0;
  }
  return CurveShape::from_samples(values, shape.modes(), r);
}

CurveShape random_curve(std::mt19937_64& rng, int min_mode, int max_mode, double decay, double amplitude,
                        int modes, std::size_t samples) {
  min_mode = std::max(min_mode, 1);
  max_mode = std::min(max_mode, modes);
  if (max_mode < min_mode) fail(ErrorCategory::invalid_argument, "empty mode range for random curve");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(modes) + 1, 0.0), s(c.size(), 0.0);
  for (int k = min_mode; k <= max_mode; ++k) {
    const double scale = std::pow(1.0 + k, -decay);
    c[static_cast<std::size_t>(k)] = scale * normal(rng);
    s[static_cast<std::size_t>(k)] = scale * normal(rng);
  }
  auto shape = CurveShape::from_coefficients(c, s, 1.0, samples);
  double peak = 0.0;
  for (double v : shape.sample_values()) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (auto& x : c) x *= amplitude / peak;
    for (auto& x : s) x *= amplitude / peak;
  }
  return CurveShape::from_coefficients(std::move(c), std::move(s), 1.0, samples);
}

}  // namespace chargedrop::curve
