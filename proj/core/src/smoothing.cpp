#include "chargedrop/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "chargedrop/error.hpp"
#include "chargedrop/parallel.hpp"
#include "chargedrop/sphere_field.hpp"

namespace chargedrop::smoothing {

namespace {

constexpr double kPi = std::numbers::pi;

// Evaluates several expansions of the same band limit at one direction,
// sharing the Legendre column and the longitude factors.
void evaluate_expansions(int L, const std::vector<const std::vector<double>*>& sets, const Vec3& dir,
                         double* out) {
  thread_local sphere::LegendreColumn col;
  thread_local std::vector<double> cm, sm;
  const double n = dir.norm();
  const double t = std::acos(std::clamp(dir.z() / n, -1.0, 1.0));
  const double p = std::atan2(dir.y(), dir.x());
  sphere::legendre_column(L, t, col, false);
  cm.assign(static_cast<std::size_t>(L) + 1, 1.0);
  sm.assign(static_cast<std::size_t>(L) + 1, 0.0);
  const double c1 = std::cos(p), s1 = std::sin(p);
  for (int m = 1; m <= L; ++m) {
    const auto k = static_cast<std::size_t>(m);
    cm[k] = cm[k - 1] * c1 - sm[k - 1] * s1;
    sm[k] = sm[k - 1] * c1 + cm[k - 1] * s1;
  }
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& c = *sets[s];
    double acc = 0.0;
    for (int l = 0; l <= L; ++l) {
      acc += c[sphere::coeff_index(l, 0)] * col.p[sphere::tri_index(l, 0)];
      for (int m = 1; m <= l; ++m) {
        const auto k = static_cast<std::size_t>(m);
        const double pl = std::numbers::sqrt2 * col.p[sphere::tri_index(l, m)];
        acc += pl * (c[sphere::coeff_index(l, m)] * cm[k] + c[sphere::coeff_index(l, -m)] * sm[k]);
      }
    }
    out[s] = acc;
  }
}

double bump(double u2) { return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0; }

// Product rule on the unit ball: Gauss-Legendre in radius and in cos(polar
// angle), uniform in azimuth. Weights include the bump and are normalized to
// unit sum, so constants are reproduced exactly.
struct BallRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
};

BallRule ball_rule(int n) {
  if (n < 2) fail(ErrorCategory::invalid_argument, "mollifier rule needs at least 2 points per dimension");
  std::vector<double> xr, wr, xc, wc;
  sphere::gauss_legendre(static_cast<std::size_t>(n), xr, wr);
  sphere::gauss_legendre(static_cast<std::size_t>(n), xc, wc);
  BallRule rule;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (xr[static_cast<std::size_t>(i)] + 1.0);
    const double wu = 0.5 * wr[static_cast<std::size_t>(i)] * u * u * bump(u * u);
    for (int j = 0; j < n; ++j) {
      const double c = xc[static_cast<std::size_t>(j)];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int k = 0; k < n; ++k) {
        const double a = 2.0 * kPi * (k + 0.5) / n;
        const double w = wu * wc[static_cast<std::size_t>(j)] * (2.0 * kPi / n);
        rule.points.emplace_back(u * s * std::cos(a), u * s * std::sin(a), u * c);
        rule.weights.push_back(w);
        total += w;
      }
    }
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

Vec3 convolve(const ParametrizedMap& psi, const BallRule& rule, double eps, const Vec3& x) {
  Vec3 acc = Vec3::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Vec3 y = x - eps * rule.points[q];
    acc += rule.weights[q] * psi.evaluate(y / y.norm());
  }
  return acc;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.25)) fail(ErrorCategory::invalid_argument, "mollification radius must lie in (0, 1/4]");
}

std::vector<Vec3> frame_derivative(const sphere::SphericalDerivatives (&d)[3], bool theta, std::size_t n) {
  std::vector<Vec3> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int c = 0; c < 3; ++c) out[k][c] = theta ? d[c].d_t[k] : d[c].d_p[k];
  }
  return out;
}

}  // namespace

ParametrizedMap ParametrizedMap::from_function(GridPtr grid, MapFunction f) {
  ParametrizedMap m;
  m.grid_ = std::move(grid);
  for (auto& v : m.values_) v.resize(m.grid_->size());
  for (std::size_t k = 0; k < m.grid_->size(); ++k) {
    const Vec3 y = f(m.grid_->node(k));
    for (int c = 0; c < 3; ++c) m.values_[static_cast<std::size_t>(c)][k] = y[c];
  }
  m.exact_ = std::move(f);
  m.derive();
  return m;
}

ParametrizedMap ParametrizedMap::from_values(GridPtr grid, std::array<std::vector<double>, 3> values) {
  ParametrizedMap m;
  m.grid_ = std::move(grid);
  for (const auto& v : values) {
    if (v.size() != m.grid_->size()) fail(ErrorCategory::invalid_argument, "map values do not match the grid");
  }
  m.values_ = std::move(values);
  m.derive();
  return m;
}

void ParametrizedMap::derive() {
  sphere::SphericalDerivatives d[3];
  for (std::size_t c = 0; c < 3; ++c) {
    coeffs_[c] = sphere::sh_analyze(*grid_, values_[c]);
    d[c] = sphere::sh_derivatives(*grid_, coeffs_[c]);
  }
  d1_ = frame_derivative(d, true, grid_->size());
  d2_ = frame_derivative(d, false, grid_->size());
}

Vec3 ParametrizedMap::value(std::size_t node) const {
  return {values_[0][node], values_[1][node], values_[2][node]};
}

double ParametrizedMap::gradient_norm(std::size_t node) const {
  return std::sqrt(d1_[node].squaredNorm() + d2_[node].squaredNorm());
}

double ParametrizedMap::conformal_factor(std::size_t node) const {
  return gradient_norm(node) / std::numbers::sqrt2;
}

double ParametrizedMap::conformal_defect() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < size(); ++k) worst = std::max(worst, std::abs(conformal_factor(k) - 1.0));
  return worst;
}

Vec3 ParametrizedMap::evaluate(const Vec3& direction) const {
  if (exact_) return exact_(direction);
  double out[3];
  evaluate_expansions(grid_->band_limit(), {&coeffs_[0], &coeffs_[1], &coeffs_[2]}, direction, out);
  return {out[0], out[1], out[2]};
}

Bounds wedge_and_grad_bounds(const ParametrizedMap& psi) {
  Bounds b;
  b.min_wedge = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < psi.size(); ++k) {
    b.min_wedge = std::min(b.min_wedge, psi.wedge_norm(k));
    b.max_gradient = std::max(b.max_gradient, psi.gradient_norm(k));
  }
  return b;
}

MollifyResult mollify(const ParametrizedMap& psi, double eps, const MollifyOptions& options) {
  check_eps(eps);
  const double defect = psi.conformal_defect();
  if (defect > kMaxConformalDefect + 1e-12) {
    fail(ErrorCategory::precondition_violated,
         "input violates the conformal-factor bound: max |h - 1| = " + std::to_string(defect) + " > 1/4");
  }
  const auto& grid = *psi.grid();
  const BallRule rule = ball_rule(options.points);
  std::array<std::vector<double>, 3> out;
  for (auto& v : out) v.resize(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t k) {
    const Vec3 y = convolve(psi, rule, eps, grid.node(k));
    for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)][k] = y[c];
  });

  double diff = 0.0;
  if (options.check_points > 0 && options.check_stride > 0) {
    const BallRule fine = ball_rule(options.check_points);
    std::vector<std::size_t> nodes;
    for (std::size_t k = 0; k < grid.size(); k += options.check_stride) nodes.push_back(k);
    std::vector<double> local(nodes.size(), 0.0);
    parallel_for(0, nodes.size(), [&](std::size_t i) {
      const std::size_t k = nodes[i];
      const Vec3 y = convolve(psi, fine, eps, grid.node(k));
      const Vec3 coarse(out[0][k], out[1][k], out[2][k]);
      local[i] = (y - coarse).norm();
    });
    for (double v : local) diff = std::max(diff, v);
  }
  MollifyResult r{ParametrizedMap::from_values(psi.grid(), std::move(out)), diff, diff <= options.check_tolerance};
  return r;
}

Vec3 mollified_value(const ParametrizedMap& psi, double eps, const Vec3& direction, int points) {
  check_eps(eps);
  return convolve(psi, ball_rule(points), eps, direction.normalized());
}

std::vector<double> mollify_scalar(const sphere::SphereGrid& grid, const std::function<double(const Vec3&)>& f,
                                   double eps, int points) {
  check_eps(eps);
  const BallRule rule = ball_rule(points);
  std::vector<double> out(grid.size());
  parallel_for(0, grid.size(), [&](std::size_t k) {
    const Vec3 x = grid.node(k);
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Vec3 y = x - eps * rule.points[q];
      acc += rule.weights[q] * f(y / y.norm());
    }
    out[k] = acc;
  });
  return out;
}

std::vector<double> damping_factors(const GridPtr& grid, double eps, int points) {
  const int L = grid->band_limit();
  std::vector<double> factors;
  for (int l = 0; l <= L; ++l) {
    std::vector<double> c(sphere::coeff_count(L), 0.0);
    c[sphere::coeff_index(l, 0)] = 1.0;
    const auto f = [&](const Vec3& x) {
      double v;
      evaluate_expansions(L, {&c}, x, &v);
      return v;
    };
    const auto smoothed = sphere::sh_analyze(*grid, mollify_scalar(*grid, f, eps, points));
    factors.push_back(smoothed[sphere::coeff_index(l, 0)]);
  }
  return factors;
}

double sobolev_distance(const ParametrizedMap& a, const ParametrizedMap& b) {
  if (a.grid() != b.grid()) fail(ErrorCategory::invalid_argument, "maps must share a grid");
  const auto& grid = *a.grid();
  double total = 0.0;
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> diff(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) diff[k] = a.values()[c][k] - b.values()[c][k];
    const auto d = sphere::sh_derivatives(grid, sphere::sh_analyze(grid, diff));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const std::size_t i = k / grid.nlon();
      const double cot = grid.cos_colatitude(i) / grid.sin_colatitude(i);
      const double htt = d.d_tt[k];
      const double htp = d.d_tp[k] - cot * d.d_p[k];
      const double hpp = d.d_pp[k] + cot * d.d_t[k];
      const double density = d.value[k] * d.value[k] + d.d_t[k] * d.d_t[k] + d.d_p[k] * d.d_p[k] +
                             htt * htt + 2.0 * htp * htp + hpp * hpp;
      total += grid.weight(k) * density;
    }
  }
  return std::sqrt(total);
}

ParametrizedMap precomposed(const ParametrizedMap& psi, const Eigen::Matrix3d& rotation) {
  return ParametrizedMap::from_function(psi.grid(), [psi, rotation](const Vec3& x) { return psi.evaluate(rotation * x); });
}

MapFunction stereographic_dilation(double k, const Eigen::Matrix3d& before, const Eigen::Matrix3d& after) {
  if (!(k > 0.0)) fail(ErrorCategory::invalid_argument, "dilation factor must be positive");
  return [k, before, after](const Vec3& x) -> Vec3 {
    const Vec3 y = before * x;
    const double t = std::acos(std::clamp(y.z(), -1.0, 1.0));
    const double p = std::atan2(y.y(), y.x());
    const double t2 = 2.0 * std::atan(k * std::tan(0.5 * t));
    return after * Vec3(std::sin(t2) * std::cos(p), std::sin(t2) * std::sin(p), std::cos(t2));
  };
}

MapFunction curvature_kink(double a, const Vec3& e) {
  const Vec3 u = e.normalized();
  return [a, u](const Vec3& x) -> Vec3 {
    const double s = x.dot(u);
    return (1.0 + a * s * std::abs(s)) * x;
  };
}

std::vector<ParametrizedMap> admissible_inputs(const GridPtr& grid, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ParametrizedMap> out;
  out.push_back(ParametrizedMap::from_function(grid, [](const Vec3& x) { return x; }));
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 50 * count) fail(ErrorCategory::numerical_failure, "could not generate admissible inputs");
    const Eigen::Matrix3d r1 = sphere::random_rotation(rng), r2 = sphere::random_rotation(rng);
    MapFunction f;
    switch (out.size() % 3) {
      case 0: f = stereographic_dilation(1.0 + 0.15 * unif(rng), r1, r2); break;
      case 1: {
        auto small = sphere::SphereGrid::create(4, 2);
        sphere::RandomFieldOptions o;
        o.min_degree = 1;
        o.max_degree = 4;
        o.norm = sphere::RandomFieldOptions::Norm::c1;
        o.target = 0.05 + 0.1 * unif(rng);
        const auto coeffs = sphere::random_field(small, rng, o).coeffs();
        f = [coeffs, r1](const Vec3& x) -> Vec3 {
          double v;
          evaluate_expansions(4, {&coeffs}, x, &v);
          return r1 * ((1.0 + v) * x);
        };
        break;
      }
      default: {
        const Vec3 e = r1.col(2);
        f = curvature_kink(0.05 + 0.1 * unif(rng), e);
      }
    }
    auto m = ParametrizedMap::from_function(grid, std::move(f));
    if (m.conformal_defect() <= kMaxConformalDefect) out.push_back(std::move(m));
  }
  return out;
}

}  // namespace chargedrop::smoothing
