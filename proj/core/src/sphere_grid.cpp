#include "chargedrop/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "chargedrop/error.hpp"

namespace chargedrop::sphere {

namespace {
constexpr double kPi = std::numbers::pi;

void check_finite(std::span<const double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      fail(ErrorCategory::invalid_argument,
           "non-finite field value at node " + std::to_string(k));
    }
  }
}

// Latitude-wise Legendre sums a_m = sum_l c_{l,m} T_l^m, b_m = sum_l c_{l,-m} T_l^m.
void legendre_sums(const std::vector<double>& table, std::span<const double> coeffs, int degree,
                   std::vector<double>& a, std::vector<double>& b) {
  const double root2 = std::numbers::sqrt2;
  a.assign(static_cast<std::size_t>(degree + 1), 0.0);
  b.assign(static_cast<std::size_t>(degree + 1), 0.0);
  for (int l = 0; l <= degree; ++l) {
    a[0] += coeffs[coeff_index(l, 0)] * table[tri_index(l, 0)];
    for (int m = 1; m <= l; ++m) {
      const double t = root2 * table[tri_index(l, m)];
      a[static_cast<std::size_t>(m)] += coeffs[coeff_index(l, m)] * t;
      b[static_cast<std::size_t>(m)] += coeffs[coeff_index(l, -m)] * t;
    }
  }
}
}  // namespace

int band_limit_of(std::size_t count) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(count))));
  if (root == 0 || root * root != count) {
    fail(ErrorCategory::invalid_argument,
         "coefficient count " + std::to_string(count) + " is not a perfect square");
  }
  return static_cast<int>(root) - 1;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t k = 0; k < half; ++k) {
    // Tricomi initial guess for the k-th largest root, then Newton.
    double x = std::cos(kPi * (static_cast<double>(k) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t j = 2; j <= n; ++j) {
      const double jd = static_cast<double>(j);
      const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[n - 1 - k] = x;
    nodes[k] = -x;
    weights[n - 1 - k] = w;
    weights[k] = w;
  }
}

void legendre_column(int L, double t, LegendreColumn& out, bool with_derivatives) {
  const std::size_t count = tri_index(L, L) + 1;
  out.p.assign(count, 0.0);
  const double x = std::cos(t);
  const double y = std::sin(t);

  double pmm = 1.0 / std::sqrt(4.0 * kPi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * y;
    out.p[tri_index(m, m)] = pmm;
    if (m + 1 <= L) out.p[tri_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
    for (int l = m + 2; l <= L; ++l) {
      const double ll = static_cast<double>(l), mm = static_cast<double>(m);
      const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - mm * mm));
      const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - mm * mm) /
                                 (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
      out.p[tri_index(l, m)] = a * (x * out.p[tri_index(l - 1, m)] - b * out.p[tri_index(l - 2, m)]);
    }
  }
  if (!with_derivatives) return;

  out.dp.assign(count, 0.0);
  out.d2p.assign(count, 0.0);
  for (int l = 0; l <= L; ++l) {
    const double ll = static_cast<double>(l);
    for (int m = 0; m <= l; ++m) {
      const double mm = static_cast<double>(m);
      const double p = out.p[tri_index(l, m)];
      double prev = 0.0, c = 0.0;
      if (l > m) {
        prev = out.p[tri_index(l - 1, m)];
        c = std::sqrt((2.0 * ll + 1.0) / (2.0 * ll - 1.0) * (ll * ll - mm * mm));
      }
      const double dp = (ll * x * p - c * prev) / y;
      out.dp[tri_index(l, m)] = dp;
      // Associated Legendre equation in colatitude form.
      out.d2p[tri_index(l, m)] = -(x / y) * dp - (ll * (ll + 1.0) - mm * mm / (y * y)) * p;
    }
  }
}

std::shared_ptr<const SphereGrid> SphereGrid::create(int band_limit, int oversample) {
  if (band_limit < 0) fail(ErrorCategory::invalid_argument, "band limit must be nonnegative");
  if (oversample < 1) fail(ErrorCategory::invalid_argument, "oversample factor must be >= 1");
  auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
  g->band_limit_ = band_limit;
  g->oversample_ = oversample;
  g->nlat_ = static_cast<std::size_t>(oversample) * static_cast<std::size_t>(band_limit + 1);
  g->nlon_ = 2 * g->nlat_;
  g->dphi_ = 2.0 * kPi / static_cast<double>(g->nlon_);

  std::vector<double> x, w;
  gauss_legendre(g->nlat_, x, w);
  // Order colatitudes from the north pole down.
  for (std::size_t i = 0; i < g->nlat_; ++i) {
    const double xi = x[g->nlat_ - 1 - i];
    g->theta_.push_back(std::acos(xi));
    g->cos_theta_.push_back(xi);
    g->sin_theta_.push_back(std::sqrt((1.0 - xi) * (1.0 + xi)));
    g->lat_weight_.push_back(w[g->nlat_ - 1 - i]);
  }
  for (std::size_t j = 0; j < g->nlon_; ++j) g->phi_.push_back(g->dphi_ * static_cast<double>(j));

  g->weights_.resize(g->size());
  for (std::size_t k = 0; k < g->size(); ++k) g->weights_[k] = g->lat_weight_[k / g->nlon_] * g->dphi_;

  g->legendre_.resize(g->nlat_);
  for (std::size_t i = 0; i < g->nlat_; ++i) legendre_column(band_limit, g->theta_[i], g->legendre_[i]);

  const auto M = static_cast<std::size_t>(band_limit + 1);
  g->cos_table_.resize(M * g->nlon_);
  g->sin_table_.resize(M * g->nlon_);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t j = 0; j < g->nlon_; ++j) {
      // Reduce the angle exactly through the integer product to keep tables symmetric.
      const std::size_t k = (m * j) % g->nlon_;
      const double a = g->dphi_ * static_cast<double>(k);
      g->cos_table_[m * g->nlon_ + j] = std::cos(a);
      g->sin_table_[m * g->nlon_ + j] = std::sin(a);
    }
  }
  return g;
}

Vec3 SphereGrid::node(std::size_t k) const {
  const std::size_t i = k / nlon_, j = k % nlon_;
  return {sin_theta_[i] * cos_table_[nlon_ + j], sin_theta_[i] * sin_table_[nlon_ + j],
          cos_theta_[i]};
}

std::vector<double> sh_analyze(const SphereGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    fail(ErrorCategory::invalid_argument, "value count " + std::to_string(values.size()) +
                                              " does not match grid size " + std::to_string(grid.size()));
  }
  check_finite(values);
  const int L = grid.band_limit();
  const std::size_t nlon = grid.nlon();
  std::vector<double> coeffs(coeff_count(L), 0.0);
  std::vector<double> A(static_cast<std::size_t>(L + 1)), B(static_cast<std::size_t>(L + 1));
  const double root2 = std::numbers::sqrt2;
  for (std::size_t i = 0; i < grid.nlat(); ++i) {
    const double* row = values.data() + i * nlon;
    for (int m = 0; m <= L; ++m) {
      double a = 0.0, b = 0.0;
      for (std::size_t j = 0; j < nlon; ++j) {
        a += row[j] * grid.cos_mphi(m, j);
        b += row[j] * grid.sin_mphi(m, j);
      }
      A[static_cast<std::size_t>(m)] = a * grid.longitude_step();
      B[static_cast<std::size_t>(m)] = b * grid.longitude_step();
    }
    const double w = grid.latitude_weight(i);
    const auto& p = grid.legendre(i).p;
    for (int l = 0; l <= L; ++l) {
      coeffs[coeff_index(l, 0)] += w * p[tri_index(l, 0)] * A[0];
      for (int m = 1; m <= l; ++m) {
        const double t = w * root2 * p[tri_index(l, m)];
        coeffs[coeff_index(l, m)] += t * A[static_cast<std::size_t>(m)];
        coeffs[coeff_index(l, -m)] += t * B[static_cast<std::size_t>(m)];
      }
    }
  }
  return coeffs;
}

namespace {
// Fourier stage: order 0 gives a cos + b sin, order 1 its longitude derivative, order 2 the second.
void fourier_row(const SphereGrid& grid, const std::vector<double>& a, const std::vector<double>& b,
                 int order, double scale, double* out) {
  const int M = static_cast<int>(a.size()) - 1;
  for (std::size_t j = 0; j < grid.nlon(); ++j) {
    double s = 0.0;
    for (int m = 0; m <= M; ++m) {
      const double c = grid.cos_mphi(m, j), sn = grid.sin_mphi(m, j);
      const double am = a[static_cast<std::size_t>(m)], bm = b[static_cast<std::size_t>(m)];
      const double md = static_cast<double>(m);
      switch (order) {
        case 0: s += am * c + bm * sn; break;
        case 1: s += md * (bm * c - am * sn); break;
        default: s -= md * md * (am * c + bm * sn); break;
      }
    }
    out[j] = s * scale;
  }
}

int checked_degree(const SphereGrid& grid, std::span<const double> coeffs) {
  const int degree = band_limit_of(coeffs.size());
  if (degree > grid.band_limit()) {
    fail(ErrorCategory::invalid_argument, "expansion degree " + std::to_string(degree) +
                                              " exceeds grid band limit " +
                                              std::to_string(grid.band_limit()));
  }
  return degree;
}
}  // namespace

std::vector<double> sh_synthesize(const SphereGrid& grid, std::span<const double> coeffs) {
  const int degree = checked_degree(grid, coeffs);
  std::vector<double> values(grid.size());
  std::vector<double> a, b;
  for (std::size_t i = 0; i < grid.nlat(); ++i) {
    legendre_sums(grid.legendre(i).p, coeffs, degree, a, b);
    fourier_row(grid, a, b, 0, 1.0, values.data() + i * grid.nlon());
  }
  return values;
}

SphericalDerivatives sh_derivatives(const SphereGrid& grid, std::span<const double> coeffs) {
  const int degree = checked_degree(grid, coeffs);
  SphericalDerivatives d;
  for (auto* v : {&d.value, &d.d_t, &d.d_p, &d.d_tt, &d.d_tp, &d.d_pp}) v->resize(grid.size());
  std::vector<double> a0, b0, a1, b1, a2, b2;
  for (std::size_t i = 0; i < grid.nlat(); ++i) {
    const auto& col = grid.legendre(i);
    legendre_sums(col.p, coeffs, degree, a0, b0);
    legendre_sums(col.dp, coeffs, degree, a1, b1);
    legendre_sums(col.d2p, coeffs, degree, a2, b2);
    const double y = grid.sin_colatitude(i);
    const std::size_t off = i * grid.nlon();
    fourier_row(grid, a0, b0, 0, 1.0, d.value.data() + off);
    fourier_row(grid, a1, b1, 0, 1.0, d.d_t.data() + off);
    fourier_row(grid, a0, b0, 1, 1.0 / y, d.d_p.data() + off);
    fourier_row(grid, a2, b2, 0, 1.0, d.d_tt.data() + off);
    fourier_row(grid, a1, b1, 1, 1.0 / y, d.d_tp.data() + off);
    fourier_row(grid, a0, b0, 2, 1.0 / (y * y), d.d_pp.data() + off);
  }
  return d;
}

namespace {
void direction_angles(const Vec3& v, double& t, double& p) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) fail(ErrorCategory::invalid_argument, "direction must be a nonzero finite vector");
  t = std::acos(std::clamp(v.z() / n, -1.0, 1.0));
  p = std::atan2(v.y(), v.x());
}
}  // namespace

double sh_evaluate(std::span<const double> coeffs, const Vec3& direction) {
  const int L = band_limit_of(coeffs.size());
  double t, p;
  direction_angles(direction, t, p);
  LegendreColumn col;
  legendre_column(L, t, col, false);
  std::vector<double> a, b;
  legendre_sums(col.p, coeffs, L, a, b);
  double s = a[0];
  for (int m = 1; m <= L; ++m) {
    s += a[static_cast<std::size_t>(m)] * std::cos(m * p) + b[static_cast<std::size_t>(m)] * std::sin(m * p);
  }
  return s;
}

PointGradient sh_evaluate_gradient(std::span<const double> coeffs, const Vec3& direction) {
  const int L = band_limit_of(coeffs.size());
  double t, p;
  direction_angles(direction, t, p);
  const double y = std::sin(t);
  if (y < 1e-8) fail(ErrorCategory::invalid_argument, "gradient evaluation requested at a pole");
  LegendreColumn col;
  legendre_column(L, t, col, true);
  std::vector<double> a0, b0, a1, b1;
  legendre_sums(col.p, coeffs, L, a0, b0);
  legendre_sums(col.dp, coeffs, L, a1, b1);
  PointGradient g;
  g.value = a0[0];
  g.d_t = a1[0];
  double dp = 0.0;
  for (int m = 1; m <= L; ++m) {
    const auto k = static_cast<std::size_t>(m);
    const double c = std::cos(m * p), s = std::sin(m * p);
    g.value += a0[k] * c + b0[k] * s;
    g.d_t += a1[k] * c + b1[k] * s;
    dp += m * (b0[k] * c - a0[k] * s);
  }
  g.d_p = dp / y;
  return g;
}

}  // namespace chargedrop::sphere
