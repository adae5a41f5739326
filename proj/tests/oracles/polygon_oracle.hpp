// Independent curve oracle: a fine polygon through r(t)(cos t, sin t).
#pragma once
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

struct PolygonMeasures {
  double length = 0;
  double area = 0;
  double elastic = 0;  // sum of turning angle^2 / dual edge length
};

inline PolygonMeasures polygon_measures(const std::function<double(double)>& r, std::size_t n = 100000) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    x[i] = r(t) * std::cos(t);
    y[i] = r(t) * std::sin(t);
  }
  PolygonMeasures m;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n, k = (i + 2) % n;
    const double ex = x[j] - x[i], ey = y[j] - y[i];
    const double fx = x[k] - x[j], fy = y[k] - y[j];
    const double le = std::hypot(ex, ey), lf = std::hypot(fx, fy);
    m.length += le;
    m.area += 0.5 * (x[i] * y[j] - x[j] * y[i]);
    const double turn = std::atan2(ex * fy - ey * fx, ex * fx + ey * fy);
    m.elastic += turn * turn / (0.5 * (le + lf));
  }
  return m;
}

}  // namespace oracle
