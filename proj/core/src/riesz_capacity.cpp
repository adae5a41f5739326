#include "chargedrop/riesz_capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <mutex>
#include <sstream>
#include <string>

#include "chargedrop/dense_cg.hpp"
#include "chargedrop/error.hpp"
#include "chargedrop/lattice_sums.hpp"
#include "chargedrop/parallel.hpp"

namespace chargedrop::capacity {

void RieszKernelSpec::validate() const {
  if (dimension != 2 && dimension != 3) fail(ErrorCategory::invalid_argument, "dimension must be 2 or 3");
  if (!(alpha > 0.0 && alpha < dimension)) {
    fail(ErrorCategory::invalid_argument, "alpha must lie in (0, d)");
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) fail(ErrorCategory::invalid_argument, "eta must be finite and nonnegative");
}

bool RieszKernelSpec::validated_regime() const { return dimension == 2 || alpha >= 2.0; }

double DiscretizedSet::total_measure() const {
  double s = 0.0;
  for (const auto& e : elements) s += e.measure;
  return s;
}

void DiscretizedSet::validate() const {
  if (dimension != 2 && dimension != 3) fail(ErrorCategory::invalid_argument, "set dimension must be 2 or 3");
  if (elements.empty()) fail(ErrorCategory::invalid_argument, "discretized set is empty");
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& e = elements[i];
    if (!(e.measure > 0.0) || !std::isfinite(e.measure)) {
      fail(ErrorCategory::invalid_argument, "element " + std::to_string(i) + " has nonpositive measure");
    }
    if (!e.centroid.allFinite()) fail(ErrorCategory::invalid_argument, "element " + std::to_string(i) + " has a non-finite centroid");
    if (dimension == 2 && e.centroid.z() != 0.0) {
      fail(ErrorCategory::invalid_argument, "element " + std::to_string(i) + " of a 2D set has nonzero z");
    }
  }
}

DiscretizedSet dilated(const DiscretizedSet& set, double factor) {
  DiscretizedSet out = set;
  const double mscale = std::pow(factor, set.element_dimension());
  for (auto& e : out.elements) {
    e.centroid *= factor;
    e.measure *= mscale;
    e.diameter *= factor;
  }
  return out;
}

DiscretizedSet translated(const DiscretizedSet& set, const Vec3& shift) {
  DiscretizedSet out = set;
  for (auto& e : out.elements) e.centroid += shift;
  return out;
}

DiscretizedSet rotated(const DiscretizedSet& set, const Eigen::Matrix3d& rotation) {
  DiscretizedSet out = set;
  for (auto& e : out.elements) e.centroid = rotation * e.centroid;
  return out;
}

namespace {

struct SelfEnergyRule {
  DiagonalRule rule;
  int k;
  double s;
  double constant;

  SelfEnergyRule(DiagonalRule r, int k_, double s_) : rule(r), k(k_), s(s_) {
    if (rule == DiagonalRule::lattice_corrected) {
      constant = -lattice_zeta(k, s);
    } else {
      constant = unit_body_self_energy(k, s);
    }
  }

  double operator()(double w) const {
    if (rule == DiagonalRule::lattice_corrected) return constant * std::pow(w, 2.0 - s / k);
    // Unit body of measure m0 scaled to measure w: lengths scale by (w/m0)^(1/k).
    double unit_measure = 1.0;
    if (k == 2) unit_measure = std::numbers::pi;
    if (k == 3) unit_measure = 4.0 * std::numbers::pi / 3.0;
    const double scale = std::pow(w / unit_measure, 1.0 / k);
    return constant * std::pow(scale, 2.0 * k - s);
  }
};

void check_integrable(const DiscretizedSet& set, double s) {
  const int k = set.element_dimension();
  if (!(s < k)) {
    std::ostringstream msg;
    msg << "kernel exponent " << s << " is not integrable on " << k
        << "-dimensional elements; use volumetric cells";
    fail(ErrorCategory::invalid_argument, msg.str());
  }
}

}  // namespace

Eigen::MatrixXd assemble_kernel(const DiscretizedSet& set, const RieszKernelSpec& spec, DiagonalRule rule) {
  spec.validate();
  set.validate();
  if (set.dimension != spec.dimension) fail(ErrorCategory::invalid_argument, "set and kernel dimensions differ");
  const double s = spec.exponent();
  check_integrable(set, s);
  const SelfEnergyRule self(rule, set.element_dimension(), s);

  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::MatrixXd K(n, n);
  double scale = 0.0;
  for (const auto& e : set.elements) scale = std::max(scale, e.centroid.norm() + e.diameter);
  const double coincidence = 1e-12 * std::max(scale, 1e-300);

  std::vector<std::pair<std::size_t, std::size_t>> clashes;
  std::mutex clash_mutex;
  const bool unit_power = s == 1.0;
  parallel_for(0, set.size(), [&](std::size_t i) {
    const auto& ei = set.elements[i];
    K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = self(ei.measure);
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const auto& ej = set.elements[j];
      const double dist = (ei.centroid - ej.centroid).norm();
      if (!(dist > coincidence)) {
        std::lock_guard<std::mutex> lock(clash_mutex);
        clashes.emplace_back(i, j);
        continue;
      }
      const double kernel = unit_power ? 1.0 / dist : std::pow(dist, -s);
      const double v = ei.measure * ej.measure * kernel;
      K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  });
  if (!clashes.empty()) {
    std::sort(clashes.begin(), clashes.end());
    std::ostringstream msg;
    msg << "coincident element centroids:";
    for (std::size_t c = 0; c < std::min<std::size_t>(clashes.size(), 10); ++c) {
      msg << " (" << clashes[c].first << ", " << clashes[c].second << ")";
    }
    if (clashes.size() > 10) msg << " and " << clashes.size() - 10 << " more";
    fail(ErrorCategory::invalid_argument, msg.str());
  }
  return K;
}

ChargeDistribution equilibrium_measure(const DiscretizedSet& set, const RieszKernelSpec& spec,
                                       const EquilibriumOptions& options) {
  Eigen::MatrixXd A = assemble_kernel(set, spec, options.rule);
  const auto n = static_cast<Eigen::Index>(set.size());
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = set.elements[static_cast<std::size_t>(i)].measure;
  if (spec.eta > 0.0) A.diagonal() += spec.eta * w;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (options.initial_guess != nullptr && options.initial_guess->size() == n) x = *options.initial_guess;
  const CgResult cg = conjugate_gradient(A, w, x, options.relative_tolerance, options.max_iterations);
  if (!cg.converged) {
    std::ostringstream msg;
    msg << "capacity solve did not converge in " << cg.iterations << " iterations (relative residual "
        << cg.relative_residual << ")";
    fail(ErrorCategory::numerical_failure, msg.str());
  }

  const double mass = w.dot(x);
  if (!(mass > 0.0)) fail(ErrorCategory::numerical_failure, "capacity solve produced nonpositive total charge");
  const Eigen::VectorXd sigma = x / mass;

  ChargeDistribution out;
  out.spec = spec;
  out.densities.assign(sigma.data(), sigma.data() + n);
  Eigen::VectorXd As;
  dense_matvec(A, sigma, As);
  out.value = sigma.dot(As);
  out.l2_part = spec.eta * sigma.cwiseProduct(sigma).dot(w);
  out.riesz_part = out.value - out.l2_part;
  out.iterations = cg.iterations;
  out.relative_residual = cg.relative_residual;
  out.validated_regime = spec.validated_regime();
  out.raw_solution = std::move(x);

  if (spec.eta == 0.0 && options.check_nonnegative) {
    const double hi = sigma.maxCoeff(), lo = sigma.minCoeff();
    if (lo < -options.nonnegativity_tolerance * hi) {
      std::ostringstream msg;
      msg << "negative equilibrium density (min " << lo << ", max " << hi
          << "): discretization too coarse or alpha outside the validated range";
      fail(ErrorCategory::numerical_failure, msg.str());
    }
  }
  return out;
}

double capacity_value(const DiscretizedSet& set, const RieszKernelSpec& spec, const EquilibriumOptions& options) {
  return 1.0 / equilibrium_measure(set, spec, options).value;
}

ScalingCheck scaling_check(const DiscretizedSet& set, const RieszKernelSpec& spec, double lambda,
                           const EquilibriumOptions& options) {
  if (!(lambda > 0.0)) fail(ErrorCategory::invalid_argument, "scaling factor must be positive");
  const double base = equilibrium_measure(set, spec, options).value;
  const double scaled = equilibrium_measure(dilated(set, lambda), spec, options).value;
  const double d = spec.dimension;
  ScalingCheck c;
  c.lhs = scaled;
  c.equality_factor = std::pow(lambda, spec.alpha - d);
  c.rhs = std::max(c.equality_factor, std::pow(lambda, -d)) * base;
  return c;
}

PerturbationBound perturbation_bound_check(const DiscretizedSet& e_set, const DiscretizedSet& f_set, double rho,
                                           const RieszKernelSpec& spec, double constant,
                                           const EquilibriumOptions& options) {
  if (!(rho > 0.0)) fail(ErrorCategory::invalid_argument, "perturbation radius must be positive");
  PerturbationBound b;
  b.difference = equilibrium_measure(e_set, spec, options).value - equilibrium_measure(f_set, spec, options).value;
  b.bound = constant * std::pow(rho, spec.dimension - spec.alpha);
  return b;
}

}  // namespace chargedrop::capacity
