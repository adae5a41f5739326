#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <string>
#include <vector>

namespace chargedrop::capacity {

using Vec3 = Eigen::Vector3d;

// Kernel |x - y|^-(d - alpha) in ambient dimension d with L2 weight eta.
struct RieszKernelSpec {
  int dimension = 3;
  double alpha = 2.0;
  double eta = 0.0;

  double exponent() const { return static_cast<double>(dimension) - alpha; }
  void validate() const;
  // The range where boundary panels are known to carry the equilibrium
  // measure (d = 3, alpha in [2, 3)) or where 2D volumetric cells apply.
  bool validated_regime() const;
};

enum class SetMode { boundary, volumetric };

struct Element {
  Vec3 centroid = Vec3::Zero();  // 2D sets use z = 0
  double measure = 0;
  double diameter = 0;
};

struct DiscretizedSet {
  int dimension = 3;  // ambient dimension
  SetMode mode = SetMode::boundary;
  std::vector<Element> elements;

  // Dimension of the elements: d - 1 for panels, d for cells.
  int element_dimension() const { return mode == SetMode::boundary ? dimension - 1 : dimension; }
  std::size_t size() const { return elements.size(); }
  double total_measure() const;
  void validate() const;
};

DiscretizedSet dilated(const DiscretizedSet& set, double factor);
DiscretizedSet translated(const DiscretizedSet& set, const Vec3& shift);
DiscretizedSet rotated(const DiscretizedSet& set, const Eigen::Matrix3d& rotation);

// Self-energy of an element.
//   lattice_corrected: the missing near-field of a locally uniform element
//     lattice, -Z_k(s) w^(2 - s/k) with Z_k the k-dimensional lattice zeta.
//   equal_measure_body: exact self-energy of a uniformly charged segment, flat
//     disk or ball of the element's measure.
enum class DiagonalRule { lattice_corrected, equal_measure_body };

// K_ij = w_i w_j |x_i - x_j|^-s off the diagonal, self-energies on it.
// Parallel over rows; every entry is computed by one fixed expression.
Eigen::MatrixXd assemble_kernel(const DiscretizedSet& set, const RieszKernelSpec& spec,
                                DiagonalRule rule = DiagonalRule::lattice_corrected);

struct EquilibriumOptions {
  DiagonalRule rule = DiagonalRule::lattice_corrected;
  double relative_tolerance = 1e-10;
  std::size_t max_iterations = 5000;
  // For eta = 0, reject solutions whose density drops below
  // -nonnegativity_tolerance * max density.
  bool check_nonnegative = true;
  double nonnegativity_tolerance = 1e-6;
  // Optional warm start for the unnormalized solve (same element count).
  const Eigen::VectorXd* initial_guess = nullptr;
};

struct ChargeDistribution {
  RieszKernelSpec spec;
  std::vector<double> densities;  // per element, sum density * measure = 1
  double value = 0;               // I(mu) + eta int mu^2 of the returned densities
  double riesz_part = 0;
  double l2_part = 0;
  std::size_t iterations = 0;
  double relative_residual = 0;
  bool validated_regime = true;
  Eigen::VectorXd raw_solution;   // solution of (K + eta W) x = w, for warm starts
};

// Minimizes sum sigma_i sigma_j K_ij + eta sum w_i sigma_i^2 subject to
// sum w_i sigma_i = 1. Stationarity gives (K + eta W) x = w, sigma = x / (w.x).
ChargeDistribution equilibrium_measure(const DiscretizedSet& set, const RieszKernelSpec& spec,
                                       const EquilibriumOptions& options = {});

double capacity_value(const DiscretizedSet& set, const RieszKernelSpec& spec,
                      const EquilibriumOptions& options = {});

struct ScalingCheck {
  double lhs = 0;  // I(lambda E) on dilated elements
  double rhs = 0;  // max(lambda^(alpha-d), lambda^-d) I(E)
  double equality_factor = 0;  // lambda^(alpha-d): lhs equals factor*I(E) when eta = 0
};
ScalingCheck scaling_check(const DiscretizedSet& set, const RieszKernelSpec& spec, double lambda,
                           const EquilibriumOptions& options = {});

struct PerturbationBound {
  double difference = 0;  // I(E) - I(F)
  double bound = 0;       // constant * rho^(d - alpha)
};
PerturbationBound perturbation_bound_check(const DiscretizedSet& e_set, const DiscretizedSet& f_set,
                                           double rho, const RieszKernelSpec& spec, double constant = 1.0,
                                           const EquilibriumOptions& options = {});

}  // namespace chargedrop::capacity
