#pragma once

#include <Eigen/Core>
#include <cstddef>

namespace chargedrop::capacity {

struct CgResult {
  std::size_t iterations = 0;
  double relative_residual = 0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradients for a dense symmetric matrix.
// x holds the initial guess on entry. The matrix-vector product is split into
// row blocks across threads, and each row is a fixed-order dot product;
// vector reductions run serially. Results are therefore bit-identical for any
// thread count. Throws numerical_failure if a search direction has
// nonpositive curvature.
CgResult conjugate_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double relative_tolerance, std::size_t max_iterations);

// y = A x with the same row-blocked evaluation.
void dense_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y);

}  // namespace chargedrop::capacity
