#include "chargedrop/dense_cg.hpp"

#include <cmath>
#include <string>

#include "chargedrop/error.hpp"
#include "chargedrop/parallel.hpp"

namespace chargedrop::capacity {

void dense_matvec(const Eigen::MatrixXd& A, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  const auto n = static_cast<std::size_t>(A.rows());
  y.resize(A.rows());
  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  // A is symmetric, so row i equals column i; columns are contiguous.
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t hi = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) {
      y[static_cast<Eigen::Index>(i)] = A.col(static_cast<Eigen::Index>(i)).dot(x);
    }
  });
}

CgResult conjugate_gradient(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, Eigen::VectorXd& x,
                            double tol, std::size_t max_iterations) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n || b.size() != n) fail(ErrorCategory::invalid_argument, "CG dimension mismatch");
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);

  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = A(i, i);
    if (!(d > 0.0)) {
      fail(ErrorCategory::numerical_failure,
           "kernel matrix not positive definite: diagonal entry " + std::to_string(i) + " is " + std::to_string(d));
    }
    inv_diag[i] = 1.0 / d;
  }

  const double bnorm = b.norm();
  CgResult result;
  if (bnorm == 0.0) {
    x.setZero();
    result.converged = true;
    return result;
  }

  Eigen::VectorXd r, Ap;
  dense_matvec(A, x, Ap);
  r = b - Ap;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  result.relative_residual = r.norm() / bnorm;
  while (result.relative_residual > tol) {
    if (result.iterations >= max_iterations) return result;
    dense_matvec(A, p, Ap);
    const double curvature = p.dot(Ap);
    if (!(curvature > 0.0)) {
      fail(ErrorCategory::numerical_failure,
           "kernel matrix not positive definite: nonpositive curvature in CG (diagonal rule too coarse)");
    }
    const double step = rz / curvature;
    x += step * p;
    r -= step * Ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
    ++result.iterations;
    result.relative_residual = r.norm() / bnorm;
  }
  result.converged = true;
  return result;
}

}  // namespace chargedrop::capacity
