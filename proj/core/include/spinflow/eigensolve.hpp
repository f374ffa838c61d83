#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spinflow {

template <typename Scalar>
struct EigResult {
  std::vector<double> values;  // ascending Ritz values
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
  int iterations = 0;
  double max_residual = 0;
  bool converged = false;
};

// Preconditioned conjugate gradients for an SPD operator in the plain l2 inner
// product.  Returns the iteration count; x holds the solution.
template <typename Scalar, typename Op, typename Prec>
int pcg(Op&& op, Prec&& prec, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& b,
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x, double rel_tol, int maxit) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vec r = b - op(x);
  const double bnorm = b.norm();
  if (bnorm == 0) {
    x.setZero();
    return 0;
  }
  Vec z = prec(r);
  Vec p = z;
  Scalar rz = r.dot(z);
  int it = 0;
  for (; it < maxit; ++it) {
    if (r.norm() <= rel_tol * bnorm) break;
    Vec ap = op(p);
    Scalar alpha = rz / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    z = prec(r);
    Scalar rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return it;
}

// Smallest eigenpairs of a Hermitian operator via shifted inverse subspace
// iteration with Rayleigh-Ritz: X <- orth(solve(X)), where solve applies
// (A - sigma)^{-1} (the caller fixes sigma below the spectrum and supplies the
// inner solver, typically pcg with a spectral preconditioner).  Robust in the
// presence of degenerate clusters as long as the block is reasonably sized.
template <typename Scalar, typename Apply, typename SolveShifted>
EigResult<Scalar> inverse_subspace_smallest(
    Apply&& apply, SolveShifted&& solve,
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> X, int want, double tol,
    int max_sweeps) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = X.rows();

  auto orthonormalize = [&](const Mat& S) {
    Eigen::ColPivHouseholderQR<Mat> qr(S);
    qr.setThreshold(1e-13);
    Eigen::Index r = std::max<Eigen::Index>(1, qr.rank());
    return Mat(qr.householderQ() * Mat::Identity(n, r));
  };

  EigResult<Scalar> result;
  X = orthonormalize(X);
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    Mat Y(n, X.cols());
    for (Eigen::Index j = 0; j < X.cols(); ++j) Y.col(j) = solve(X.col(j));
    Mat Q = orthonormalize(Y);
    Mat AQ(n, Q.cols());
    {
      Mat applied = apply(Q);
      AQ = std::move(applied);
    }
    Mat H = Q.adjoint() * AQ;
    Eigen::SelfAdjointEigenSolver<Mat> ritz(0.5 * (H + H.adjoint()));
    X = Q * ritz.eigenvectors();
    Mat AX = AQ * ritz.eigenvectors();
    Eigen::VectorXd theta = ritz.eigenvalues();

    result.iterations = sweep;
    result.values.assign(theta.data(), theta.data() + theta.size());
    result.max_residual = 0;
    bool ok = true;
    for (int j = 0; j < want && j < X.cols(); ++j) {
      double res = (AX.col(j) - Scalar(theta[j]) * X.col(j)).norm();
      result.max_residual = std::max(result.max_residual, res);
      if (res > tol * std::max(1.0, std::abs(theta[j]))) ok = false;
    }
    if (ok) {
      result.converged = true;
      result.vectors = X;
      return result;
    }
  }
  result.vectors = X;
  return result;
}

}  // namespace spinflow
