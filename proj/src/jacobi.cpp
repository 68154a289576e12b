#include <algorithm>
#include <cmath>

#include "hypercomp/kernels.hpp"

namespace hypercomp {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// Applies the rotation that annihilates a(p, q).
void rotate(Eigen::MatrixXd& a, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
}

}  // namespace

EigenResult jacobi_eigenvalues(const Eigen::MatrixXd& symmetric, const JacobiOptions& opts) {
  if (symmetric.rows() != symmetric.cols()) {
    throw std::invalid_argument("jacobi_eigenvalues: matrix must be square");
  }
  if (symmetric.size() > 0 &&
      (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("jacobi_eigenvalues: matrix is not symmetric");
  }
  Eigen::MatrixXd a = symmetric;
  const Eigen::Index n = a.rows();

  double scale = std::abs(a.trace());
  if (scale == 0.0) scale = a.norm();
  const double threshold = opts.tol_scale * scale;

  EigenResult result;
  while (true) {
    if (off_diagonal_norm(a) <= threshold) {
      result.converged = true;
      break;
    }
    if (result.sweeps >= opts.max_sweeps) break;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        rotate(a, p, q);
      }
    }
    ++result.sweeps;
  }
  result.values = a.diagonal();
  std::sort(result.values.begin(), result.values.end());
  return result;
}

}  // namespace hypercomp
