#pragma once

// Kernels over document points, Gram matrices and positive-semidefiniteness
// diagnostics.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "hypercomp/gyroball.hpp"

namespace hypercomp {

enum class KernelKind { geodesic, euclidean_rbf, linear };

/// exp(-lambda d(u,v)^q) for the geodesic kind (q = 1 Laplacian, q = 2
/// Gaussian), exp(-lambda |u-v|^2) for euclidean_rbf, <u,v> for linear.
struct KernelSpec {
  KernelKind kind = KernelKind::geodesic;
  double lambda = 1.0;
  double q = 1.0;

  static KernelSpec geodesic_laplacian(double lambda = 1.0) {
    return {KernelKind::geodesic, lambda, 1.0};
  }
  static KernelSpec geodesic_gaussian(double lambda = 1.0) {
    return {KernelKind::geodesic, lambda, 2.0};
  }
  static KernelSpec rbf(double lambda = 1.0) { return {KernelKind::euclidean_rbf, lambda, 1.0}; }
  static KernelSpec linear() { return {KernelKind::linear, 1.0, 1.0}; }

  void validate() const;

  /// Kernels whose value at identical points is exp(0) = 1.
  bool unit_diagonal() const { return kind != KernelKind::linear; }

  /// Geodesic kernels with 0 < q <= 1 are positive definite on the ball;
  /// other geodesic exponents are not guaranteed to be.
  bool known_mercer() const { return kind != KernelKind::geodesic || q <= 1.0; }

  bool operator==(const KernelSpec&) const = default;
};

/// Stable textual name, e.g. "geodesic(lambda=1,q=1)".
std::string describe(const KernelSpec& spec);

template <typename DerivedU, typename DerivedV>
double geodesic_kernel(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
                       double lambda, double q) {
  if (!(lambda > 0) || !(q > 0)) {
    throw std::invalid_argument("geodesic kernel needs lambda > 0 and q > 0");
  }
  const double d = poincare_distance(u, v);
  return std::exp(-lambda * std::pow(d, q));
}

template <typename DerivedU, typename DerivedV>
double kernel(const Eigen::MatrixBase<DerivedU>& u, const Eigen::MatrixBase<DerivedV>& v,
              const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::geodesic:
      return geodesic_kernel(u, v, spec.lambda, spec.q);
    case KernelKind::euclidean_rbf:
      detail::require_same_dim(u.size(), v.size());
      return std::exp(-spec.lambda * (u - v).squaredNorm());
    case KernelKind::linear:
      detail::require_same_dim(u.size(), v.size());
      return u.dot(v);
  }
  throw std::invalid_argument("unknown kernel kind");
}

inline double kernel(const BallPoint<double>& u, const BallPoint<double>& v,
                     const KernelSpec& spec) {
  return kernel(u.coords(), v.coords(), spec);
}

/// Symmetric matrix of kernel evaluations.
class GramMatrix {
 public:
  /// Wraps an existing matrix; rejects non-square, non-finite or asymmetric
  /// (beyond 1e-12) input.
  explicit GramMatrix(Eigen::MatrixXd entries, std::optional<KernelSpec> spec = std::nullopt);

  const Eigen::MatrixXd& entries() const { return entries_; }
  const std::optional<KernelSpec>& spec() const { return spec_; }
  Eigen::Index size() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
  std::optional<KernelSpec> spec_;
};

/// Gram matrix over the rows of `points`. The upper triangle is evaluated once
/// and mirrored, so the result is exactly symmetric.
GramMatrix gram_matrix(const Eigen::MatrixXd& points, const KernelSpec& spec);

/// Kernel values of every row of `points` against `query`.
Eigen::VectorXd kernel_row(const Eigen::MatrixXd& points, const Eigen::VectorXd& query,
                           const KernelSpec& spec);

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm falls below tol_scale * |trace|.
  double tol_scale = 1e-12;
  int max_sweeps = 100;
};

struct EigenResult {
  Eigen::VectorXd values;  // ascending
  int sweeps = 0;
  bool converged = false;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
EigenResult jacobi_eigenvalues(const Eigen::MatrixXd& symmetric, const JacobiOptions& opts = {});

double min_eigenvalue(const GramMatrix& gram);

struct PsdReport {
  bool psd = false;
  double min_eigenvalue = 0.0;
  /// min_eigenvalue must be >= -threshold for the matrix to pass.
  double threshold = 0.0;
};

/// PSD test with a tolerance scaled by max(1, trace / n).
PsdReport psd_check(const GramMatrix& gram, double tol = 1e-8);

}  // namespace hypercomp
