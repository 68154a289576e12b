#include "hypercomp/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace hypercomp {

void KernelSpec::validate() const {
  if (kind != KernelKind::linear && (!(lambda > 0) || !std::isfinite(lambda))) {
    throw std::invalid_argument("kernel lambda must be positive and finite");
  }
  if (kind == KernelKind::geodesic && (!(q > 0) || !std::isfinite(q))) {
    throw std::invalid_argument("geodesic kernel exponent q must be positive and finite");
  }
}

std::string describe(const KernelSpec& spec) {
  std::ostringstream os;
  switch (spec.kind) {
    case KernelKind::geodesic:
      os << "geodesic(lambda=" << spec.lambda << ",q=" << spec.q << ")";
      break;
    case KernelKind::euclidean_rbf:
      os << "rbf(lambda=" << spec.lambda << ")";
      break;
    case KernelKind::linear:
      os << "linear";
      break;
  }
  return os.str();
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries, std::optional<KernelSpec> spec)
    : entries_(std::move(entries)), spec_(spec) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("Gram matrix must be square");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("Gram matrix has non-finite entries");
  }
  const double asym = (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (entries_.size() > 0 && asym > 1e-12) {
    throw std::invalid_argument("Gram matrix is not symmetric");
  }
}

GramMatrix gram_matrix(const Eigen::MatrixXd& points, const KernelSpec& spec) {
  spec.validate();
  const Eigen::Index n = points.rows();
  if (n == 0) {
    throw std::invalid_argument("gram_matrix: no points");
  }
  if (points.cols() == 0) {
    throw std::invalid_argument("gram_matrix: zero-dimensional points");
  }
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double value = kernel(points.row(i), points.row(j), spec);
      k(i, j) = value;
      k(j, i) = value;
    }
  }
  return GramMatrix(std::move(k), spec);
}

Eigen::VectorXd kernel_row(const Eigen::MatrixXd& points, const Eigen::VectorXd& query,
                           const KernelSpec& spec) {
  detail::require_same_dim(points.cols(), query.size());
  Eigen::VectorXd row(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    row[i] = kernel(points.row(i).transpose(), query, spec);
  }
  return row;
}

double min_eigenvalue(const GramMatrix& gram) {
  if (gram.size() == 0) {
    throw std::invalid_argument("min_eigenvalue: empty matrix");
  }
  return jacobi_eigenvalues(gram.entries()).values[0];
}

PsdReport psd_check(const GramMatrix& gram, double tol) {
  PsdReport report;
  report.min_eigenvalue = min_eigenvalue(gram);
  const double n = static_cast<double>(gram.size());
  report.threshold = tol * std::max(1.0, gram.entries().trace() / n);
  report.psd = report.min_eigenvalue >= -report.threshold;
  return report;
}

}  // namespace hypercomp
