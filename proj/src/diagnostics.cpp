#include <numeric>
#include <random>

#include "hypercomp/harness.hpp"
#include "shuffle.hpp"

namespace hypercomp {

KernelDiagnostic check_kernel(const EmbeddingTable& table, std::size_t n, const KernelSpec& spec,
                              std::uint64_t seed, double tol) {
  if (n == 0 || n > table.size()) {
    throw std::invalid_argument("check_kernel: n must lie in [1, vocabulary size]");
  }
  std::vector<Eigen::Index> rows(table.size());
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  std::mt19937_64 engine(seed);
  detail::fisher_yates(rows, engine);
  rows.resize(n);

  KernelDiagnostic out;
  Eigen::MatrixXd points(static_cast<Eigen::Index>(n), table.dim());
  for (std::size_t i = 0; i < n; ++i) {
    points.row(static_cast<Eigen::Index>(i)) = table.vector(rows[i]).transpose();
    out.tokens.push_back(table.token(rows[i]));
  }
  out.report = psd_check(gram_matrix(points, spec), tol);
  return out;
}

}  // namespace hypercomp
