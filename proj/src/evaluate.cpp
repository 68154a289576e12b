#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hypercomp/harness.hpp"

namespace hypercomp {

EvalReport evaluate(std::span<const int> predictions, std::span<const int> gold) {
  if (predictions.size() != gold.size()) {
    throw std::invalid_argument("evaluate: predictions and gold labels differ in length");
  }
  if (gold.empty()) {
    throw std::invalid_argument("evaluate: nothing to score");
  }
  EvalReport report;
  report.n_test = gold.size();
  report.classes.assign(gold.begin(), gold.end());
  report.classes.insert(report.classes.end(), predictions.begin(), predictions.end());
  std::sort(report.classes.begin(), report.classes.end());
  report.classes.erase(std::unique(report.classes.begin(), report.classes.end()),
                       report.classes.end());

  auto index_of = [&](int cls) {
    return static_cast<Eigen::Index>(
        std::lower_bound(report.classes.begin(), report.classes.end(), cls) -
        report.classes.begin());
  };
  const auto k = static_cast<Eigen::Index>(report.classes.size());
  report.confusion = Eigen::MatrixXi::Zero(k, k);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++report.confusion(index_of(gold[i]), index_of(predictions[i]));
  }

  const double n = static_cast<double>(gold.size());
  const double correct = report.confusion.trace();
  report.accuracy = correct / n;

  double tp = 0;
  double fp = 0;
  double fn = 0;
  for (Eigen::Index c = 0; c < k; ++c) {
    const double diag = report.confusion(c, c);
    tp += diag;
    fp += report.confusion.col(c).sum() - diag;
    fn += report.confusion.row(c).sum() - diag;
  }
  const double precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0 ? tp / (tp + fn) : 0.0;
  report.micro_f1 =
      precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  if (std::abs(report.micro_f1 - report.accuracy) > 1e-12) {
    throw std::logic_error("evaluate: micro-F1 differs from accuracy");
  }
  return report;
}

}  // namespace hypercomp
