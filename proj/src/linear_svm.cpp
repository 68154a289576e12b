#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hypercomp/classify.hpp"
#include "shuffle.hpp"

namespace hypercomp {

double linear_decision(const LinearModel& model, const Eigen::VectorXd& x) {
  detail::require_same_dim(model.weights.size(), x.size());
  return model.weights.dot(x) + model.bias;
}

double linear_svm_objective(const LinearModel& model, const Eigen::MatrixXd& vectors,
                            std::span<const int> labels, double C) {
  const Eigen::VectorXd margins =
      (vectors * model.weights).array() + model.bias;
  double loss = 0.0;
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const double slack = std::max(0.0, 1.0 - labels[static_cast<std::size_t>(i)] * margins[i]);
    loss += slack * slack;
  }
  return 0.5 * model.weights.squaredNorm() + C * loss;
}

LinearModel linear_svm_primal_train(const Eigen::MatrixXd& vectors, std::span<const int> labels,
                                    const LinearSvmOptions& opts) {
  const Eigen::Index n = vectors.rows();
  if (n == 0 || static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("linear svm: vectors and labels must be non-empty and aligned");
  }
  if (!vectors.allFinite()) {
    throw std::invalid_argument("linear svm: non-finite features");
  }
  bool pos = false;
  bool neg = false;
  for (int y : labels) {
    if (y == 1) pos = true;
    else if (y == -1) neg = true;
    else throw std::invalid_argument("linear svm: labels must be +1 or -1");
  }
  if (!pos || !neg) {
    throw std::invalid_argument("linear svm: both classes must be present");
  }
  if (!(opts.C > 0) || opts.epochs < 1) {
    throw std::invalid_argument("linear svm: C must be positive and epochs >= 1");
  }

  const double C = opts.C;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double radius2 = vectors.rowwise().squaredNorm().maxCoeff();
  // Inverse of the largest per-sample curvature.
  double step = 1.0 / (inv_n + 2.0 * C * (radius2 + 1.0));

  std::mt19937_64 engine(opts.seed);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  LinearModel model;
  model.weights = Eigen::VectorXd::Zero(vectors.cols());
  double objective = linear_svm_objective(model, vectors, labels, C);

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    detail::fisher_yates(order, engine);
    LinearModel trial = model;
    const double eta = step / (1.0 + 0.01 * epoch);
    for (Eigen::Index i : order) {
      const double y = labels[static_cast<std::size_t>(i)];
      const double slack = 1.0 - y * (vectors.row(i).dot(trial.weights) + trial.bias);
      trial.weights *= (1.0 - eta * inv_n);
      if (slack > 0) {
        const double g = 2.0 * C * slack * y;
        trial.weights += eta * g * vectors.row(i).transpose();
        trial.bias += eta * g;
      }
    }
    const double trial_objective = linear_svm_objective(trial, vectors, labels, C);
    if (std::isfinite(trial_objective) && trial_objective <= objective) {
      model.weights = std::move(trial.weights);
      model.bias = trial.bias;
      objective = trial_objective;
    } else {
      step *= 0.5;
    }
    model.objective_history.push_back(objective);
  }
  return model;
}

}  // namespace hypercomp
