#pragma once

// Classifiers over document representations. Samples are the rows of an
// Eigen matrix; class ids are non-negative integers.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "hypercomp/kernels.hpp"

namespace hypercomp {

using ClassId = int;

enum class MetricKind { poincare, euclidean };

std::string_view to_string(MetricKind m);
std::optional<MetricKind> parse_metric(std::string_view name);

// ---------------------------------------------------------------------------
// k-nearest neighbours

class KnnModel {
 public:
  const Eigen::MatrixXd& points() const { return points_; }
  const std::vector<ClassId>& labels() const { return labels_; }
  int k() const { return k_; }
  MetricKind metric() const { return metric_; }

 private:
  friend KnnModel knn_fit(Eigen::MatrixXd, std::vector<ClassId>, int, MetricKind);
  KnnModel() = default;

  Eigen::MatrixXd points_;
  std::vector<ClassId> labels_;
  int k_ = 1;
  MetricKind metric_ = MetricKind::poincare;
};

/// Stores the training data. Poincare-metric models require every row to lie
/// in the unit ball.
KnnModel knn_fit(Eigen::MatrixXd points, std::vector<ClassId> labels, int k, MetricKind metric);

/// Majority vote among the k nearest rows. Distance ties at the k-th rank go to
/// the lower training index; vote ties go to the class with the smaller summed
/// distance, then to the smaller class id.
ClassId knn_predict(const KnnModel& model, const Eigen::VectorXd& query);

std::vector<ClassId> knn_predict_rows(const KnnModel& model, const Eigen::MatrixXd& queries);

double metric_distance(MetricKind metric, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// ---------------------------------------------------------------------------
// Kernel SVM trained by SMO on a precomputed Gram matrix

struct SmoOptions {
  double C = 1.0;
  double kkt_tol = 1e-3;
  /// Iteration budget is max_passes * n working-set updates.
  int max_passes = 1000;
  /// Gram matrices up to this size get an explicit eigenvalue PSD check.
  Eigen::Index psd_check_limit = 300;
  /// Result of an earlier PSD check on the same Gram matrix, if any.
  std::optional<bool> known_psd;
  bool record_objective = false;
};

struct SvmModel {
  Eigen::VectorXd alphas;
  double bias = 0.0;
  std::vector<Eigen::Index> support_indices;
  std::vector<int> labels;  // +1 / -1
  std::optional<KernelSpec> kernel;
  double C = 1.0;

  int iterations = 0;
  /// max over I_up of -y G minus min over I_low of -y G at termination.
  double max_violation = 0.0;
  double dual_objective = 0.0;
  /// Set when the Gram matrix failed the PSD check or showed non-positive
  /// curvature on a working pair; convergence guarantees are void then.
  bool non_psd_warning = false;
  std::vector<double> objective_history;
};

/// Raised when SMO exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Soft-margin dual: maximise sum(a) - 1/2 a^T Q a, Q_ij = y_i y_j K_ij,
/// subject to 0 <= a <= C and sum(a y) = 0, using maximal-violating-pair
/// working sets.
SvmModel svm_train_smo(const GramMatrix& gram, std::span<const int> labels,
                       const SmoOptions& opts = {});

/// sum_i a_i y_i K(x_i, x) + b.
double svm_decision(const SvmModel& model, const Eigen::VectorXd& kernel_row);

double svm_dual_objective(const GramMatrix& gram, std::span<const int> labels,
                          const Eigen::VectorXd& alphas);

// ---------------------------------------------------------------------------
// Primal linear SVM

struct LinearSvmOptions {
  double C = 1.0;
  int epochs = 200;
  std::uint64_t seed = 42;
};

struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  /// Primal objective after each epoch.
  std::vector<double> objective_history;
};

/// Minimises 1/2 |w|^2 + C sum max(0, 1 - y (w.x + b))^2 by shuffled
/// stochastic gradient passes. An epoch that would raise the objective is
/// rolled back and retried with half the step size.
LinearModel linear_svm_primal_train(const Eigen::MatrixXd& vectors, std::span<const int> labels,
                                    const LinearSvmOptions& opts = {});

double linear_decision(const LinearModel& model, const Eigen::VectorXd& x);

double linear_svm_objective(const LinearModel& model, const Eigen::MatrixXd& vectors,
                            std::span<const int> labels, double C);

// ---------------------------------------------------------------------------
// One-vs-rest multiclass

struct KernelSvmTrainer {
  KernelSpec kernel = KernelSpec::geodesic_laplacian();
  SmoOptions smo{};
};

struct LinearSvmTrainer {
  LinearSvmOptions options{};
};

using BinaryTrainer = std::variant<KernelSvmTrainer, LinearSvmTrainer>;

class OvrModel {
 public:
  const std::vector<ClassId>& classes() const { return classes_; }
  std::size_t size() const { return classes_.size(); }
  const BinaryTrainer& trainer() const { return trainer_; }
  const std::vector<std::variant<SvmModel, LinearModel>>& models() const { return models_; }
  Eigen::Index dim() const { return dim_; }

  /// True if any binary kernel model carries the non-PSD warning.
  bool non_psd_warning() const;

 private:
  friend OvrModel ovr_train(const Eigen::MatrixXd&, std::span<const ClassId>,
                            const BinaryTrainer&);
  friend Eigen::VectorXd ovr_decision_values(const OvrModel&, const Eigen::VectorXd&);

  std::vector<ClassId> classes_;
  BinaryTrainer trainer_;
  std::vector<std::variant<SvmModel, LinearModel>> models_;
  Eigen::MatrixXd train_points_;  // kept for kernel evaluation
  Eigen::Index dim_ = 0;
};

OvrModel ovr_train(const Eigen::MatrixXd& representations, std::span<const ClassId> labels,
                   const BinaryTrainer& trainer);

/// One decision value per class, in classes() order.
Eigen::VectorXd ovr_decision_values(const OvrModel& model, const Eigen::VectorXd& query);

/// Class with the largest score; ties go to the smaller class id.
ClassId pick_class(std::span<const ClassId> classes, const Eigen::VectorXd& scores);

/// Argmax of the decision values, resolved by pick_class.
ClassId ovr_predict(const OvrModel& model, const Eigen::VectorXd& query);

}  // namespace hypercomp
