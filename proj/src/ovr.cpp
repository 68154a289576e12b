#include <algorithm>

#include "hypercomp/classify.hpp"

namespace hypercomp {

bool OvrModel::non_psd_warning() const {
  return std::any_of(models_.begin(), models_.end(), [](const auto& m) {
    const auto* svm = std::get_if<SvmModel>(&m);
    return svm != nullptr && svm->non_psd_warning;
  });
}

OvrModel ovr_train(const Eigen::MatrixXd& representations, std::span<const ClassId> labels,
                   const BinaryTrainer& trainer) {
  if (static_cast<std::size_t>(representations.rows()) != labels.size()) {
    throw std::invalid_argument("ovr_train: representations and labels differ in length");
  }
  OvrModel model;
  model.classes_.assign(labels.begin(), labels.end());
  std::sort(model.classes_.begin(), model.classes_.end());
  model.classes_.erase(std::unique(model.classes_.begin(), model.classes_.end()),
                       model.classes_.end());
  if (model.classes_.size() < 2) {
    throw std::invalid_argument("ovr_train: at least two classes are required");
  }
  model.trainer_ = trainer;
  model.dim_ = representations.cols();

  std::optional<GramMatrix> gram;
  SmoOptions smo;
  if (const auto* ks = std::get_if<KernelSvmTrainer>(&trainer)) {
    gram.emplace(gram_matrix(representations, ks->kernel));
    model.train_points_ = representations;
    smo = ks->smo;
    // One PSD check for all binary problems.
    if (!smo.known_psd && gram->size() <= smo.psd_check_limit) {
      smo.known_psd = psd_check(*gram).psd;
    }
  }

  std::vector<int> binary(labels.size());
  for (ClassId cls : model.classes_) {
    for (std::size_t i = 0; i < labels.size(); ++i) binary[i] = labels[i] == cls ? 1 : -1;
    if (gram) {
      model.models_.emplace_back(svm_train_smo(*gram, binary, smo));
    } else {
      const auto& ls = std::get<LinearSvmTrainer>(trainer);
      model.models_.emplace_back(linear_svm_primal_train(representations, binary, ls.options));
    }
  }
  return model;
}

Eigen::VectorXd ovr_decision_values(const OvrModel& model, const Eigen::VectorXd& query) {
  detail::require_same_dim(model.dim_, query.size());
  Eigen::VectorXd scores(static_cast<Eigen::Index>(model.classes_.size()));
  Eigen::VectorXd row;
  if (const auto* ks = std::get_if<KernelSvmTrainer>(&model.trainer_)) {
    row = kernel_row(model.train_points_, query, ks->kernel);
  }
  for (std::size_t c = 0; c < model.models_.size(); ++c) {
    const auto& m = model.models_[c];
    scores[static_cast<Eigen::Index>(c)] = std::holds_alternative<SvmModel>(m)
                                               ? svm_decision(std::get<SvmModel>(m), row)
                                               : linear_decision(std::get<LinearModel>(m), query);
  }
  return scores;
}

ClassId pick_class(std::span<const ClassId> classes, const Eigen::VectorXd& scores) {
  if (classes.empty() || static_cast<Eigen::Index>(classes.size()) != scores.size()) {
    throw std::invalid_argument("pick_class: classes and scores must be non-empty and aligned");
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < classes.size(); ++c) {
    const double s = scores[static_cast<Eigen::Index>(c)];
    const double b = scores[static_cast<Eigen::Index>(best)];
    if (s > b || (s == b && classes[c] < classes[best])) best = c;
  }
  return classes[best];
}

ClassId ovr_predict(const OvrModel& model, const Eigen::VectorXd& query) {
  return pick_class(model.classes(), ovr_decision_values(model, query));
}

}  // namespace hypercomp
