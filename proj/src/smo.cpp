#include <algorithm>
#include <cmath>
#include <limits>

#include "hypercomp/classify.hpp"

namespace hypercomp {

namespace {

constexpr double kTau = 1e-12;

void check_labels(std::span<const int> labels, Eigen::Index n) {
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("svm: label count does not match the Gram matrix");
  }
  bool pos = false;
  bool neg = false;
  for (int y : labels) {
    if (y == 1) {
      pos = true;
    } else if (y == -1) {
      neg = true;
    } else {
      throw std::invalid_argument("svm: labels must be +1 or -1");
    }
  }
  if (!pos || !neg) {
    throw std::invalid_argument("svm: both classes must be present");
  }
}

}  // namespace

double svm_dual_objective(const GramMatrix& gram, std::span<const int> labels,
                          const Eigen::VectorXd& alphas) {
  const Eigen::Index n = gram.size();
  Eigen::VectorXd ya(n);
  for (Eigen::Index i = 0; i < n; ++i) ya[i] = labels[static_cast<std::size_t>(i)] * alphas[i];
  return alphas.sum() - 0.5 * ya.dot(gram.entries() * ya);
}

SvmModel svm_train_smo(const GramMatrix& gram, std::span<const int> labels,
                       const SmoOptions& opts) {
  const Eigen::Index n = gram.size();
  if (n == 0) {
    throw std::invalid_argument("svm: empty Gram matrix");
  }
  check_labels(labels, n);
  if (!(opts.C > 0) || !std::isfinite(opts.C)) {
    throw std::invalid_argument("svm: C must be positive and finite");
  }
  if (!(opts.kkt_tol > 0)) {
    throw std::invalid_argument("svm: kkt_tol must be positive");
  }
  if (opts.max_passes < 1) {
    throw std::invalid_argument("svm: max_passes must be >= 1");
  }

  const auto& K = gram.entries();
  const double C = opts.C;
  auto y = [&](Eigen::Index i) { return static_cast<double>(labels[static_cast<std::size_t>(i)]); };

  SvmModel model;
  model.C = C;
  model.kernel = gram.spec();
  model.labels.assign(labels.begin(), labels.end());
  if (opts.known_psd) {
    model.non_psd_warning = !*opts.known_psd;
  } else if (n <= opts.psd_check_limit) {
    model.non_psd_warning = !psd_check(gram).psd;
  } else if (gram.spec() && !gram.spec()->known_mercer()) {
    model.non_psd_warning = true;
  }

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // Gradient of 1/2 a^T Q a - e^T a.
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  auto in_up = [&](Eigen::Index t) {
    return (y(t) > 0 && alpha[t] < C) || (y(t) < 0 && alpha[t] > 0);
  };
  auto in_low = [&](Eigen::Index t) {
    return (y(t) < 0 && alpha[t] < C) || (y(t) > 0 && alpha[t] > 0);
  };
  auto dual_objective = [&] { return -0.5 * alpha.dot(grad - Eigen::VectorXd::Ones(n)); };

  const long long budget = static_cast<long long>(opts.max_passes) * static_cast<long long>(n);
  long long iter = 0;
  double violation = 0.0;
  if (opts.record_objective) model.objective_history.push_back(0.0);

  while (true) {
    Eigen::Index i = -1;
    Eigen::Index j = -1;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double f = -y(t) * grad[t];
      if (in_up(t) && f > g_max) {
        g_max = f;
        i = t;
      }
      if (in_low(t) && f < g_min) {
        g_min = f;
        j = t;
      }
    }
    violation = (i < 0 || j < 0) ? 0.0 : g_max - g_min;
    if (violation <= opts.kkt_tol) break;
    if (iter >= budget) {
      throw ConvergenceError("svm: SMO did not converge within " +
                                 std::to_string(opts.max_passes) +
                                 " passes (residual KKT violation " + std::to_string(violation) +
                                 ")",
                             violation, static_cast<int>(iter));
    }

    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad < -1e-10 * std::max(1.0, std::abs(K(i, i)) + std::abs(K(j, j)))) {
      model.non_psd_warning = true;
    }
    if (quad <= 0) quad = kTau;

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    if (y(i) != y(j)) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = sum;
        }
        if (alpha[i] < 0) {
          alpha[i] = 0;
          alpha[j] = sum;
        }
      }
    }

    const double di = alpha[i] - old_ai;
    const double dj = alpha[j] - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) {
      grad[t] += y(t) * (y(i) * K(t, i) * di + y(j) * K(t, j) * dj);
    }
    ++iter;
    if (opts.record_objective) model.objective_history.push_back(dual_objective());
  }

  // Bias from the free vectors, or the middle of the feasible interval when
  // every multiplier sits at a bound.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad[t];
    if (alpha[t] >= C) {
      if (y(t) < 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[t] <= 0) {
      if (y(t) > 0) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      free_sum += yg;
      ++free_count;
    }
  }
  double rho = 0.0;
  if (free_count > 0) {
    rho = free_sum / free_count;
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = 0.5 * (ub + lb);
  } else {
    rho = std::isfinite(ub) ? ub : lb;
  }

  model.alphas = alpha;
  model.bias = -rho;
  model.iterations = static_cast<int>(iter);
  model.max_violation = violation;
  model.dual_objective = dual_objective();
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha[t] > 1e-10) model.support_indices.push_back(t);
  }
  return model;
}

double svm_decision(const SvmModel& model, const Eigen::VectorXd& kernel_row) {
  if (kernel_row.size() != model.alphas.size()) {
    throw std::invalid_argument("svm_decision: kernel row length does not match the model");
  }
  double score = model.bias;
  for (Eigen::Index i = 0; i < model.alphas.size(); ++i) {
    if (model.alphas[i] != 0.0) {
      score += model.alphas[i] * model.labels[static_cast<std::size_t>(i)] * kernel_row[i];
    }
  }
  return score;
}

}  // namespace hypercomp
