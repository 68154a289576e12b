#include <algorithm>
#include <map>
#include <queue>
#include <utility>

#include "hypercomp/classify.hpp"

namespace hypercomp {

std::string_view to_string(MetricKind m) {
  return m == MetricKind::poincare ? "poincare" : "euclidean";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
  if (name == "poincare") return MetricKind::poincare;
  if (name == "euclidean") return MetricKind::euclidean;
  return std::nullopt;
}

double metric_distance(MetricKind metric, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return metric == MetricKind::poincare ? poincare_distance(u, v) : euclidean_distance(u, v);
}

KnnModel knn_fit(Eigen::MatrixXd points, std::vector<ClassId> labels, int k, MetricKind metric) {
  if (points.rows() == 0) {
    throw std::invalid_argument("knn_fit: no training points");
  }
  if (static_cast<std::size_t>(points.rows()) != labels.size()) {
    throw std::invalid_argument("knn_fit: points and labels differ in length");
  }
  if (k < 1 || k > points.rows()) {
    throw std::invalid_argument("knn_fit: k must lie in [1, n]");
  }
  if (!points.allFinite()) {
    throw std::invalid_argument("knn_fit: non-finite coordinates");
  }
  if (metric == MetricKind::poincare && points.rowwise().squaredNorm().maxCoeff() >= 1.0) {
    throw std::domain_error("knn_fit: poincare metric needs points inside the unit ball");
  }
  KnnModel model;
  model.points_ = std::move(points);
  model.labels_ = std::move(labels);
  model.k_ = k;
  model.metric_ = metric;
  return model;
}

ClassId knn_predict(const KnnModel& model, const Eigen::VectorXd& query) {
  const auto& pts = model.points();
  detail::require_same_dim(pts.cols(), query.size());

  // Max-heap of the k best (distance, index) pairs seen so far.
  using Entry = std::pair<double, Eigen::Index>;
  std::priority_queue<Entry> best;
  for (Eigen::Index i = 0; i < pts.rows(); ++i) {
    const double d = metric_distance(model.metric(), pts.row(i).transpose(), query);
    if (static_cast<int>(best.size()) < model.k()) {
      best.emplace(d, i);
    } else if (Entry{d, i} < best.top()) {
      best.pop();
      best.emplace(d, i);
    }
  }

  struct Tally {
    int votes = 0;
    double distance = 0.0;
  };
  std::map<ClassId, Tally> tally;
  while (!best.empty()) {
    const auto [d, i] = best.top();
    best.pop();
    auto& t = tally[model.labels()[static_cast<std::size_t>(i)]];
    ++t.votes;
    t.distance += d;
  }

  // std::map iterates in ascending class id, so strict comparisons keep the
  // smallest id on a full tie.
  ClassId winner = tally.begin()->first;
  Tally top = tally.begin()->second;
  for (const auto& [cls, t] : tally) {
    if (t.votes > top.votes || (t.votes == top.votes && t.distance < top.distance)) {
      winner = cls;
      top = t;
    }
  }
  return winner;
}

std::vector<ClassId> knn_predict_rows(const KnnModel& model, const Eigen::MatrixXd& queries) {
  std::vector<ClassId> out;
  out.reserve(static_cast<std::size_t>(queries.rows()));
  for (Eigen::Index i = 0; i < queries.rows(); ++i) {
    out.push_back(knn_predict(model, queries.row(i).transpose()));
  }
  return out;
}

}  // namespace hypercomp
