#pragma once

// Centroid schemes that fold a sequence of word points into one document
// point. All schemes other than emean are built from Mobius operations and
// (weighted) geodesic midpoints, so they are equivariant under rotations and,
// except the naive centroid, under left gyrotranslations.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypercomp/gyroball.hpp"

namespace hypercomp {

enum class CompositionMethod { emean, naive, lcf, lcb, lca, fnw, bnw };

inline constexpr CompositionMethod kAllMethods[] = {
    CompositionMethod::emean, CompositionMethod::naive, CompositionMethod::lcf,
    CompositionMethod::lcb,   CompositionMethod::lca,   CompositionMethod::fnw,
    CompositionMethod::bnw};

inline std::string_view to_string(CompositionMethod m) {
  switch (m) {
    case CompositionMethod::emean: return "emean";
    case CompositionMethod::naive: return "naive";
    case CompositionMethod::lcf: return "lcf";
    case CompositionMethod::lcb: return "lcb";
    case CompositionMethod::lca: return "lca";
    case CompositionMethod::fnw: return "fnw";
    case CompositionMethod::bnw: return "bnw";
  }
  return "?";
}

inline std::optional<CompositionMethod> parse_method(std::string_view name) {
  for (auto m : kAllMethods) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

/// True for the schemes that need Poincare-ball inputs (everything but emean).
inline bool is_hyperbolic(CompositionMethod m) { return m != CompositionMethod::emean; }

template <typename Scalar = double>
struct CompositionConfig {
  Scalar overflow_eps = Scalar(1e-5);
  BallParams<Scalar> ball{};

  void validate() const {
    if (!(overflow_eps > 0) || !(overflow_eps <= Scalar(1e-3))) {
      throw std::invalid_argument("overflow_eps must lie in (0, 1e-3]");
    }
    ball.validate();
  }
};

/// Non-empty ordered run of weighted points sharing one dimension.
template <typename Scalar = double>
class PointSequence {
 public:
  explicit PointSequence(std::vector<WeightedPoint<Scalar>> points) : points_(std::move(points)) {
    if (points_.empty()) {
      throw std::invalid_argument("point sequence must be non-empty");
    }
    const auto d = points_.front().point.dim();
    for (const auto& p : points_) {
      detail::require_same_dim(d, p.point.dim());
    }
  }

  /// Unit weight per point.
  static PointSequence uniform(const std::vector<BallPoint<Scalar>>& points) {
    std::vector<WeightedPoint<Scalar>> weighted;
    weighted.reserve(points.size());
    for (const auto& p : points) weighted.emplace_back(p, Scalar(1));
    return PointSequence(std::move(weighted));
  }

  std::size_t size() const { return points_.size(); }
  Eigen::Index dim() const { return points_.front().point.dim(); }
  std::span<const WeightedPoint<Scalar>> points() const { return points_; }
  const WeightedPoint<Scalar>& operator[](std::size_t i) const { return points_[i]; }

  PointSequence reversed() const {
    return PointSequence(std::vector<WeightedPoint<Scalar>>(points_.rbegin(), points_.rend()));
  }

 private:
  std::vector<WeightedPoint<Scalar>> points_;
};

/// Weighted arithmetic mean of the coordinates. Convexity of the ball keeps
/// the result inside it.
template <typename Scalar>
BallPoint<Scalar> compose_emean(const PointSequence<Scalar>& seq) {
  Vector<Scalar> sum = Vector<Scalar>::Zero(seq.dim());
  Scalar total = 0;
  for (const auto& wp : seq.points()) {
    sum += wp.weight * wp.point.coords();
    total += wp.weight;
  }
  return BallPoint<Scalar>::trusted(sum / total);
}

/// Left-folded Mobius sum scaled by 1/n. Whenever the running sum reaches the
/// numerical boundary it is shrunk by (1 - overflow_eps). Weights are ignored.
template <typename Scalar>
BallPoint<Scalar> compose_naive(const PointSequence<Scalar>& seq,
                                const CompositionConfig<Scalar>& cfg = {}) {
  cfg.validate();
  const auto& ball = cfg.ball;
  const Scalar limit = ball.max_norm();
  auto shrink_if_saturated = [&](BallPoint<Scalar> p) {
    if (p.norm() >= limit) {
      return BallPoint<Scalar>::trusted(p.coords() * (Scalar(1) - cfg.overflow_eps));
    }
    return p;
  };

  auto points = seq.points();
  if (points.size() == 1) {
    return points.front().point;
  }
  BallPoint<Scalar> sum = points.front().point;
  for (std::size_t i = 1; i < points.size(); ++i) {
    sum = shrink_if_saturated(mobius_add(sum, points[i].point, ball));
  }
  return mobius_scale(Scalar(1) / static_cast<Scalar>(points.size()), sum, ball);
}

/// Linear forward centroid: the running centroid of x_1..x_{i-1} (carrying
/// their total weight) is weighted-midpointed with x_i.
template <typename Scalar>
BallPoint<Scalar> compose_lfc(const PointSequence<Scalar>& seq,
                              const BallParams<Scalar>& ball = {}) {
  auto points = seq.points();
  BallPoint<Scalar> acc = points.front().point;
  Scalar acc_weight = points.front().weight;
  for (std::size_t i = 1; i < points.size(); ++i) {
    acc = weighted_midpoint(acc, points[i].point, acc_weight, points[i].weight, ball);
    acc_weight += points[i].weight;
  }
  return acc;
}

/// Linear backward centroid: the forward centroid of the reversed sequence.
template <typename Scalar>
BallPoint<Scalar> compose_lbc(const PointSequence<Scalar>& seq,
                              const BallParams<Scalar>& ball = {}) {
  return compose_lfc(seq.reversed(), ball);
}

/// Linear average centroid: midpoint of the forward and backward centroids.
template <typename Scalar>
BallPoint<Scalar> compose_lac(const PointSequence<Scalar>& seq,
                              const BallParams<Scalar>& ball = {}) {
  return midpoint(compose_lfc(seq, ball), compose_lbc(seq, ball), ball);
}

namespace detail {

template <typename Scalar>
std::pair<BallPoint<Scalar>, Scalar> tree_centroid(std::span<const WeightedPoint<Scalar>> pts,
                                                   const BallParams<Scalar>& ball) {
  if (pts.size() == 1) {
    return {pts.front().point, pts.front().weight};
  }
  if (pts.size() == 2) {
    return {weighted_midpoint(pts[0].point, pts[1].point, pts[0].weight, pts[1].weight, ball),
            pts[0].weight + pts[1].weight};
  }
  const std::size_t half = pts.size() / 2;
  auto [left, left_weight] = tree_centroid(pts.first(half), ball);
  auto [right, right_weight] = tree_centroid(pts.subspan(half), ball);
  return {weighted_midpoint(left, right, left_weight, right_weight, ball),
          left_weight + right_weight};
}

}  // namespace detail

/// Binary tree centroid (fnw): split at floor(n/2), recurse, and join the two
/// halves with a midpoint weighted by each half's total mass.
template <typename Scalar>
BallPoint<Scalar> compose_btc(const PointSequence<Scalar>& seq,
                              const BallParams<Scalar>& ball = {}) {
  return detail::tree_centroid(seq.points(), ball).first;
}

/// bnw: the tree centroid of the reversed sequence.
template <typename Scalar>
BallPoint<Scalar> compose_bnw(const PointSequence<Scalar>& seq,
                              const BallParams<Scalar>& ball = {}) {
  return compose_btc(seq.reversed(), ball);
}

template <typename Scalar>
BallPoint<Scalar> compose(CompositionMethod method, const PointSequence<Scalar>& seq,
                          const CompositionConfig<Scalar>& cfg = {}) {
  switch (method) {
    case CompositionMethod::emean: return compose_emean(seq);
    case CompositionMethod::naive: return compose_naive(seq, cfg);
    case CompositionMethod::lcf: return compose_lfc(seq, cfg.ball);
    case CompositionMethod::lcb: return compose_lbc(seq, cfg.ball);
    case CompositionMethod::lca: return compose_lac(seq, cfg.ball);
    case CompositionMethod::fnw: return compose_btc(seq, cfg.ball);
    case CompositionMethod::bnw: return compose_bnw(seq, cfg.ball);
  }
  throw std::invalid_argument("unknown composition method");
}

}  // namespace hypercomp
