#pragma once

// Poincare-ball gyrovector algebra: Mobius addition and scalar
// multiplication, geodesics, (weighted) midpoints and the Poincare distance.
//
// Points live in the open ball of radius s. Every operation returns a point
// strictly inside the ball; results pushed onto or past the boundary by
// rounding are pulled back to radius s * (1 - boundary_eps).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace hypercomp {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar = double>
struct BallParams {
  Scalar s = Scalar(1);
  Scalar boundary_eps = Scalar(1e-7);

  void validate() const {
    if (!(s > 0) || !std::isfinite(s)) {
      throw std::invalid_argument("ball radius s must be positive and finite");
    }
    if (!(boundary_eps > 0) || !(boundary_eps <= Scalar(1e-3))) {
      throw std::invalid_argument("boundary_eps must lie in (0, 1e-3]");
    }
  }

  /// Largest norm a stored point may take.
  Scalar max_norm() const { return s * (Scalar(1) - boundary_eps); }
};

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.array().isFinite().all();
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

// Pulls a vector with norm >= s back to norm s * (1 - boundary_eps).
template <typename Scalar>
void clamp_in_place(Vector<Scalar>& v, const BallParams<Scalar>& params) {
  const Scalar n = v.norm();
  if (n >= params.s) {
    v *= params.max_norm() / n;
  }
}

}  // namespace detail

/// A point of the open Poincare ball. Construction checks the invariants;
/// vectors that overshoot the boundary by at most boundary_eps (relative) are
/// clamped, anything further out is rejected.
template <typename Scalar = double>
class BallPoint {
 public:
  using VectorType = Vector<Scalar>;

  explicit BallPoint(VectorType coords, const BallParams<Scalar>& params = {})
      : coords_(std::move(coords)) {
    params.validate();
    if (coords_.size() < 1) {
      throw std::invalid_argument("ball point needs dimension >= 1");
    }
    if (!detail::all_finite(coords_)) {
      throw std::invalid_argument("ball point has non-finite coordinates");
    }
    const Scalar n = coords_.norm();
    if (n >= params.s) {
      if (n > params.s * (Scalar(1) + params.boundary_eps)) {
        throw std::domain_error("point lies outside the ball (norm " + std::to_string(n) + ")");
      }
      coords_ *= params.max_norm() / n;
    }
  }

  static BallPoint origin(Eigen::Index dim) {
    if (dim < 1) {
      throw std::invalid_argument("ball point needs dimension >= 1");
    }
    return BallPoint(VectorType::Zero(dim), Trusted{});
  }

  /// Wraps coordinates already known to satisfy the invariants (used by the
  /// operations below, which clamp their own outputs).
  static BallPoint trusted(VectorType coords) { return BallPoint(std::move(coords), Trusted{}); }

  const VectorType& coords() const { return coords_; }
  Eigen::Index dim() const { return coords_.size(); }
  Scalar norm() const { return coords_.norm(); }
  Scalar squaredNorm() const { return coords_.squaredNorm(); }
  Scalar operator[](Eigen::Index i) const { return coords_[i]; }

  bool operator==(const BallPoint& other) const {
    return coords_.size() == other.coords_.size() && coords_ == other.coords_;
  }

 private:
  struct Trusted {};
  BallPoint(VectorType coords, Trusted) : coords_(std::move(coords)) {}

  VectorType coords_;
};

/// A ball point carrying a positive mass, as used by the weighted centroids.
template <typename Scalar = double>
struct WeightedPoint {
  BallPoint<Scalar> point;
  Scalar weight;

  WeightedPoint(BallPoint<Scalar> p, Scalar w = Scalar(1)) : point(std::move(p)), weight(w) {
    if (!(weight > 0) || !std::isfinite(weight)) {
      throw std::invalid_argument("point weight must be positive and finite");
    }
  }
};

/// Forces an arbitrary finite vector into the ball: vectors with norm >= s are
/// rescaled to norm s * (1 - boundary_eps), others pass through unchanged.
template <typename Scalar>
BallPoint<Scalar> clamp_to_ball(Vector<Scalar> x, const BallParams<Scalar>& params = {}) {
  params.validate();
  if (x.size() < 1) {
    throw std::invalid_argument("ball point needs dimension >= 1");
  }
  if (!detail::all_finite(x)) {
    throw std::invalid_argument("cannot clamp a non-finite vector");
  }
  detail::clamp_in_place(x, params);
  return BallPoint<Scalar>::trusted(std::move(x));
}

template <typename Scalar>
BallPoint<Scalar> mobius_neg(const BallPoint<Scalar>& a) {
  return BallPoint<Scalar>::trusted(-a.coords());
}

/// Mobius addition a (+) b in the ball of radius s:
///
///   ((1 + 2<a,b>/s^2 + |b|^2/s^2) a + (1 - |a|^2/s^2) b)
///   ----------------------------------------------------
///        1 + 2<a,b>/s^2 + |a|^2 |b|^2 / s^4
///
/// Neither commutative nor associative.
template <typename Scalar>
BallPoint<Scalar> mobius_add(const BallPoint<Scalar>& a, const BallPoint<Scalar>& b,
                             const BallParams<Scalar>& params = {}) {
  detail::require_same_dim(a.dim(), b.dim());
  const Scalar inv_s2 = Scalar(1) / (params.s * params.s);
  const Scalar ab = a.coords().dot(b.coords());
  const Scalar a2 = a.squaredNorm();
  const Scalar b2 = b.squaredNorm();
  const Scalar coef_a = Scalar(1) + Scalar(2) * inv_s2 * ab + inv_s2 * b2;
  const Scalar coef_b = Scalar(1) - inv_s2 * a2;
  const Scalar denom = Scalar(1) + Scalar(2) * inv_s2 * ab + inv_s2 * inv_s2 * a2 * b2;
  Vector<Scalar> out = (coef_a * a.coords() + coef_b * b.coords()) / denom;
  if (!detail::all_finite(out)) {
    throw std::domain_error("mobius_add produced a non-finite result");
  }
  detail::clamp_in_place(out, params);
  return BallPoint<Scalar>::trusted(std::move(out));
}

/// Mobius scalar multiplication r (x) x = s tanh(r artanh(|x|/s)) x/|x|.
/// The origin maps to itself; |x|/s is capped at 1 - boundary_eps before the
/// artanh so near-boundary inputs stay finite.
template <typename Scalar>
BallPoint<Scalar> mobius_scale(Scalar r, const BallPoint<Scalar>& x,
                               const BallParams<Scalar>& params = {}) {
  if (!std::isfinite(r)) {
    throw std::invalid_argument("mobius_scale: non-finite scalar");
  }
  const Scalar n = x.norm();
  if (n == Scalar(0)) {
    return x;
  }
  using std::atanh;
  using std::tanh;
  const Scalar ratio = std::min(n / params.s, Scalar(1) - params.boundary_eps);
  const Scalar out_norm = params.s * tanh(r * atanh(ratio));
  Vector<Scalar> out = x.coords() * (out_norm / n);
  detail::clamp_in_place(out, params);
  return BallPoint<Scalar>::trusted(std::move(out));
}

/// Point at parameter t on the geodesic from a to b: a (+) ((-a (+) b) (x) t).
template <typename Scalar>
BallPoint<Scalar> geodesic_point(const BallPoint<Scalar>& a, const BallPoint<Scalar>& b, Scalar t,
                                 const BallParams<Scalar>& params = {}) {
  if (!(t >= Scalar(0) && t <= Scalar(1))) {
    throw std::invalid_argument("geodesic parameter t must lie in [0, 1]");
  }
  detail::require_same_dim(a.dim(), b.dim());
  const auto direction = mobius_add(mobius_neg(a), b, params);
  return mobius_add(a, mobius_scale(t, direction, params), params);
}

template <typename Scalar>
BallPoint<Scalar> midpoint(const BallPoint<Scalar>& a, const BallPoint<Scalar>& b,
                           const BallParams<Scalar>& params = {}) {
  return geodesic_point(a, b, Scalar(0.5), params);
}

/// Weighted midpoint: the geodesic point at t = m_b / (m_a + m_b), so the
/// heavier endpoint pulls the result towards itself.
template <typename Scalar>
BallPoint<Scalar> weighted_midpoint(const BallPoint<Scalar>& a, const BallPoint<Scalar>& b,
                                    Scalar m_a, Scalar m_b,
                                    const BallParams<Scalar>& params = {}) {
  if (!(m_a > 0) || !(m_b > 0) || !std::isfinite(m_a) || !std::isfinite(m_b)) {
    throw std::invalid_argument("midpoint weights must be positive and finite");
  }
  return geodesic_point(a, b, m_b / (m_a + m_b), params);
}

/// Poincare distance on the unit ball,
///
///   d(u, v) = arccosh(1 + 2 |u - v|^2 / ((1 - |u|^2)(1 - |v|^2))),
///
/// evaluated through the equivalent form 2 asinh(sqrt(x)) with
/// x = |u - v|^2 / ((1 - |u|^2)(1 - |v|^2)), which never feeds arccosh an
/// argument below 1 and keeps full relative precision for nearby points.
template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar poincare_distance(const Eigen::MatrixBase<DerivedU>& u,
                                            const Eigen::MatrixBase<DerivedV>& v) {
  using Scalar = typename DerivedU::Scalar;
  detail::require_same_dim(u.size(), v.size());
  const Scalar u2 = u.squaredNorm();
  const Scalar v2 = v.squaredNorm();
  if (!(u2 < Scalar(1)) || !(v2 < Scalar(1))) {
    throw std::domain_error("poincare_distance: point outside the unit ball");
  }
  const Scalar diff2 = (u - v).squaredNorm();
  const Scalar x = diff2 / ((Scalar(1) - u2) * (Scalar(1) - v2));
  using std::asinh;
  using std::sqrt;
  return Scalar(2) * asinh(sqrt(x));
}

template <typename Scalar>
Scalar poincare_distance(const BallPoint<Scalar>& u, const BallPoint<Scalar>& v) {
  return poincare_distance(u.coords(), v.coords());
}

/// Distance for a ball of radius s: coordinates are rescaled into the unit
/// ball first.
template <typename Scalar>
Scalar poincare_distance(const BallPoint<Scalar>& u, const BallPoint<Scalar>& v,
                         const BallParams<Scalar>& params) {
  const Scalar inv_s = Scalar(1) / params.s;
  return poincare_distance(Vector<Scalar>(u.coords() * inv_s), Vector<Scalar>(v.coords() * inv_s));
}

template <typename DerivedU, typename DerivedV>
typename DerivedU::Scalar euclidean_distance(const Eigen::MatrixBase<DerivedU>& u,
                                             const Eigen::MatrixBase<DerivedV>& v) {
  detail::require_same_dim(u.size(), v.size());
  return (u - v).norm();
}

}  // namespace hypercomp
