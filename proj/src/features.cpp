#include "mgn/features.hpp"

#include <cmath>
#include <numbers>

#include "mgn/error.hpp"

namespace mgn {

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double r = std::remainder(angle, kTwoPi);
  if (r <= -std::numbers::pi) r += kTwoPi;
  return r;
}

double axis_rotation(const Vec2& spatial, const Vec2& reference) {
  const double cross = reference.x() * spatial.y() - reference.y() * spatial.x();
  const double dot = reference.dot(spatial);
  return wrap_angle(std::atan2(cross, dot));
}

namespace {

Vec2 checked_axis(const NodeState& a, const NodeState& b) {
  const Vec2 v = b.x - a.x;
  const double r2 = v.squaredNorm();
  if (!(r2 > 0.0) || !std::isfinite(r2)) {
    fail(ErrorCode::kDegenerateGeometry, "edge features: coincident or non-finite cross positions");
  }
  return v;
}

}  // namespace

EdgeFeatures edge_features(const NodeState& a, const NodeState& b) {
  const Vec2 v = checked_axis(a, b);
  const Vec2 v_ref = b.x_ref - a.x_ref;
  const double turn = axis_rotation(v, v_ref);
  return {wrap_angle((a.theta - a.theta_ref) - turn), wrap_angle((b.theta - b.theta_ref) - turn),
          v.norm() - v_ref.norm()};
}

FeatureJacobian edge_feature_jacobian(const NodeState& a, const NodeState& b) {
  const Vec2 v = checked_axis(a, b);
  const double r2 = v.squaredNorm();
  const Vec2 unit = v / std::sqrt(r2);
  const Vec2 dturn_dxb = Vec2(-v.y(), v.x()) / r2;

  FeatureJacobian J = FeatureJacobian::Zero();
  // theta_a_tilde = theta_a - turn
  J(0, 0) = dturn_dxb.x();
  J(0, 1) = dturn_dxb.y();
  J(0, 2) = 1.0;
  J(0, 3) = -dturn_dxb.x();
  J(0, 4) = -dturn_dxb.y();
  // theta_b_tilde = theta_b - turn
  J(1, 0) = dturn_dxb.x();
  J(1, 1) = dturn_dxb.y();
  J(1, 3) = -dturn_dxb.x();
  J(1, 4) = -dturn_dxb.y();
  J(1, 5) = 1.0;
  // d = |x_b - x_a| - |ref|
  J(2, 0) = -unit.x();
  J(2, 1) = -unit.y();
  J(2, 3) = unit.x();
  J(2, 4) = unit.y();
  return J;
}

}  // namespace mgn
