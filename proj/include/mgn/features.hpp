#pragma once

#include <Eigen/Core>

#include "mgn/lattice.hpp"

namespace mgn {

using Vec3 = Eigen::Vector3d;
using FeatureJacobian = Eigen::Matrix<double, 3, 6>;

/// Node feature: spatial and reference pose of one cross.
struct NodeState {
  Vec2 x = Vec2::Zero();
  double theta = 0.0;
  Vec2 x_ref = Vec2::Zero();
  double theta_ref = 0.0;
};

/// Rigid-motion-invariant description of one spring.
struct EdgeFeatures {
  double theta_a = 0.0;  // rotation of cross a relative to the spring axis
  double theta_b = 0.0;
  double d = 0.0;        // elongation, absolute length units

  Vec3 as_vector() const { return {theta_a, theta_b, d}; }
  static EdgeFeatures from_vector(const Vec3& z) { return {z[0], z[1], z[2]}; }
};

/// Maps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Change of the spring's polar angle, wrap(beta - beta_ref), evaluated as the
/// signed angle between the reference and the current spring vectors.
double axis_rotation(const Vec2& spatial, const Vec2& reference);

/// Throws kDegenerateGeometry when the two crosses coincide.
EdgeFeatures edge_features(const NodeState& a, const NodeState& b);

/// Rows (theta_a, theta_b, d); columns (x_a1, x_a2, theta_a, x_b1, x_b2, theta_b).
FeatureJacobian edge_feature_jacobian(const NodeState& a, const NodeState& b);

}  // namespace mgn
