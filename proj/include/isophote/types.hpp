#pragma once
#include <Eigen/Dense>

namespace isophote {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi    = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Robust angle between two nonzero vectors, in [0, pi].
inline double angle_between(const Vec3& a, const Vec3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// Angle between two axes (directions identified up to sign), in [0, pi/2].
inline double axis_angle_between(const Vec3& a, const Vec3& b) {
    const double ang = angle_between(a, b);
    return std::min(ang, kPi - ang);
}

}  // namespace isophote
