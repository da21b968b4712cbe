#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace treemppi {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Wraps an angle to [-pi, pi).
///
/// The SIMD kernels reproduce this exact sequence of operations lane-wise, so
/// any change here must be mirrored in src/kernels/avx2.cpp.
inline double wrap_angle(double angle) {
    double r = angle - kTwoPi * std::floor((angle + kPi) / kTwoPi);
    if (r >= kPi) {
        r -= kTwoPi;
    } else if (r < -kPi) {
        r += kTwoPi;
    }
    return r;
}

enum class RobotKind { Point, Stick };

struct RobotModel {
    RobotKind kind = RobotKind::Point;
    double stick_half_length = 0.0;  // Stick only

    static RobotModel point() { return {RobotKind::Point, 0.0}; }
    static RobotModel stick(double half_length) { return {RobotKind::Stick, half_length}; }

    /// Configuration-space dimension (2 for a point, 3 with heading).
    int dof() const { return kind == RobotKind::Point ? 2 : 3; }
};

/// A point in configuration space. Point robots keep theta at exactly zero so
/// the heading row of every metric contributes +0.0.
struct Configuration {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// Per-step configuration delta: a position step (first order) or a velocity
/// change (second order).
struct Control {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    friend bool operator==(const Control&, const Control&) = default;
    friend Control operator+(const Control& a, const Control& b) { return {a.x + b.x, a.y + b.y, a.theta + b.theta}; }
    friend Control operator*(double s, const Control& a) { return {s * a.x, s * a.y, s * a.theta}; }
};

/// Diagonal of the positive-definite weight matrix W.
struct WeightMatrix {
    double x = 1.0;
    double y = 1.0;
    double theta = 1.0;

    friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;
};

/// Heading weight that makes a half turn cost as much as 2 m of translation.
inline constexpr double kStickHeadingWeight = (2.0 / kPi) * (2.0 / kPi);

/// (a^T W a)^(1/2). Evaluation order is part of the kernel contract.
inline double weighted_norm(const Control& a, const WeightMatrix& w) {
    return std::sqrt(w.x * a.x * a.x + w.y * a.y * a.y + w.theta * a.theta * a.theta);
}

/// Configuration difference to - from with the angular part wrapped.
inline Control difference(const Configuration& from, const Configuration& to) {
    return {to.x - from.x, to.y - from.y, wrap_angle(to.theta - from.theta)};
}

inline Configuration displaced(const Configuration& q, const Control& delta) {
    return {q.x + delta.x, q.y + delta.y, wrap_angle(q.theta + delta.theta)};
}

/// Kinematic planning metric c_hat(q1, q2).
inline double plan_metric(const Configuration& q1, const Configuration& q2, const WeightMatrix& w) {
    return weighted_norm(difference(q1, q2), w);
}

}  // namespace treemppi
