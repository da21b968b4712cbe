#pragma once

#include <span>

#include "treemppi/rng.hpp"
#include "treemppi/types.hpp"
#include "treemppi/world.hpp"

namespace treemppi {

enum class DynamicsOrder { First, Second };

struct DynamicsParams {
    DynamicsOrder order = DynamicsOrder::First;
    double epsilon = 0.15;    // max weighted norm of an action (and of velocity in second order)
    double dt = 1.0;          // position update timestep for second order
    double noise_std = 0.03;  // per-component Gaussian action noise in the true dynamics
};

/// q plus, in second-order mode, a per-step velocity v with the same layout.
struct SimState {
    Configuration q;
    Control v;

    friend bool operator==(const SimState&, const SimState&) = default;
};

/// Rescales a onto the weighted epsilon-ball if it lies outside.
/// Idempotent: clamp_action(clamp_action(a)) == clamp_action(a) bitwise.
Control clamp_action(const Control& a, const WeightMatrix& w, double epsilon);

/// Noise-free model f_hat. First order: q + a. Second order: q + v*dt, v + a,
/// then the velocity is clamped to the epsilon ball.
SimState model_step(const SimState& s, const Control& a, const DynamicsParams& params, const WeightMatrix& w);

/// Executes a + eta (eta ~ N(0, noise_std^2) on the robot's active components),
/// re-clamped, through model_step.
SimState true_step(const SimState& s, const Control& a, const DynamicsParams& params, const WeightMatrix& w,
                   const RobotModel& robot, RandomStream& rng);

/// Per-step cost: infinity in collision, otherwise 1[q not in goal] + (a^T W a)^(1/2).
double step_cost(const Environment& env, const RobotModel& robot, const SimState& s, const Control& a,
                 const WeightMatrix& w, std::span<const DynamicObstacle> dynamic_obstacles = {});

/// Finite part of step_cost (indicator + action norm), ignoring collision.
struct StepCostParts {
    double indicator = 0.0;
    double action = 0.0;
};
StepCostParts step_cost_parts(const Environment& env, const SimState& s, const Control& a, const WeightMatrix& w);

/// Default weights for a robot: unit translation; heading weighted so a half
/// turn costs 2 m for sticks.
WeightMatrix default_weights(const RobotModel& robot);

}  // namespace treemppi
