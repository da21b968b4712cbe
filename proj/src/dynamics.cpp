#include "treemppi/dynamics.hpp"

namespace treemppi {

Control clamp_action(const Control& a, const WeightMatrix& w, double epsilon) {
    const double norm = weighted_norm(a, w);
    if (norm <= epsilon) return a;
    Control out = (epsilon / norm) * a;
    while (weighted_norm(out, w) > epsilon) out = (1.0 - 0x1.0p-50) * out;
    return out;
}

SimState model_step(const SimState& s, const Control& a, const DynamicsParams& params, const WeightMatrix& w) {
    if (params.order == DynamicsOrder::First) return {displaced(s.q, a), Control{}};
    SimState next;
    next.q = displaced(s.q, params.dt * s.v);
    next.v = clamp_action(s.v + a, w, params.epsilon);
    return next;
}

SimState true_step(const SimState& s, const Control& a, const DynamicsParams& params, const WeightMatrix& w,
                   const RobotModel& robot, RandomStream& rng) {
    Control perturbed = a;
    if (params.noise_std > 0.0) {
        perturbed.x += params.noise_std * rng.gaussian();
        perturbed.y += params.noise_std * rng.gaussian();
        if (robot.kind == RobotKind::Stick) perturbed.theta += params.noise_std * rng.gaussian();
    }
    return model_step(s, clamp_action(perturbed, w, params.epsilon), params, w);
}

StepCostParts step_cost_parts(const Environment& env, const SimState& s, const Control& a, const WeightMatrix& w) {
    return {in_goal(env, s.q, w) ? 0.0 : 1.0, weighted_norm(a, w)};
}

double step_cost(const Environment& env, const RobotModel& robot, const SimState& s, const Control& a,
                 const WeightMatrix& w, std::span<const DynamicObstacle> dynamic_obstacles) {
    if (collides(env, robot, s.q, dynamic_obstacles)) return kInfinity;
    const auto parts = step_cost_parts(env, s, a, w);
    return parts.indicator + parts.action;
}

WeightMatrix default_weights(const RobotModel& robot) {
    return {1.0, 1.0, robot.kind == RobotKind::Stick ? kStickHeadingWeight : 1.0};
}

}  // namespace treemppi
