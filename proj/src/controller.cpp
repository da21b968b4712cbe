#include "treemppi/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "treemppi/kernels.hpp"

namespace treemppi {

namespace {

constexpr std::size_t kControlWidth = 3;

void write_row(std::span<double> row, std::span<const Control> controls) {
    for (std::size_t t = 0; t < controls.size(); ++t) {
        row[t * kControlWidth + 0] = controls[t].x;
        row[t * kControlWidth + 1] = controls[t].y;
        row[t * kControlWidth + 2] = controls[t].theta;
    }
}

ControlSequence read_row(std::span<const double> row) {
    ControlSequence out(row.size() / kControlWidth);
    for (std::size_t t = 0; t < out.size(); ++t) {
        out[t] = {row[t * kControlWidth + 0], row[t * kControlWidth + 1], row[t * kControlWidth + 2]};
    }
    return out;
}

template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
    threads = std::clamp<std::size_t>(threads, 1, count == 0 ? 1 : count);
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += threads) fn(i);
        });
    }
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

void accumulate_step_cost(TrialRecord& record, const Environment& env, const SimState& s, const Control& a,
                          const WeightMatrix& w) {
    const auto parts = step_cost_parts(env, s, a, w);
    record.indicator_cost += parts.indicator;
    record.action_cost += parts.action;
    record.true_cost += parts.indicator + parts.action;
}

Outcome classify_end(const Environment& env, const SimState& s, const WeightMatrix& w, bool collided) {
    if (!in_goal(env, s.q, w)) return Outcome::Failure;
    return collided ? Outcome::Collision : Outcome::Success;
}

}  // namespace

std::vector<double> softmax_weights(std::span<const double> costs, double temperature) {
    double c_min = kInfinity;
    for (double c : costs) c_min = std::min(c_min, c);
    std::vector<double> weights(costs.size(), 0.0);
    if (c_min == kInfinity) return weights;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (costs[i] != kInfinity) weights[i] = std::exp(-(costs[i] - c_min) / temperature);
    }
    return weights;
}

bool softmax_average(std::span<const double> costs, std::span<const double> samples, std::size_t row_size,
                     double temperature, std::span<double> mean) {
    const std::vector<double> weights = softmax_weights(costs, temperature);
    double total = 0.0;
    for (double w : weights) total += w;
    if (total == 0.0) return false;

    std::vector<double> acc(row_size, 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] == 0.0) continue;
        kernels::scaled_accumulate(weights[i], samples.subspan(i * row_size, row_size), acc);
    }
    for (std::size_t k = 0; k < row_size; ++k) mean[k] = acc[k] / total;
    return true;
}

MppiUpdate mppi_update(const RolloutContext& ctx, const SimState& s, const ControlSequence& mean,
                       const MppiParams& params, const RandomStream& step_stream, bool ignore_initial_collision) {
    const std::size_t horizon = mean.size();
    const std::size_t row = horizon * kControlWidth;
    const std::size_t q = params.num_samples;
    const bool has_heading = ctx.robot->kind == RobotKind::Stick;
    const double epsilon = ctx.dynamics->epsilon;

    std::vector<double> samples(q * row);
    std::vector<double> costs(q);
    parallel_for(q, params.threads, [&](std::size_t i) {
        RandomStream rng = step_stream.split({"sample", {i}});
        ControlSequence seq(horizon);
        for (std::size_t t = 0; t < horizon; ++t) {
            Control noise{params.sigma.x * rng.gaussian(), params.sigma.y * rng.gaussian(), 0.0};
            if (has_heading) noise.theta = params.sigma.theta * rng.gaussian();
            seq[t] = clamp_action(mean[t] + noise, *ctx.weights, epsilon);
        }
        write_row(std::span(samples).subspan(i * row, row), seq);
        costs[i] = rollout_value(ctx, s, seq, ignore_initial_collision).total;
    });

    MppiUpdate update;
    update.best_cost = *std::min_element(costs.begin(), costs.end());
    const std::vector<double> weights = softmax_weights(costs, params.temperature);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double w : weights) {
        sum += w;
        sum_sq += w * w;
    }
    update.effective_sample_size = sum_sq > 0.0 ? sum * sum / sum_sq : 0.0;

    std::vector<double> new_mean(row);
    write_row(new_mean, mean);
    update.all_infinite = !softmax_average(costs, samples, row, params.temperature, new_mean);
    update.mean = read_row(new_mean);
    update.nominal = rollout_value(ctx, s, update.mean, ignore_initial_collision);
    return update;
}

std::string_view outcome_name(Outcome outcome) {
    switch (outcome) {
        case Outcome::Success: return "success";
        case Outcome::Collision: return "collision";
        case Outcome::Failure: return "failure";
    }
    return "failure";
}

Outcome parse_outcome(std::string_view name) {
    if (name == "success") return Outcome::Success;
    if (name == "collision") return Outcome::Collision;
    if (name == "failure") return Outcome::Failure;
    throw std::invalid_argument("unknown outcome: " + std::string(name));
}

std::string_view controller_name(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::Naive: return "naive";
        case ControllerKind::Min: return "min";
        case ControllerKind::Full: return "full";
    }
    return "full";
}

ControllerKind parse_controller(std::string_view name) {
    if (name == "naive") return ControllerKind::Naive;
    if (name == "min") return ControllerKind::Min;
    if (name == "full") return ControllerKind::Full;
    throw std::invalid_argument("unknown controller: " + std::string(name));
}

TrialRecord mppi_run(const Scenario& scenario, const TreeSubset& subset, const ValueQueryParams& query,
                     const MppiParams& params, TrialSeeds seeds, const StepObserver& observer) {
    const Environment& env = *scenario.env;
    const WeightMatrix& w = scenario.weights;
    RandomStream noise = derive(seeds.environment, {"noise", {}});
    RandomStream obstacle_rng = derive(seeds.environment, {"obstacles", {}});
    const RandomStream sampling = derive(seeds.controller, {"mppi-sample", {}});

    std::vector<DynamicObstacle> obstacles;
    if (scenario.dynamic_obstacles) obstacles = spawn_dynamic_obstacles(env, *scenario.dynamic_obstacles, obstacle_rng);

    RolloutContext ctx;
    ctx.env = &env;
    ctx.robot = &scenario.robot;
    ctx.weights = &w;
    ctx.dynamics = &scenario.dynamics;
    ctx.subset = &subset;
    ctx.search_radius = query.search_radius;

    TrialRecord record;
    SimState s{env.start, Control{}};
    record.trajectory.push_back(s);
    ControlSequence mean(params.horizon);
    std::size_t all_infinite_run = 0;

    while (record.steps < params.max_steps && !in_goal(env, s.q, w)) {
        ctx.dynamic_obstacles = obstacles;
        const bool in_contact = collides(env, scenario.robot, s.q, obstacles);

        const auto started = std::chrono::steady_clock::now();
        MppiUpdate update = mppi_update(ctx, s, mean, params, sampling.split({"step", {record.steps}}), in_contact);
        const double ms = elapsed_ms(started);
        record.iteration_ms.push_back(ms);
        mean = std::move(update.mean);
        all_infinite_run = update.all_infinite ? all_infinite_run + 1 : 0;

        const Control action = mean.front();
        accumulate_step_cost(record, env, s, action, w);
        if (observer) {
            observer({record.steps, s, action, update.best_cost, update.nominal.terminal_node,
                      update.effective_sample_size, ms});
        }
        record.terminal_nodes.push_back(update.nominal.terminal_node);

        s = true_step(s, action, scenario.dynamics, w, scenario.robot, noise);
        if (scenario.dynamic_obstacles) {
            obstacles = step_dynamic_obstacles(std::move(obstacles), env.bounds,
                                               scenario.dynamic_obstacles->perturbation_half_width, obstacle_rng);
        }
        ++record.steps;
        record.trajectory.push_back(s);
        if (collides(env, scenario.robot, s.q, obstacles)) record.collided = true;

        std::rotate(mean.begin(), mean.begin() + 1, mean.end());
        mean.back() = Control{};

        if (all_infinite_run >= params.lost_window) {
            record.lost = true;
            break;
        }
    }
    record.outcome = classify_end(env, s, w, record.collided);
    return record;
}

NaiveFollower::NaiveFollower(std::vector<Configuration> waypoints, WeightMatrix weights, double epsilon,
                             double tolerance)
    : waypoints_(std::move(waypoints)), weights_(weights), epsilon_(epsilon), tolerance_(tolerance) {
    if (waypoints_.empty()) throw std::invalid_argument("naive follower needs at least one waypoint");
}

Control NaiveFollower::step(const Configuration& q) {
    while (target_ + 1 < waypoints_.size() && plan_metric(q, waypoints_[target_], weights_) <= tolerance_) {
        ++target_;
    }
    return clamp_action(difference(q, waypoints_[target_]), weights_, epsilon_);
}

TrialRecord naive_run(const Scenario& scenario, const PlanningGraph& graph, std::span<const VertexIndex> path,
                      std::size_t max_steps, TrialSeeds seeds, double tolerance, const StepObserver& observer) {
    if (scenario.dynamics.order != DynamicsOrder::First) {
        throw std::invalid_argument("the naive controller supports first-order dynamics only");
    }
    if (scenario.dynamic_obstacles && scenario.dynamic_obstacles->count > 0) {
        throw std::invalid_argument("the naive controller cannot handle dynamic obstacles");
    }
    const Environment& env = *scenario.env;
    const WeightMatrix& w = scenario.weights;
    RandomStream noise = derive(seeds.environment, {"noise", {}});

    std::vector<Configuration> waypoints;
    waypoints.reserve(path.size());
    for (VertexIndex v : path) waypoints.push_back(graph.vertex(v));
    NaiveFollower follower(std::move(waypoints), w, scenario.dynamics.epsilon, tolerance);

    TrialRecord record;
    SimState s{env.start, Control{}};
    record.trajectory.push_back(s);
    while (record.steps < max_steps && !in_goal(env, s.q, w)) {
        const auto started = std::chrono::steady_clock::now();
        const Control action = follower.step(s.q);
        const double ms = elapsed_ms(started);
        record.iteration_ms.push_back(ms);
        accumulate_step_cost(record, env, s, action, w);
        if (observer) observer({record.steps, s, action, kInfinity, path[follower.target()], 0.0, ms});

        s = true_step(s, action, scenario.dynamics, w, scenario.robot, noise);
        ++record.steps;
        record.trajectory.push_back(s);
        if (collides_static(env, scenario.robot, s.q)) record.collided = true;
    }
    record.outcome = classify_end(env, s, w, record.collided);
    return record;
}

}  // namespace treemppi
