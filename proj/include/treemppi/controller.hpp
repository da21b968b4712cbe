#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "treemppi/dynamics.hpp"
#include "treemppi/graph.hpp"
#include "treemppi/rng.hpp"
#include "treemppi/terminal_value.hpp"
#include "treemppi/world.hpp"

namespace treemppi {

using ControlSequence = std::vector<Control>;

struct MppiParams {
    std::size_t horizon = 20;       // H
    std::size_t num_samples = 256;  // Q
    double temperature = 0.2;       // lambda
    Control sigma{0.05, 0.05, 0.05};  // per-component standard deviation of the sampling noise
    std::size_t max_steps = 800;
    std::size_t lost_window = 25;  // consecutive all-infinite updates before giving up
    std::size_t threads = 1;       // rollout evaluation threads inside one update
};

/// Unnormalized weights exp(-(c_i - c_min) / lambda) with c_min the smallest
/// finite cost; infinite costs get weight 0. All zeros if nothing is finite.
std::vector<double> softmax_weights(std::span<const double> costs, double temperature);

/// Weighted mean of row-major samples (one row of `row_size` doubles per cost).
/// Returns false, leaving `mean` untouched, when every cost is infinite.
bool softmax_average(std::span<const double> costs, std::span<const double> samples, std::size_t row_size,
                     double temperature, std::span<double> mean);

struct MppiUpdate {
    ControlSequence mean;
    bool all_infinite = false;
    double best_cost = kInfinity;
    double effective_sample_size = 0.0;
    RolloutValue nominal;  // rollout of the updated mean
};

/// One MPPI iteration from state s: draw Q clamped perturbations of the mean,
/// score each with rollout_value, and return their softmax-weighted average.
/// Sample i draws from step_stream.split({"sample", {i}}), so the result does
/// not depend on evaluation order or thread count.
MppiUpdate mppi_update(const RolloutContext& ctx, const SimState& s, const ControlSequence& mean,
                       const MppiParams& params, const RandomStream& step_stream,
                       bool ignore_initial_collision = false);

enum class Outcome { Success, Collision, Failure };
std::string_view outcome_name(Outcome outcome);
Outcome parse_outcome(std::string_view name);

enum class ControllerKind { Naive, Min, Full };
std::string_view controller_name(ControllerKind kind);
ControllerKind parse_controller(std::string_view name);

struct TrialRecord {
    Outcome outcome = Outcome::Failure;
    bool collided = false;     // touched an obstacle at some executed state
    bool lost = false;         // MPPI had no finite sample for lost_window steps
    double true_cost = 0.0;    // accumulated finite step cost of executed (state, action) pairs
    double indicator_cost = 0.0;
    double action_cost = 0.0;
    std::size_t steps = 0;
    std::vector<SimState> trajectory;
    std::vector<std::ptrdiff_t> terminal_nodes;  // per control step; MPPI only
    std::vector<double> iteration_ms;            // wall clock per control decision; not deterministic
};

/// Static-vs-dynamic setup shared by all controllers for one trial.
struct Scenario {
    const Environment* env = nullptr;
    RobotModel robot;
    WeightMatrix weights;
    DynamicsParams dynamics;
    std::optional<DynamicObstacleSpec> dynamic_obstacles;  // empty: static world
};

/// Seeds for one trial. The environment seed drives actuation noise and
/// obstacle motion; the controller seed drives MPPI sampling.
struct TrialSeeds {
    std::uint64_t environment = 0;
    std::uint64_t controller = 0;
};

struct StepTrace {
    std::size_t step = 0;
    SimState state;
    Control action;
    double best_cost = kInfinity;
    std::ptrdiff_t terminal_node = -1;
    double effective_sample_size = 0.0;
    double iteration_ms = 0.0;
};
using StepObserver = std::function<void(const StepTrace&)>;

/// Closed-loop MPPI execution from env.start until the goal, the step budget,
/// or lost_window consecutive all-infinite updates.
TrialRecord mppi_run(const Scenario& scenario, const TreeSubset& subset, const ValueQueryParams& query,
                     const MppiParams& params, TrialSeeds seeds, const StepObserver& observer = {});

/// Waypoint follower: aims straight at the next vertex of the path, advancing
/// when within `tolerance` of the current one.
class NaiveFollower {
public:
    NaiveFollower(std::vector<Configuration> waypoints, WeightMatrix weights, double epsilon, double tolerance);

    Control step(const Configuration& q);
    std::size_t target() const { return target_; }

private:
    std::vector<Configuration> waypoints_;
    WeightMatrix weights_;
    double epsilon_;
    double tolerance_;
    std::size_t target_ = 0;
};

inline constexpr double kDefaultWaypointTolerance = 0.1;

/// Runs the naive follower along `path`. Only first-order, static scenarios
/// are supported; throws std::invalid_argument otherwise.
TrialRecord naive_run(const Scenario& scenario, const PlanningGraph& graph, std::span<const VertexIndex> path,
                      std::size_t max_steps, TrialSeeds seeds, double tolerance = kDefaultWaypointTolerance,
                      const StepObserver& observer = {});

}  // namespace treemppi
