#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "treemppi/graph.hpp"
#include "treemppi/rng.hpp"
#include "treemppi/world.hpp"

namespace treemppi {

struct PlannerParams {
    double steer_radius_max = 2.0;  // M0
    double steer_radius_min = 0.5;  // floor of the shrinking schedule
    double start_bias = kDefaultStartBias;
    std::size_t max_iterations = 20000;
    std::uint64_t rng_seed = 0;
    /// Keep growing the tree after the start joins it (until max_iterations).
    bool continue_after_solution = false;
};

/// M(n) = max(M_min, M0 * (log(n + 1) / (n + 1))^(1/d)) for n = |vertices|.
double steer_radius(const PlannerParams& params, std::size_t vertex_count, int dimension);

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Up to `limit` vertices of the cloud closest to q under the weighted metric,
/// excluding those farther than `radius`; ascending by distance, ties by index.
std::vector<VertexIndex> nearest(const Configuration& q, kernels::CloudView cloud, const WeightMatrix& w,
                                 std::size_t limit = kUnbounded, double radius = kInfinity);

/// Projects `sample` onto the metric ball of radius M around `near`.
Configuration steer(const Configuration& sample, const Configuration& near, const WeightMatrix& w, double radius);

struct PlanResult {
    PlanningGraph graph;
    std::optional<VertexIndex> start_index;  // empty on failure
    std::size_t iterations = 0;
    bool success() const { return start_index.has_value(); }
};

/// Called after every successful insertion + value_iterate.
using InsertObserver = std::function<void(const PlanningGraph&, VertexIndex inserted)>;

/// RRT# grown backwards from the goal. Each iteration samples (start-biased),
/// steers from the nearest vertex, and, if the steered point is free, connects
/// it to every vertex within the current steer radius and re-solves the value
/// function. Stops once the start is in the tree with a finite value, or after
/// max_iterations. Only vertices are collision checked.
PlanResult rrt_sharp(const Environment& env, const RobotModel& robot, const WeightMatrix& w,
                     const PlannerParams& params, RandomStream& rng, const InsertObserver& observer = {});

/// Greedy value descent from start to goal (ties by lowest index).
/// Throws std::invalid_argument if the start has infinite value.
std::vector<VertexIndex> extract_min_path(const PlanningGraph& graph, VertexIndex start_index);

}  // namespace treemppi
