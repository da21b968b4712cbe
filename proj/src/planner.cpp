#include "treemppi/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace treemppi {

double steer_radius(const PlannerParams& params, std::size_t vertex_count, int dimension) {
    const double n = static_cast<double>(vertex_count) + 1.0;
    const double shrink = std::pow(std::log(n) / n, 1.0 / dimension);
    return std::max(params.steer_radius_min, params.steer_radius_max * shrink);
}

std::vector<VertexIndex> nearest(const Configuration& q, kernels::CloudView cloud, const WeightMatrix& w,
                                 std::size_t limit, double radius) {
    std::vector<VertexIndex> out;
    if (limit == 0 || cloud.size() == 0) return out;
    std::vector<double> distance(cloud.size());
    kernels::weighted_distances(cloud, q, w, distance);

    if (limit == 1) {
        std::ptrdiff_t best = -1;
        for (std::size_t i = 0; i < distance.size(); ++i) {
            if (distance[i] <= radius && (best < 0 || distance[i] < distance[static_cast<std::size_t>(best)])) {
                best = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (best >= 0) out.push_back(static_cast<VertexIndex>(best));
        return out;
    }

    for (std::size_t i = 0; i < distance.size(); ++i) {
        if (distance[i] <= radius) out.push_back(static_cast<VertexIndex>(i));
    }
    auto closer = [&](VertexIndex a, VertexIndex b) {
        return distance[a] < distance[b] || (distance[a] == distance[b] && a < b);
    };
    if (limit < out.size()) {
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(limit), out.end(), closer);
        out.resize(limit);
    } else {
        std::sort(out.begin(), out.end(), closer);
    }
    return out;
}

Configuration steer(const Configuration& sample, const Configuration& near, const WeightMatrix& w, double radius) {
    const Control delta = difference(near, sample);
    const double d = weighted_norm(delta, w);
    if (d <= radius) return sample;
    return displaced(near, (radius / d) * delta);
}

PlanResult rrt_sharp(const Environment& env, const RobotModel& robot, const WeightMatrix& w,
                     const PlannerParams& params, RandomStream& rng, const InsertObserver& observer) {
    PlanResult result{PlanningGraph(env.goal, w), std::nullopt, 0};
    PlanningGraph& graph = result.graph;

    for (std::size_t iteration = 1; iteration <= params.max_iterations; ++iteration) {
        result.iterations = iteration;
        const Configuration sample = sample_config(env, robot, rng, params.start_bias);
        const VertexIndex near = nearest(sample, graph.cloud(), w, 1)[0];
        const double radius = steer_radius(params, graph.size(), robot.dof());
        const Configuration q = steer(sample, graph.vertex(near), w, radius);
        if (collides(env, robot, q) || graph.find(q) >= 0) continue;

        std::vector<VertexIndex> neighbors = nearest(q, graph.cloud(), w, kUnbounded, radius);
        // The steered point can land a rounding error outside the ball of its parent.
        if (std::find(neighbors.begin(), neighbors.end(), near) == neighbors.end()) neighbors.push_back(near);

        const VertexIndex v = graph.insert_vertex(q, neighbors);
        graph.value_iterate();
        if (observer) observer(graph, v);

        if (!result.start_index) {
            const auto start = graph.find(env.start);
            if (start >= 0 && std::isfinite(graph.value(static_cast<VertexIndex>(start)))) {
                result.start_index = static_cast<VertexIndex>(start);
                if (!params.continue_after_solution) break;
            }
        }
    }
    return result;
}

std::vector<VertexIndex> extract_min_path(const PlanningGraph& graph, VertexIndex start_index) {
    if (!std::isfinite(graph.value(start_index))) {
        throw std::invalid_argument("start vertex has no path to the goal");
    }
    std::vector<VertexIndex> path{start_index};
    VertexIndex current = start_index;
    while (current != graph.goal_index()) {
        double best_total = kInfinity;
        VertexIndex best = current;
        for (const Edge& e : graph.neighbors(current)) {
            const double total = e.cost + graph.value(e.to);
            if (total < best_total || (total == best_total && e.to < best)) {
                best_total = total;
                best = e.to;
            }
        }
        if (best == current || !(graph.value(best) < graph.value(current)) || path.size() > graph.size()) {
            throw std::logic_error("value function is not consistent; min path descent stalled");
        }
        path.push_back(best);
        current = best;
    }
    return path;
}

}  // namespace treemppi
