#include "treemppi/terminal_value.hpp"

#include <numeric>

namespace treemppi {

std::vector<VertexIndex> subset_indices(const PlanningGraph& graph, TreeSubsetMode mode,
                                        std::span<const VertexIndex> min_path) {
    if (mode == TreeSubsetMode::MinPathOnly) return {min_path.begin(), min_path.end()};
    std::vector<VertexIndex> all(graph.size());
    std::iota(all.begin(), all.end(), VertexIndex{0});
    return all;
}

TreeSubset::TreeSubset(const PlanningGraph& graph, std::span<const VertexIndex> indices)
    : graph_index_(indices.begin(), indices.end()) {
    xs_.reserve(indices.size());
    ys_.reserve(indices.size());
    thetas_.reserve(indices.size());
    values_.reserve(indices.size());
    for (VertexIndex v : indices) {
        const Configuration q = graph.vertex(v);
        xs_.push_back(q.x);
        ys_.push_back(q.y);
        thetas_.push_back(q.theta);
        values_.push_back(graph.value(v));
    }
}

RolloutValue rollout_value(const RolloutContext& ctx, const SimState& s, std::span<const Control> actions,
                           bool ignore_initial_collision) {
    RolloutValue out;
    SimState state = s;
    for (std::size_t t = 0; t < actions.size(); ++t) {
        const Control& a = actions[t];
        if (t == 0 && ignore_initial_collision) {
            const auto parts = step_cost_parts(*ctx.env, state, a, *ctx.weights);
            out.step_cost += parts.indicator + parts.action;
        } else {
            out.step_cost += step_cost(*ctx.env, *ctx.robot, state, a, *ctx.weights, ctx.dynamic_obstacles);
        }
        if (out.step_cost == kInfinity) {
            out.terminal = state.q;
            return out;
        }
        state = model_step(state, a, *ctx.dynamics, *ctx.weights);
    }
    out.terminal = state.q;

    const kernels::ValueMatch match =
        kernels::nearest_value(ctx.subset->cloud(), ctx.subset->values(), state.q, *ctx.weights, ctx.search_radius);
    if (match.index >= 0) {
        out.terminal_cost = match.cost;
        out.terminal_node = ctx.subset->graph_index(static_cast<std::size_t>(match.index));
    }
    out.total = out.step_cost + out.terminal_cost;
    return out;
}

}  // namespace treemppi
