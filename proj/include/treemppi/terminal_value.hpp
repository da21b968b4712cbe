#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "treemppi/dynamics.hpp"
#include "treemppi/graph.hpp"
#include "treemppi/world.hpp"

namespace treemppi {

enum class TreeSubsetMode { Full, MinPathOnly };

struct ValueQueryParams {
    double search_radius = 0.75;  // R; must exceed the planner's final steer radius
    TreeSubsetMode subset = TreeSubsetMode::Full;
};

/// Full -> every vertex; MinPathOnly -> exactly the vertices of min_path.
std::vector<VertexIndex> subset_indices(const PlanningGraph& graph, TreeSubsetMode mode,
                                        std::span<const VertexIndex> min_path);

/// Packed copy of the chosen vertices and their values, laid out for the
/// nearest_value kernel. Immutable once built; safe to share across threads.
class TreeSubset {
public:
    TreeSubset(const PlanningGraph& graph, std::span<const VertexIndex> indices);

    std::size_t size() const { return graph_index_.size(); }
    kernels::CloudView cloud() const { return {xs_, ys_, thetas_}; }
    std::span<const double> values() const { return values_; }
    VertexIndex graph_index(std::size_t local) const { return graph_index_[local]; }
    std::span<const VertexIndex> graph_indices() const { return graph_index_; }

private:
    std::vector<VertexIndex> graph_index_;
    std::vector<double> xs_, ys_, thetas_, values_;
};

/// Everything a rollout reads. All members are borrowed and must outlive it.
struct RolloutContext {
    const Environment* env = nullptr;
    const RobotModel* robot = nullptr;
    const WeightMatrix* weights = nullptr;
    const DynamicsParams* dynamics = nullptr;
    const TreeSubset* subset = nullptr;
    double search_radius = 0.75;
    /// Dynamic obstacles, frozen at their observed positions for the whole rollout.
    std::span<const DynamicObstacle> dynamic_obstacles;
};

struct RolloutValue {
    double total = kInfinity;
    double step_cost = 0.0;
    double terminal_cost = kInfinity;
    std::ptrdiff_t terminal_node = -1;  // graph index of the best tree vertex, -1 if none
    Configuration terminal;
};

/// Scores a control sequence: sum of step costs along the model rollout plus
/// min over tree vertices within R of the terminal configuration of
/// (plan_metric + value). Collision or no vertex within R yields infinity.
///
/// When ignore_initial_collision is set, the collision term of the first state
/// is dropped. MPPI uses this when the current state is already in contact:
/// that term is shared by every sample and would otherwise zero all weights.
RolloutValue rollout_value(const RolloutContext& ctx, const SimState& s, std::span<const Control> actions,
                           bool ignore_initial_collision = false);

}  // namespace treemppi
