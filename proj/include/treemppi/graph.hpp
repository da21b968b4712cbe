#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treemppi/kernels.hpp"
#include "treemppi/types.hpp"

namespace treemppi {

using VertexIndex = std::uint32_t;

struct Edge {
    VertexIndex to = 0;
    double cost = 0.0;
};

/// Undirected weighted graph over configurations with a cost-to-go value per
/// vertex. Vertices are stored as structure-of-arrays so the distance kernels
/// can scan them directly.
///
/// Invariants: adjacency is symmetric with identical costs in both directions,
/// every edge cost equals plan_metric of its endpoints, and the goal vertex
/// has value 0.
class PlanningGraph {
public:
    PlanningGraph(const Configuration& goal, const WeightMatrix& weights);

    std::size_t size() const { return xs_.size(); }
    VertexIndex goal_index() const { return goal_index_; }
    const WeightMatrix& weights() const { return weights_; }

    Configuration vertex(VertexIndex v) const { return {xs_[v], ys_[v], thetas_[v]}; }
    std::span<const Edge> neighbors(VertexIndex v) const { return adjacency_[v]; }
    std::span<const double> values() const { return values_; }
    double value(VertexIndex v) const { return values_[v]; }
    kernels::CloudView cloud() const { return {xs_, ys_, thetas_}; }

    std::size_t edge_count() const { return directed_edges_ / 2; }

    /// Appends q with value infinity and bidirectional edges to every listed
    /// neighbor. An exact duplicate of an existing vertex is not added; the
    /// existing index is returned instead.
    VertexIndex insert_vertex(const Configuration& q, std::span<const VertexIndex> neighbors);

    /// Adds the edge u <-> v with cost plan_metric(u, v). No-op if present.
    void connect(VertexIndex u, VertexIndex v);

    /// min over out-neighbors of edge cost + value; infinity if isolated.
    double bellman_backup(VertexIndex v) const;

    /// Gauss-Seidel sweeps of Bellman backups (alternating direction) until a
    /// full sweep changes no value, warm-started from the current values.
    /// Returns the number of sweeps performed, including the final unchanged one.
    std::size_t value_iterate();

    /// Largest |bellman_backup(v) - value(v)| over non-goal vertices; 0 at a fixed point.
    double max_residual() const;

    void set_value(VertexIndex v, double value) { values_[v] = value; }

    std::ptrdiff_t find(const Configuration& q) const;

    /// Rebuilds a graph from persisted parts; edge costs are recomputed.
    /// Throws std::invalid_argument on out-of-range indices, duplicate
    /// vertices, or a nonzero goal value.
    static PlanningGraph assemble(std::span<const Configuration> vertices,
                                  std::span<const std::pair<VertexIndex, VertexIndex>> edges,
                                  std::vector<double> values, VertexIndex goal_index, const WeightMatrix& weights);

private:
    PlanningGraph() = default;

    struct ConfigHash {
        std::size_t operator()(const Configuration& q) const;
    };

    WeightMatrix weights_;
    VertexIndex goal_index_ = 0;
    std::vector<double> xs_, ys_, thetas_;
    std::vector<double> values_;
    std::vector<std::vector<Edge>> adjacency_;
    std::unordered_map<Configuration, VertexIndex, ConfigHash> index_;
    std::size_t directed_edges_ = 0;
};

}  // namespace treemppi
