#include "treemppi/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "treemppi/rng.hpp"

namespace treemppi {

std::size_t PlanningGraph::ConfigHash::operator()(const Configuration& q) const {
    // +0.0 and -0.0 compare equal, so hash them alike.
    auto bits = [](double v) { return std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v); };
    return mix64(bits(q.x) ^ mix64(bits(q.y) ^ mix64(bits(q.theta))));
}

PlanningGraph::PlanningGraph(const Configuration& goal, const WeightMatrix& weights) : weights_(weights) {
    xs_.push_back(goal.x);
    ys_.push_back(goal.y);
    thetas_.push_back(goal.theta);
    values_.push_back(0.0);
    adjacency_.emplace_back();
    index_.emplace(goal, 0);
}

std::ptrdiff_t PlanningGraph::find(const Configuration& q) const {
    const auto it = index_.find(q);
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

VertexIndex PlanningGraph::insert_vertex(const Configuration& q, std::span<const VertexIndex> neighbors) {
    for (VertexIndex n : neighbors) {
        if (n >= size()) throw std::out_of_range("neighbor index out of range");
    }
    if (const auto existing = find(q); existing >= 0) return static_cast<VertexIndex>(existing);

    const auto v = static_cast<VertexIndex>(size());
    xs_.push_back(q.x);
    ys_.push_back(q.y);
    thetas_.push_back(q.theta);
    values_.push_back(kInfinity);
    adjacency_.emplace_back();
    index_.emplace(q, v);
    for (VertexIndex n : neighbors) connect(v, n);
    return v;
}

void PlanningGraph::connect(VertexIndex u, VertexIndex v) {
    if (u == v) return;
    auto& out = adjacency_[u];
    if (std::any_of(out.begin(), out.end(), [v](const Edge& e) { return e.to == v; })) return;
    const double cost = plan_metric(vertex(u), vertex(v), weights_);
    out.push_back({v, cost});
    adjacency_[v].push_back({u, cost});
    directed_edges_ += 2;
}

PlanningGraph PlanningGraph::assemble(std::span<const Configuration> vertices,
                                      std::span<const std::pair<VertexIndex, VertexIndex>> edges,
                                      std::vector<double> values, VertexIndex goal_index, const WeightMatrix& weights) {
    if (vertices.empty() || goal_index >= vertices.size() || values.size() != vertices.size()) {
        throw std::invalid_argument("inconsistent graph sizes");
    }
    PlanningGraph g;
    g.weights_ = weights;
    g.goal_index_ = goal_index;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Configuration& q = vertices[i];
        if (!g.index_.emplace(q, static_cast<VertexIndex>(i)).second) {
            throw std::invalid_argument("duplicate vertex " + std::to_string(i));
        }
        g.xs_.push_back(q.x);
        g.ys_.push_back(q.y);
        g.thetas_.push_back(q.theta);
    }
    g.adjacency_.resize(vertices.size());
    for (const auto& [u, v] : edges) {
        if (u >= vertices.size() || v >= vertices.size() || u == v) throw std::invalid_argument("bad edge endpoint");
        g.connect(u, v);
    }
    for (double value : values) {
        if (std::isnan(value) || value < 0.0) throw std::invalid_argument("values must be nonnegative");
    }
    if (values[goal_index] != 0.0) throw std::invalid_argument("goal value must be zero");
    g.values_ = std::move(values);
    return g;
}

double PlanningGraph::bellman_backup(VertexIndex v) const {
    double best = kInfinity;
    for (const Edge& e : adjacency_[v]) best = std::min(best, e.cost + values_[e.to]);
    return best;
}

std::size_t PlanningGraph::value_iterate() {
    const std::size_t n = size();
    // Edge costs are nonnegative, so n + 1 sweeps always reach the fixed point.
    const std::size_t max_sweeps = n + 1;
    bool forward = true;
    for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
        bool changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            const auto v = static_cast<VertexIndex>(forward ? k : n - 1 - k);
            if (v == goal_index_) continue;
            const double updated = bellman_backup(v);
            if (updated != values_[v]) {
                values_[v] = updated;
                changed = true;
            }
        }
        if (!changed) return sweep;
        forward = !forward;
    }
    throw std::logic_error("value_iterate did not converge");
}

double PlanningGraph::max_residual() const {
    double worst = 0.0;
    for (VertexIndex v = 0; v < size(); ++v) {
        if (v == goal_index_) continue;
        const double backup = bellman_backup(v);
        const double current = values_[v];
        if (backup == current) continue;
        if (std::isinf(backup) || std::isinf(current)) return kInfinity;
        worst = std::max(worst, std::abs(backup - current));
    }
    return worst;
}

}  // namespace treemppi
