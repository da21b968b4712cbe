#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unistd.h>

namespace oracle {

std::vector<double> dijkstra_to_goal(const PlanningGraph& g) {
    std::vector<double> dist(g.size(), kInfinity);
    using Item = std::pair<double, VertexIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[g.goal_index()] = 0.0;
    heap.push({0.0, g.goal_index()});
    while (!heap.empty()) {
        const auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (const Edge& e : g.neighbors(u)) {
            const double nd = d + e.cost;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                heap.push({nd, e.to});
            }
        }
    }
    return dist;
}

PlanningGraph random_radius_graph(RandomStream& rng, std::size_t n, double extent, double radius,
                                  const WeightMatrix& w, bool with_heading) {
    auto draw = [&] {
        Configuration q{rng.uniform(0.0, extent), rng.uniform(0.0, extent), 0.0};
        if (with_heading) q.theta = rng.uniform(-kPi, kPi);
        return q;
    };
    PlanningGraph g(draw(), w);
    while (g.size() < n) {
        const Configuration q = draw();
        std::vector<VertexIndex> nbrs;
        for (VertexIndex v = 0; v < g.size(); ++v) {
            const Configuration p = g.vertex(v);
            const double dx = p.x - q.x, dy = p.y - q.y;
            if (std::sqrt(dx * dx + dy * dy) <= radius) nbrs.push_back(v);
        }
        g.insert_vertex(q, nbrs);
    }
    return g;
}

bool point_in_shape(const StaticObstacle& shape, Point2 p) { return penetration(shape, p) >= 0.0; }

double penetration(const StaticObstacle& shape, Point2 p) {
    if (const auto* c = std::get_if<Circle>(&shape)) {
        return c->radius - std::hypot(p.x - c->center.x, p.y - c->center.y);
    }
    // Convex CCW polygon: min over edges of the signed distance to the inside.
    const auto& v = std::get<ConvexPolygon>(shape).vertices;
    double depth = kInfinity;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i], b = v[(i + 1) % v.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len = std::hypot(ex, ey);
        const double inside = (ex * (p.y - a.y) - ey * (p.x - a.x)) / len;
        depth = std::min(depth, inside);
    }
    return depth;
}

static bool point_collides(const Environment& env, Point2 p) {
    const Bounds& b = env.bounds;
    if (p.x <= b.xmin || p.x >= b.xmax || p.y <= b.ymin || p.y >= b.ymax) return true;
    for (const auto& s : env.static_obstacles) {
        if (point_in_shape(s, p)) return true;
    }
    return false;
}

bool stick_collides_sampled(const Environment& env, const RobotModel& robot, const Configuration& q, int samples) {
    const double c = std::cos(q.theta), s = std::sin(q.theta);
    for (int k = 0; k < samples; ++k) {
        const double t = -1.0 + 2.0 * k / (samples - 1);
        const Point2 p{q.x + t * robot.stick_half_length * c, q.y + t * robot.stick_half_length * s};
        if (point_collides(env, p)) return true;
    }
    return false;
}

RolloutOracle brute_rollout(const Environment& env, const RobotModel& robot, const WeightMatrix& w,
                            const DynamicsParams& dyn, const PlanningGraph& g, const std::vector<VertexIndex>& subset,
                            double radius, const SimState& s, const std::vector<Control>& actions,
                            const std::vector<DynamicObstacle>& dyn_obs) {
    RolloutOracle out;
    SimState state = s;
    double step_sum = 0.0;
    for (const Control& a : actions) {
        if (collides(env, robot, state.q, dyn_obs)) return out;
        const double indicator = plan_metric(state.q, env.goal, w) <= env.goal_radius ? 0.0 : 1.0;
        step_sum += indicator + weighted_norm(a, w);
        state = model_step(state, a, dyn, w);
    }
    double best = kInfinity;
    for (VertexIndex v : subset) {
        const double d = plan_metric(state.q, g.vertex(v), w);
        if (d > radius) continue;
        const double c = d + g.value(v);
        if (c < best || (c == best && out.terminal_node >= 0 && v < static_cast<VertexIndex>(out.terminal_node))) {
            if (c == kInfinity) continue;
            best = c;
            out.terminal_node = v;
        }
    }
    out.total = step_sum + best;
    return out;
}

Environment random_environment(RandomStream& rng, int obstacles) {
    Environment env;
    env.name = "random";
    env.bounds = {0.0, 0.0, 10.0, 10.0};
    for (int i = 0; i < obstacles; ++i) {
        const Point2 c{rng.uniform(1.0, 9.0), rng.uniform(1.0, 9.0)};
        const double r = rng.uniform(0.2, 1.2);
        if (rng.uniform() < 0.5) {
            env.static_obstacles.emplace_back(Circle{c, r});
        } else {
            const int sides = 3 + static_cast<int>(rng.bounded(5));
            const double phase = rng.uniform(0.0, kTwoPi);
            ConvexPolygon poly;
            for (int k = 0; k < sides; ++k) {
                const double a = phase + kTwoPi * k / sides;
                poly.vertices.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
            }
            env.static_obstacles.emplace_back(std::move(poly));
        }
    }
    env.start = {0.5, 0.5, 0.0};
    env.goal = {9.5, 9.5, 0.0};
    return env;
}

Environment empty_environment(Configuration start, Configuration goal, double goal_radius) {
    Environment env;
    env.name = "empty";
    env.bounds = {0.0, 0.0, 10.0, 10.0};
    env.start = start;
    env.goal = goal;
    env.goal_radius = goal_radius;
    return env;
}

std::filesystem::path data_dir() { return TREEMPPI_DATA_DIR; }
std::filesystem::path env_path(const std::string& name) { return data_dir() / "envs" / (name + ".json"); }

std::filesystem::path scratch_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("treemppi-" + tag + "-" + std::to_string(static_cast<long>(::getpid())));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace oracle
