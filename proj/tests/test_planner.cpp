#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "treemppi/io.hpp"
#include "treemppi/planner.hpp"

using namespace treemppi;

namespace {

struct Points {
    std::vector<double> x, y, theta;
    kernels::CloudView view() const { return {x, y, theta}; }
};

std::vector<VertexIndex> nearest_oracle(const Configuration& q, const Points& p, const WeightMatrix& w,
                                        std::size_t limit, double radius) {
    std::vector<std::pair<double, VertexIndex>> all;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
        const double d = plan_metric(q, {p.x[i], p.y[i], p.theta[i]}, w);
        if (d <= radius) all.emplace_back(d, static_cast<VertexIndex>(i));
    }
    std::sort(all.begin(), all.end());
    std::vector<VertexIndex> out;
    for (std::size_t i = 0; i < all.size() && i < limit; ++i) out.push_back(all[i].second);
    return out;
}

}  // namespace

TEST(SteerRadius, ScheduleShape) {
    const PlannerParams p;
    EXPECT_NEAR(steer_radius(p, 1, 2), 2.0 * std::sqrt(std::log(2.0) / 2.0), 1e-15);
    EXPECT_EQ(steer_radius(p, 100000, 2), 0.5);
    EXPECT_EQ(steer_radius(p, 100000, 3), 0.5);
    double largest = 0.0;
    for (std::size_t n = 1; n < 5000; ++n) {
        EXPECT_LE(steer_radius(p, n + 1, 2), steer_radius(p, n, 2) + 0.05);
        largest = std::max({largest, steer_radius(p, n, 2), steer_radius(p, n, 3)});
    }
    // Shipped obstacles are at least this thick; see the world tests.
    EXPECT_LT(largest, 1.45);
    // Query radius stays above every late-stage steer radius.
    EXPECT_GT(ValueQueryParams{}.search_radius, p.steer_radius_min);
}

TEST(Nearest, Examples) {
    Points single{{1}, {1}, {0}};
    EXPECT_EQ(nearest({5, 5, 0}, single.view(), {}, 1), (std::vector<VertexIndex>{0}));
    Points three{{0.5, 1.0, 2.0}, {0, 0, 0}, {0, 0, 0}};
    EXPECT_EQ(nearest({0, 0, 0}, three.view(), {}, kUnbounded, 1.5), (std::vector<VertexIndex>{0, 1}));
    EXPECT_TRUE(nearest({0, 0, 0}, three.view(), {}, kUnbounded, 0.1).empty());
    EXPECT_TRUE(nearest({0, 0, 0}, three.view(), {}, 0).empty());
    Points ties{{1, 0, -1, 0}, {0, 1, 0, -1}, {0, 0, 0, 0}};
    EXPECT_EQ(nearest({0, 0, 0}, ties.view(), {}, 1), (std::vector<VertexIndex>{0}));
    EXPECT_EQ(nearest({0, 0, 0}, ties.view(), {}, 2), (std::vector<VertexIndex>{0, 1}));
}

TEST(Nearest, MatchesLinearScanOracle) {
    RandomStream rng = derive(1, {"nearest", {}});
    for (int trial = 0; trial < 200; ++trial) {
        Points p;
        const bool heading = trial % 2 == 1;
        for (int i = 0; i < 1000; ++i) {
            // Coarse grid so exact distance ties are common.
            p.x.push_back(std::round(rng.uniform(0, 10) * 4) / 4);
            p.y.push_back(std::round(rng.uniform(0, 10) * 4) / 4);
            p.theta.push_back(heading ? rng.uniform(-kPi, kPi) : 0.0);
        }
        const WeightMatrix w{1, 1, heading ? kStickHeadingWeight : 1.0};
        const Configuration q{std::round(rng.uniform(0, 10) * 4) / 4, std::round(rng.uniform(0, 10) * 4) / 4,
                              heading ? rng.uniform(-kPi, kPi) : 0.0};
        const std::size_t limit = trial % 4 == 0 ? kUnbounded : 1 + rng.bounded(50);
        const double radius = trial % 5 == 0 ? kInfinity : rng.uniform(0, 4);
        ASSERT_EQ(nearest(q, p.view(), w, limit, radius), nearest_oracle(q, p, w, limit, radius));
    }
}

TEST(Steer, Examples) {
    EXPECT_EQ(steer({1, 1, 0}, {1, 1, 0}, {}, 0.5), (Configuration{1, 1, 0}));
    EXPECT_EQ(steer({4, 0, 0}, {0, 0, 0}, {}, 1.0), (Configuration{1, 0, 0}));
    EXPECT_EQ(steer({0.3, 0, 0}, {0, 0, 0}, {}, 1.0), (Configuration{0.3, 0, 0}));
}

TEST(Steer, StaysWithinRadius) {
    RandomStream rng = derive(2, {"steer", {}});
    for (int i = 0; i < 100000; ++i) {
        const WeightMatrix w{rng.uniform(0.2, 3), rng.uniform(0.2, 3), rng.uniform(0.2, 3)};
        const Configuration a{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(-kPi, kPi)};
        const Configuration b{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(-kPi, kPi)};
        const double m = rng.uniform(0.05, 3.0);
        const Configuration s = steer(a, b, w, m);
        const double d = plan_metric(a, b, w);
        ASSERT_LE(plan_metric(s, b, w), m + 1e-9);
        ASSERT_NEAR(plan_metric(s, b, w), std::min(d, m), 1e-9);
        ASSERT_GE(s.theta, -kPi);
        ASSERT_LT(s.theta, kPi);
    }
}

TEST(RrtSharp, EmptyWorldNearGoal) {
    const Environment env = oracle::empty_environment({4, 5, 0}, {5, 5, 0});
    RandomStream rng = derive(3, {"planner", {}});
    const PlanResult r = rrt_sharp(env, RobotModel::point(), {}, {}, rng);
    ASSERT_TRUE(r.success());
    EXPECT_LT(r.iterations, 200u);
    const double v = r.graph.value(*r.start_index);
    EXPECT_GE(v, 1.0);
    EXPECT_LE(v, 1.5);
    EXPECT_EQ(r.graph.vertex(*r.start_index), env.start);
}

TEST(RrtSharp, OutputInvariants) {
    for (const char* name : {"gate", "bugtrap", "forest", "blob"}) {
        for (const RobotModel& robot : {RobotModel::point(), RobotModel::stick(0.2)}) {
            const Environment env = adapted_to(load_environment(oracle::env_path(name)), robot);
            const WeightMatrix w = default_weights(robot);
            RandomStream rng = derive(4, {name, {}});
            const PlanResult r = rrt_sharp(env, robot, w, {}, rng);
            ASSERT_TRUE(r.success()) << name;
            const PlanningGraph& g = r.graph;
            for (VertexIndex v = 0; v < g.size(); ++v) ASSERT_FALSE(collides(env, robot, g.vertex(v)));
            EXPECT_EQ(g.value(g.goal_index()), 0.0);
            EXPECT_EQ(g.max_residual(), 0.0);
            const auto d = oracle::dijkstra_to_goal(g);
            int zeros = 0;
            for (VertexIndex v = 0; v < g.size(); ++v) {
                if (std::isfinite(d[v])) {
                    ASSERT_NEAR(g.value(v), d[v], 1e-9);
                } else {
                    ASSERT_EQ(g.value(v), kInfinity);
                }
                zeros += g.value(v) == 0.0;
            }
            EXPECT_EQ(zeros, 1);
            EXPECT_GE(g.value(*r.start_index), plan_metric(env.start, env.goal, w));
        }
    }
}

TEST(RrtSharp, BitReproducible) {
    const Environment env = load_environment(oracle::env_path("forest"));
    auto plan = [&] {
        RandomStream rng = derive(5, {"planner", {}});
        return rrt_sharp(env, RobotModel::point(), {}, {}, rng);
    };
    const PlanResult a = plan();
    const PlanResult b = plan();
    ASSERT_EQ(a.graph.size(), b.graph.size());
    for (VertexIndex v = 0; v < a.graph.size(); ++v) {
        ASSERT_EQ(a.graph.vertex(v), b.graph.vertex(v));
        ASSERT_EQ(a.graph.value(v), b.graph.value(v));
    }
    EXPECT_EQ(a.start_index, b.start_index);
}

TEST(RrtSharp, GateSucceedsAcrossSeeds) {
    const Environment env = load_environment(oracle::env_path("gate"));
    int successes = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        RandomStream rng = derive(seed, {"planner", {}});
        successes += rrt_sharp(env, RobotModel::point(), {}, {}, rng).success();
    }
    EXPECT_GE(successes, 19);
}

TEST(RrtSharp, FailsWhenStartIsUnreachable) {
    Environment env = oracle::empty_environment({1, 1, 0}, {9, 9, 0});
    // Wall across the whole world.
    env.static_obstacles.emplace_back(ConvexPolygon{{{0, 4}, {10, 4}, {10, 6}, {0, 6}}});
    PlannerParams p;
    p.max_iterations = 500;
    RandomStream rng = derive(6, {"planner", {}});
    const PlanResult r = rrt_sharp(env, RobotModel::point(), {}, p, rng);
    EXPECT_FALSE(r.success());
    EXPECT_EQ(r.iterations, 500u);
}

TEST(RrtSharp, ObserverSeesEveryInsertion) {
    const Environment env = load_environment(oracle::env_path("gate"));
    std::size_t calls = 0;
    RandomStream rng = derive(7, {"planner", {}});
    const PlanResult r = rrt_sharp(env, RobotModel::point(), {}, {}, rng,
                                   [&](const PlanningGraph& g, VertexIndex v) {
                                       ++calls;
                                       EXPECT_EQ(v + 1, g.size());
                                   });
    EXPECT_EQ(calls + 1, r.graph.size());
}

TEST(MinPath, Chain) {
    PlanningGraph g({0, 0, 0}, {});
    std::vector<VertexIndex> a{0};
    const VertexIndex v1 = g.insert_vertex({1, 0, 0}, a);
    std::vector<VertexIndex> b{v1};
    const VertexIndex v2 = g.insert_vertex({2, 0, 0}, b);
    g.value_iterate();
    EXPECT_EQ(extract_min_path(g, v2), (std::vector<VertexIndex>{v2, v1, 0}));
    EXPECT_EQ(extract_min_path(g, 0), (std::vector<VertexIndex>{0}));
    const VertexIndex lone = g.insert_vertex({7, 7, 0}, {});
    EXPECT_THROW(extract_min_path(g, lone), std::invalid_argument);
}

TEST(MinPath, MatchesDijkstraGreedyOnRandomGraphs) {
    RandomStream rng = derive(8, {"paths", {}});
    for (int trial = 0; trial < 100; ++trial) {
        PlanningGraph g = oracle::random_radius_graph(rng, 20 + rng.bounded(150), 10.0, 1.8);
        g.value_iterate();
        const auto d = oracle::dijkstra_to_goal(g);
        for (VertexIndex s = 0; s < g.size(); s += 7) {
            if (!std::isfinite(d[s])) continue;
            const auto path = extract_min_path(g, s);
            ASSERT_EQ(path.front(), s);
            ASSERT_EQ(path.back(), g.goal_index());
            ASSERT_LE(path.size(), g.size());
            double cost = 0.0;
            for (std::size_t k = 1; k < path.size(); ++k) {
                ASSERT_LT(g.value(path[k]), g.value(path[k - 1]));
                cost += plan_metric(g.vertex(path[k - 1]), g.vertex(path[k]), g.weights());
            }
            ASSERT_NEAR(cost, g.value(s), 1e-9);
            // Oracle descent over Dijkstra distances.
            std::vector<VertexIndex> expect{s};
            while (expect.back() != g.goal_index()) {
                double best = kInfinity;
                VertexIndex next = expect.back();
                for (const Edge& e : g.neighbors(expect.back())) {
                    const double t = e.cost + d[e.to];
                    if (t < best - 1e-12 || (std::abs(t - best) <= 1e-12 && e.to < next)) {
                        best = t;
                        next = e.to;
                    }
                }
                expect.push_back(next);
            }
            ASSERT_EQ(path, expect);
        }
    }
}
