#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "treemppi/controller.hpp"
#include "treemppi/io.hpp"
#include "treemppi/planner.hpp"

using namespace treemppi;

namespace {

// A straight chain of tree vertices from the start region to the goal.
struct Corridor {
    Environment env;
    PlanningGraph graph;
    std::vector<VertexIndex> path;
};

Corridor corridor(Configuration start, Configuration goal, double spacing = 0.5) {
    Corridor c{oracle::empty_environment(start, goal), PlanningGraph(goal, {}), {}};
    const double len = plan_metric(start, goal, {});
    const int n = static_cast<int>(std::ceil(len / spacing));
    VertexIndex prev = 0;
    for (int k = 1; k <= n; ++k) {
        const double t = std::min(1.0, k * spacing / len);
        const Configuration q{goal.x + t * (start.x - goal.x), goal.y + t * (start.y - goal.y), 0};
        std::vector<VertexIndex> nb{prev};
        prev = c.graph.insert_vertex(q, nb);
    }
    c.graph.value_iterate();
    c.path = extract_min_path(c.graph, prev);
    return c;
}


}  // namespace

TEST(Softmax, SingleSampleIsReturned) {
    const std::vector<double> costs{3.7};
    const std::vector<double> samples{0.1, -0.2, 0.3};
    std::vector<double> mean(3, 9.0);
    ASSERT_TRUE(softmax_average(costs, samples, 3, 0.2, mean));
    EXPECT_EQ(mean, samples);
}

TEST(Softmax, EqualCostsAverage) {
    const std::vector<double> costs{2.0, 2.0};
    const std::vector<double> samples{0.1, 0.2, 0.3, 0.5};
    std::vector<double> mean(2);
    ASSERT_TRUE(softmax_average(costs, samples, 2, 0.7, mean));
    EXPECT_DOUBLE_EQ(mean[0], 0.2);
    EXPECT_DOUBLE_EQ(mean[1], 0.35);
}

TEST(Softmax, WeightsPositiveOrZero) {
    const std::vector<double> costs{1.0, kInfinity, 1000.0, 3.0};
    const auto w = softmax_weights(costs, 0.2);
    EXPECT_EQ(w[0], 1.0);
    EXPECT_EQ(w[1], 0.0);
    EXPECT_GE(w[2], 0.0);
    EXPECT_GT(w[3], 0.0);
    const std::vector<double> none{kInfinity, kInfinity};
    EXPECT_EQ(softmax_weights(none, 0.2), (std::vector<double>{0.0, 0.0}));
    std::vector<double> mean{7.0};
    EXPECT_FALSE(softmax_average(none, std::vector<double>{1.0, 2.0}, 1, 0.2, mean));
    EXPECT_EQ(mean[0], 7.0);
}

TEST(Softmax, LowTemperatureConcentrates) {
    const double c = 5.0, delta = 2.0;
    const std::vector<double> costs{c, c + delta};
    const auto w = softmax_weights(costs, delta / 40.0);
    EXPECT_NEAR(w[1] / w[0], std::exp(-40.0), 1e-6 * std::exp(-40.0));
    const std::vector<double> samples{1.0, 0.0};
    std::vector<double> mean(1);
    ASSERT_TRUE(softmax_average(costs, samples, 1, delta / 40.0, mean));
    const double expected = 1.0 / (1.0 + std::exp(-40.0));
    EXPECT_NEAR(mean[0], expected, 1e-6 * expected);
}

TEST(Softmax, ShiftInvariance) {
    RandomStream rng = derive(1, {"shift", {}});
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t q = 1 + rng.bounded(64), row = 1 + rng.bounded(60);
        std::vector<double> costs(q), samples(q * row);
        for (auto& c : costs) c = rng.uniform() < 0.1 ? kInfinity : rng.uniform(0, 30);
        costs[rng.bounded(q)] = rng.uniform(0, 30);
        for (auto& s : samples) s = rng.uniform(-0.15, 0.15);
        const double shift = rng.uniform(-1e3, 1e3);
        std::vector<double> shifted(costs);
        for (auto& c : shifted) c += shift;
        std::vector<double> a(row), b(row);
        const double lambda = rng.uniform(0.05, 2.0);
        ASSERT_TRUE(softmax_average(costs, samples, row, lambda, a));
        ASSERT_TRUE(softmax_average(shifted, samples, row, lambda, b));
        double scale = 0.0;
        for (double s : samples) scale = std::max(scale, std::abs(s));
        for (std::size_t k = 0; k < row; ++k) ASSERT_NEAR(a[k], b[k], 1e-12 * scale);
    }
}

TEST(MppiUpdate, MeanRespectsClampAndIsThreadIndependent) {
    const Corridor c = corridor({1, 5, 0}, {9, 5, 0});
    const TreeSubset subset(c.graph, subset_indices(c.graph, TreeSubsetMode::Full, c.path));
    const RobotModel robot = RobotModel::point();
    const WeightMatrix w{};
    const DynamicsParams dyn{};
    const RolloutContext ctx{&c.env, &robot, &w, &dyn, &subset, 0.75, {}};
    MppiParams p;
    p.sigma = {0.2, 0.2, 0.2};
    const ControlSequence mean(p.horizon);
    const RandomStream stream = derive(3, {"mppi-sample", {}});
    p.threads = 1;
    const MppiUpdate a = mppi_update(ctx, {c.env.start, {}}, mean, p, stream);
    p.threads = 4;
    const MppiUpdate b = mppi_update(ctx, {c.env.start, {}}, mean, p, stream);
    ASSERT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.best_cost, b.best_cost);
    EXPECT_FALSE(a.all_infinite);
    EXPECT_GT(a.effective_sample_size, 1.0);
    EXPECT_LE(a.effective_sample_size, static_cast<double>(p.num_samples));
    for (const Control& u : a.mean) EXPECT_LE(weighted_norm(u, w), dyn.epsilon * (1 + 1e-12));
    EXPECT_GT(a.mean.front().x, 0.0);  // heads toward the goal
}

TEST(MppiUpdate, AllInfiniteKeepsMean) {
    const Corridor c = corridor({1, 5, 0}, {9, 5, 0});
    const TreeSubset subset(c.graph, subset_indices(c.graph, TreeSubsetMode::Full, c.path));
    const RobotModel robot = RobotModel::point();
    const WeightMatrix w{};
    const DynamicsParams dyn{};
    const RolloutContext ctx{&c.env, &robot, &w, &dyn, &subset, 0.75, {}};
    MppiParams p;
    p.num_samples = 16;
    ControlSequence mean(p.horizon, Control{0.01, 0, 0});
    const MppiUpdate u = mppi_update(ctx, {{5, 9.5, 0}, {}}, mean, p, derive(1, {"x", {}}));
    EXPECT_TRUE(u.all_infinite);
    EXPECT_EQ(u.mean, mean);
    EXPECT_EQ(u.effective_sample_size, 0.0);
}

TEST(MppiRun, ReachesNearbyGoalNoiseFree) {
    // Close enough that the zero initial mean does not dominate the cost.
    const Corridor c = corridor({5, 5, 0}, {5.6, 5, 0});
    const TreeSubset subset(c.graph, subset_indices(c.graph, TreeSubsetMode::Full, c.path));
    Scenario sc{&c.env, RobotModel::point(), {}, {}, std::nullopt};
    sc.dynamics.noise_std = 0.0;
    const double dist = plan_metric(c.env.start, c.env.goal, {});
    const double reference = dist + std::ceil(dist / sc.dynamics.epsilon);
    // Nothing can beat full speed straight to the edge of the goal ball.
    const double edge = dist - c.env.goal_radius;
    const double floor_cost = edge + std::ceil(edge / sc.dynamics.epsilon - 1e-9);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const TrialRecord r = mppi_run(sc, subset, {}, {}, {seed, seed + 100});
        ASSERT_EQ(r.outcome, Outcome::Success);
        EXPECT_LE(r.true_cost, 1.2 * reference) << "seed " << seed;
        EXPECT_GE(r.true_cost, floor_cost - 1e-9) << "seed " << seed;
        EXPECT_DOUBLE_EQ(r.true_cost, r.indicator_cost + r.action_cost);
        EXPECT_EQ(r.indicator_cost, static_cast<double>(r.steps));
        EXPECT_EQ(r.trajectory.size(), r.steps + 1);
        EXPECT_EQ(r.terminal_nodes.size(), r.steps);
        EXPECT_FALSE(r.collided);
    }
}

TEST(MppiRun, ZeroBudgetFails) {
    const Corridor c = corridor({5, 5, 0}, {7, 5, 0});
    const TreeSubset subset(c.graph, subset_indices(c.graph, TreeSubsetMode::Full, c.path));
    const Scenario sc{&c.env, RobotModel::point(), {}, {}, std::nullopt};
    MppiParams p;
    p.max_steps = 0;
    const TrialRecord r = mppi_run(sc, subset, {}, p, {1, 2});
    EXPECT_EQ(r.outcome, Outcome::Failure);
    EXPECT_EQ(r.steps, 0u);
}

TEST(MppiRun, LostWhenFarFromTree) {
    Corridor c = corridor({5, 5, 0}, {7, 5, 0});
    c.env.start = {1, 1, 0};
    const TreeSubset subset(c.graph, subset_indices(c.graph, TreeSubsetMode::Full, c.path));
    const Scenario sc{&c.env, RobotModel::point(), {}, {}, std::nullopt};
    const TrialRecord r = mppi_run(sc, subset, {}, {}, {1, 2});
    EXPECT_TRUE(r.lost);
    EXPECT_EQ(r.outcome, Outcome::Failure);
    EXPECT_EQ(r.steps, MppiParams{}.lost_window);
}

TEST(MppiRun, DeterministicAndCommonNoise) {
    const Environment env = load_environment(oracle::env_path("gate"));
    RandomStream prng = derive(4, {"planner", {}});
    PlanResult plan = rrt_sharp(env, RobotModel::point(), {}, {}, prng);
    ASSERT_TRUE(plan.success());
    const auto path = extract_min_path(plan.graph, *plan.start_index);
    const TreeSubset subset(plan.graph, subset_indices(plan.graph, TreeSubsetMode::Full, path));
    Scenario sc{&env, RobotModel::point(), {}, {}, DynamicObstacleSpec{3, 0.5, 0.05, 0.01}};
    MppiParams p;
    p.num_samples = 64;
    const TrialRecord a = mppi_run(sc, subset, {}, p, {11, 12});
    p.threads = 3;
    const TrialRecord b = mppi_run(sc, subset, {}, p, {11, 12});
    EXPECT_EQ(a.trajectory, b.trajectory);
    EXPECT_EQ(a.true_cost, b.true_cost);
    EXPECT_EQ(a.outcome, b.outcome);
    EXPECT_EQ(a.terminal_nodes, b.terminal_nodes);
}

TEST(Naive, StepExamples) {
    NaiveFollower f({{0, 0, 0}, {4, 0, 0}, {4, 4, 0}}, {}, 0.15, 0.1);
    EXPECT_EQ(f.step({0, 0, 0}), (Control{0.15, 0, 0}));
    EXPECT_EQ(f.target(), 1u);
    NaiveFollower g({{4, 0, 0}}, {}, 0.15, 0.1);
    EXPECT_EQ(g.step({0, 0, 0}), (Control{0.15, 0, 0}));
    // Last waypoint within reach: exact difference.
    NaiveFollower h({{0.1, 0.05, 0}}, {}, 0.15, 0.01);
    const Control a = h.step({0, 0, 0});
    EXPECT_DOUBLE_EQ(a.x, 0.1);
    EXPECT_DOUBLE_EQ(a.y, 0.05);
}

TEST(Naive, HeadingWraps) {
    const WeightMatrix w{1, 1, kStickHeadingWeight};
    NaiveFollower f({{0, 0, -3.0}}, w, 10.0, 0.01);
    EXPECT_NEAR(f.step({0, 0, 3.0}).theta, kTwoPi - 6.0, 1e-12);
}

TEST(Naive, NoiseFreePathLength) {
    const Corridor c = corridor({1, 2, 0}, {8, 7, 0});
    Scenario sc{&c.env, RobotModel::point(), {}, {}, std::nullopt};
    sc.dynamics.noise_std = 0.0;
    const TrialRecord r = naive_run(sc, c.graph, c.path, 800, {1, 2});
    ASSERT_EQ(r.outcome, Outcome::Success);
    double executed = 0.0;
    for (std::size_t k = 1; k < r.trajectory.size(); ++k) {
        executed += plan_metric(r.trajectory[k - 1].q, r.trajectory[k].q, {});
    }
    double polyline = 0.0;
    for (std::size_t k = 1; k < c.path.size(); ++k) {
        polyline += plan_metric(c.graph.vertex(c.path[k - 1]), c.graph.vertex(c.path[k]), {});
    }
    // The run stops on entering the goal ball, so it may fall short by up to its radius.
    EXPECT_LE(executed, polyline + sc.dynamics.epsilon);
    EXPECT_GE(executed, polyline - c.env.goal_radius - sc.dynamics.epsilon);
}

TEST(Naive, RejectsUnsupportedScenarios) {
    const Corridor c = corridor({1, 2, 0}, {8, 7, 0});
    Scenario sc{&c.env, RobotModel::point(), {}, {}, std::nullopt};
    sc.dynamics.order = DynamicsOrder::Second;
    EXPECT_THROW(naive_run(sc, c.graph, c.path, 10, {1, 2}), std::invalid_argument);
    sc.dynamics.order = DynamicsOrder::First;
    sc.dynamic_obstacles = DynamicObstacleSpec{2, 0.3, 0.05, 0.01};
    EXPECT_THROW(naive_run(sc, c.graph, c.path, 10, {1, 2}), std::invalid_argument);
}

TEST(Names, RoundTrip) {
    for (Outcome o : {Outcome::Success, Outcome::Collision, Outcome::Failure}) EXPECT_EQ(parse_outcome(outcome_name(o)), o);
    for (ControllerKind k : {ControllerKind::Naive, ControllerKind::Min, ControllerKind::Full}) {
        EXPECT_EQ(parse_controller(controller_name(k)), k);
    }
    EXPECT_THROW(parse_controller("fancy"), std::invalid_argument);
}
