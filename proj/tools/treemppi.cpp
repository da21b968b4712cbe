// treemppi: plan trees, run single trials, run benchmarks, render SVG.
//
// Exit codes: 0 success, 1 planner/controller failure, 2 usage or file error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "treemppi/bench.hpp"
#include "treemppi/controller.hpp"
#include "treemppi/io.hpp"
#include "treemppi/kernels.hpp"
#include "treemppi/planner.hpp"
#include "treemppi/render.hpp"

namespace {

using namespace treemppi;

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Single-run dynamic obstacles when the environment has no block of its own.
constexpr DynamicObstacleSpec kFallbackDynamic{0, 0.9, 0.03, 0.01};

struct PlanOptions {
    std::string env;
    std::string robot = "point";
    double stick_half_length = 0.2;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<double> steer_max, steer_min, start_bias;
    std::optional<std::size_t> max_iterations;
};

struct RunOptions {
    std::string tree;
    std::string controller = "full";
    int order = 1;
    int dynamic = 0;
    std::uint64_t seed = 0;
    bool trace = false;
    std::string out;
    std::optional<double> search_radius, temperature;
    std::optional<std::size_t> samples, horizon, max_steps, threads;
};

struct BenchOptions {
    std::string config;
    std::string out;
    std::optional<std::size_t> threads, trees, trials;
    std::optional<std::uint64_t> master_seed;
    bool paper_scale = false;
    bool quiet = false;
};

struct RenderOptions {
    std::string env;
    std::string tree;
    std::string trial;
    std::string out;
};

std::string fmt_value(double v) {
    if (!std::isfinite(v)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmd_plan(const PlanOptions& o) {
    const RobotKind kind = parse_robot_kind(o.robot);
    const RobotModel robot = kind == RobotKind::Point ? RobotModel::point() : RobotModel::stick(o.stick_half_length);
    const Environment env = adapted_to(load_environment(o.env), robot);
    validate_for_robot(env, robot);
    const WeightMatrix w = default_weights(robot);

    PlannerParams params;
    if (o.steer_max) params.steer_radius_max = *o.steer_max;
    if (o.steer_min) params.steer_radius_min = *o.steer_min;
    if (o.start_bias) params.start_bias = *o.start_bias;
    if (o.max_iterations) params.max_iterations = *o.max_iterations;
    params.rng_seed = o.seed;
    RandomStream rng(derive_seed(o.seed, {"planner", {}}));
    PlanResult plan = rrt_sharp(env, robot, w, params, rng);
    if (!plan.success()) {
        std::cerr << "error: planner did not reach the start within " << plan.iterations << " iterations ("
                  << plan.graph.size() << " vertices)\n";
        return kExitDomain;
    }
    const VertexIndex start = *plan.start_index;
    const double v_start = plan.graph.value(start);
    const std::size_t vertices = plan.graph.size();
    const std::size_t iterations = plan.iterations;
    save_tree(o.out, TreeFile{env, robot, std::move(plan.graph), start, params, o.seed, iterations});
    std::cout << "vertices " << vertices << "\nV(start) " << fmt_value(v_start) << "\niterations " << iterations
              << "\n";
    return 0;
}

Json trace_to_json(const StepTrace& t) {
    return {{"step", t.step},
            {"x", t.state.q.x},
            {"y", t.state.q.y},
            {"theta", t.state.q.theta},
            {"vx", t.state.v.x},
            {"vy", t.state.v.y},
            {"vtheta", t.state.v.theta},
            {"ax", t.action.x},
            {"ay", t.action.y},
            {"atheta", t.action.theta},
            {"best_cost", std::isfinite(t.best_cost) ? Json(t.best_cost) : Json(nullptr)},
            {"terminal_node", t.terminal_node},
            {"ess", t.effective_sample_size}};
}

int cmd_run(const RunOptions& o) {
    const ControllerKind controller = parse_controller(o.controller);
    if (o.order != 1 && o.order != 2) throw UsageError("--order must be 1 or 2");
    if (o.dynamic < 0) throw UsageError("--dynamic must be non-negative");
    if (controller == ControllerKind::Naive && o.order == 2) {
        throw UsageError(
            "the naive controller only supports first-order dynamics: a waypoint follower has no model of velocity "
            "and overshoots under second-order dynamics");
    }
    if (controller == ControllerKind::Naive && o.dynamic > 0) {
        throw UsageError("the naive controller follows a fixed path and cannot react to dynamic obstacles");
    }
    const TreeFile tree = load_tree(o.tree);
    if (!std::isfinite(tree.graph.value(tree.start_index))) throw FileError(o.tree + ": start has infinite value");
    const auto min_path = extract_min_path(tree.graph, tree.start_index);

    Scenario scenario;
    scenario.env = &tree.env;
    scenario.robot = tree.robot;
    scenario.weights = tree.graph.weights();
    scenario.dynamics.order = o.order == 1 ? DynamicsOrder::First : DynamicsOrder::Second;
    if (o.dynamic > 0) {
        DynamicObstacleSpec spec = tree.env.dynamic.value_or(kFallbackDynamic);
        spec.count = o.dynamic;
        scenario.dynamic_obstacles = spec;
    }
    const TrialSeeds seeds{derive_seed(o.seed, {"trial-env", {}}),
                           derive_seed(o.seed, {"trial-ctl/" + std::string(controller_name(controller)), {}})};

    StepObserver observer;
    if (o.trace) {
        observer = [](const StepTrace& t) { std::cout << trace_to_json(t).dump() << "\n"; };
    }
    MppiParams mppi;
    if (o.samples) mppi.num_samples = *o.samples;
    if (o.horizon) mppi.horizon = *o.horizon;
    if (o.max_steps) mppi.max_steps = *o.max_steps;
    if (o.temperature) mppi.temperature = *o.temperature;
    if (o.threads) mppi.threads = *o.threads;

    TrialRecord record;
    if (controller == ControllerKind::Naive) {
        record = naive_run(scenario, tree.graph, min_path, mppi.max_steps, seeds, kDefaultWaypointTolerance, observer);
    } else {
        const TreeSubset subset(tree.graph, subset_indices(tree.graph, controller == ControllerKind::Full
                                                                           ? TreeSubsetMode::Full
                                                                           : TreeSubsetMode::MinPathOnly,
                                                           min_path));
        ValueQueryParams query;
        if (o.search_radius) query.search_radius = *o.search_radius;
        record = mppi_run(scenario, subset, query, mppi, seeds, observer);
    }
    if (!o.out.empty()) write_text_file(o.out, trial_to_json(record, true).dump() + "\n");

    std::ostream& summary = o.trace ? std::cerr : std::cout;
    summary << "outcome " << outcome_name(record.outcome) << "\ncost " << fmt_value(record.true_cost) << "\nsteps "
            << record.steps << "\n";
    return 0;
}

int cmd_bench(const BenchOptions& o) {
    BenchConfig cfg = load_bench_config(o.config);
    if (o.paper_scale) {
        cfg.trees_per_env = 50;
        cfg.trials_per_tree = 5;
    }
    if (o.trees) cfg.trees_per_env = *o.trees;
    if (o.trials) cfg.trials_per_tree = *o.trials;
    if (o.threads) cfg.threads = *o.threads;
    if (o.master_seed) cfg.master_seed = *o.master_seed;
    if (cfg.trees_per_env == 0 || cfg.trials_per_tree == 0) throw UsageError("tree and trial counts must be positive");

    std::function<void(const std::string&)> progress;
    if (!o.quiet) progress = [](const std::string& msg) { std::cerr << msg << "\n"; };
    const BenchResult result = run_benchmark(cfg, std::filesystem::path(o.out), progress);
    std::cout << "config " << config_hash(cfg) << "\n" << format_stats_table(result.stats);
    for (const TimingStats& t : result.timing) {
        std::printf("timing %-5s mean %.3f ms  p95 %.3f ms  (%zu iterations)\n",
                    std::string(controller_name(t.controller)).c_str(), t.mean_ms, t.p95_ms, t.iterations);
    }
    return 0;
}

int cmd_render(const RenderOptions& o) {
    const Environment env = load_environment(o.env);
    std::optional<TreeFile> tree;
    if (!o.tree.empty()) tree = load_tree(o.tree);
    std::optional<TrialRecord> trial;
    if (!o.trial.empty()) {
        try {
            trial = trial_from_json(read_json_file(o.trial));
        } catch (const FileError& e) {
            throw FileError(o.trial + ": " + e.what());
        }
    }
    write_text_file(o.out, render_svg(env, tree ? &*tree : nullptr, trial ? &*trial : nullptr));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"treemppi: sampling-based MPC guided by a planner value function"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    PlanOptions plan;
    auto* plan_cmd = app.add_subcommand("plan", "grow a tree from the goal until it reaches the start");
    plan_cmd->add_option("--env", plan.env, "environment file")->required();
    plan_cmd->add_option("--robot", plan.robot, "point or stick")->check(CLI::IsMember({"point", "stick"}));
    plan_cmd->add_option("--stick-half-length", plan.stick_half_length);
    plan_cmd->add_option("--seed", plan.seed)->required();
    plan_cmd->add_option("--out", plan.out, "tree file to write")->required();
    plan_cmd->add_option("--steer-radius-max", plan.steer_max);
    plan_cmd->add_option("--steer-radius-min", plan.steer_min);
    plan_cmd->add_option("--start-bias", plan.start_bias);
    plan_cmd->add_option("--max-iterations", plan.max_iterations);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "execute one trial against a planned tree");
    run_cmd->add_option("--tree", run.tree, "tree file")->required();
    run_cmd->add_option("--controller", run.controller, "full, min or naive")
        ->check(CLI::IsMember({"full", "min", "naive"}));
    run_cmd->add_option("--order", run.order, "dynamics order, 1 or 2");
    run_cmd->add_option("--dynamic", run.dynamic, "number of dynamic obstacles (0 for none)");
    run_cmd->add_option("--seed", run.seed)->required();
    run_cmd->add_flag("--trace", run.trace, "print one JSON record per control step to stdout");
    run_cmd->add_option("--out", run.out, "trial file to write");
    run_cmd->add_option("--search-radius", run.search_radius);
    run_cmd->add_option("--temperature", run.temperature);
    run_cmd->add_option("--samples", run.samples);
    run_cmd->add_option("--horizon", run.horizon);
    run_cmd->add_option("--max-steps", run.max_steps);
    run_cmd->add_option("--threads", run.threads, "rollout threads");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark and write its archive");
    bench_cmd->add_option("--config", bench.config, "bench config file")->required();
    bench_cmd->add_option("--out", bench.out, "archive directory")->required();
    bench_cmd->add_flag("--paper-scale", bench.paper_scale, "50 trees per environment, 5 trials per tree");
    bench_cmd->add_option("--trees", bench.trees);
    bench_cmd->add_option("--trials", bench.trials);
    bench_cmd->add_option("--threads", bench.threads);
    bench_cmd->add_option("--master-seed", bench.master_seed);
    bench_cmd->add_flag("--quiet", bench.quiet, "no progress output");

    RenderOptions render;
    auto* render_cmd = app.add_subcommand("render", "draw an environment, tree and trial as SVG");
    render_cmd->add_option("--env", render.env, "environment file")->required();
    render_cmd->add_option("--tree", render.tree, "tree file");
    render_cmd->add_option("--trial", render.trial, "trial file");
    render_cmd->add_option("--out", render.out, "SVG file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*plan_cmd) return cmd_plan(plan);
        if (*run_cmd) return cmd_run(run);
        if (*bench_cmd) return cmd_bench(bench);
        if (*render_cmd) return cmd_render(render);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const FileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
