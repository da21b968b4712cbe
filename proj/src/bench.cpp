#include "treemppi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace treemppi {

namespace {

std::string order_name(DynamicsOrder order) { return order == DynamicsOrder::First ? "first" : "second"; }

DynamicsOrder parse_order(const Json& j) {
    if (j.is_number_integer()) {
        const int o = j.get<int>();
        if (o == 1) return DynamicsOrder::First;
        if (o == 2) return DynamicsOrder::Second;
    } else if (j.is_string()) {
        if (j == "first") return DynamicsOrder::First;
        if (j == "second") return DynamicsOrder::Second;
    }
    throw FileError("order must be 1, 2, \"first\" or \"second\"");
}

// Runs fn(i) for i in [0, count) on `threads` workers; each index runs exactly once.
template <typename Fn>
void run_jobs(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(count, 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

double mean_of(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

// Sample standard deviation; 0 for fewer than two values.
double stddev_of(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct PlannedTree {
    TreeSummary summary;
    std::optional<TreeFile> file;
    std::vector<VertexIndex> min_path;
    std::optional<TreeSubset> full_subset;
    std::optional<TreeSubset> min_subset;
};

struct Job {
    std::size_t tree_slot;
    ControllerKind controller;
    std::size_t trial;
};

}  // namespace

std::string condition_label(const RobotModel& robot, DynamicsOrder order, bool dynamic) {
    return robot_kind_name(robot.kind) + "/" + order_name(order) + "/" + (dynamic ? "dynamic" : "static");
}

BenchConfig bench_config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object() || doc.value("format", 0) != kFormatVersion) {
        throw FileError("bench config: unsupported or missing format version");
    }
    try {
        BenchConfig cfg;
        for (const Json& e : doc.at("environments")) {
            std::filesystem::path p = e.get<std::string>();
            cfg.environments.push_back(p.is_absolute() ? p : base_dir / p);
        }
        if (doc.contains("robots")) {
            cfg.robots.clear();
            for (const Json& r : doc.at("robots")) {
                if (r.is_string()) {
                    const RobotKind kind = parse_robot_kind(r.get<std::string>());
                    cfg.robots.push_back(kind == RobotKind::Point ? RobotModel::point() : RobotModel::stick(0.2));
                } else {
                    cfg.robots.push_back({parse_robot_kind(r.at("kind").get<std::string>()),
                                          r.value("stick_half_length", 0.2)});
                }
            }
        }
        cfg.trees_per_env = doc.value("trees_per_env", cfg.trees_per_env);
        cfg.trials_per_tree = doc.value("trials_per_tree", cfg.trials_per_tree);
        if (doc.contains("controllers")) {
            cfg.controllers.clear();
            for (const Json& c : doc.at("controllers")) cfg.controllers.push_back(parse_controller(c.get<std::string>()));
        }
        if (doc.contains("dynamics")) {
            const Json& d = doc.at("dynamics");
            if (d.contains("order")) cfg.dynamics.order = parse_order(d.at("order"));
            cfg.dynamics.epsilon = d.value("epsilon", cfg.dynamics.epsilon);
            cfg.dynamics.dt = d.value("dt", cfg.dynamics.dt);
            cfg.dynamics.noise_std = d.value("noise_std", cfg.dynamics.noise_std);
            if (d.contains("weights")) {
                cfg.weights = d.at("weights").get<std::vector<double>>();
                if (!cfg.weights.empty() && (cfg.weights.size() < 2 || cfg.weights.size() > 3)) throw FileError("weights must be [w_x, w_y, w_theta?]");
                for (double w : cfg.weights) {
                    if (!(w > 0.0) || !std::isfinite(w)) throw FileError("weights must be positive");
                }
            }
        }
        if (doc.contains("dynamic_obstacles")) {
            const Json& d = doc.at("dynamic_obstacles");
            if (d.is_boolean()) {
                cfg.dynamic_obstacles = d.get<bool>();
            } else {
                cfg.dynamic_obstacles = d.get<int>() > 0;
                cfg.dynamic_count = d.get<int>();
            }
        }
        if (doc.contains("planner")) {
            const Json& p = doc.at("planner");
            cfg.planner.steer_radius_max = p.value("steer_radius_max", cfg.planner.steer_radius_max);
            cfg.planner.steer_radius_min = p.value("steer_radius_min", cfg.planner.steer_radius_min);
            cfg.planner.start_bias = p.value("start_bias", cfg.planner.start_bias);
            cfg.planner.max_iterations = p.value("max_iterations", cfg.planner.max_iterations);
        }
        if (doc.contains("mppi")) {
            const Json& m = doc.at("mppi");
            cfg.mppi.horizon = m.value("horizon", cfg.mppi.horizon);
            cfg.mppi.num_samples = m.value("num_samples", cfg.mppi.num_samples);
            cfg.mppi.temperature = m.value("temperature", cfg.mppi.temperature);
            if (m.contains("sigma")) {
                const double s = m.at("sigma").get<double>();
                cfg.mppi.sigma = {s, s, s};
            }
            cfg.mppi.max_steps = m.value("max_steps", cfg.mppi.max_steps);
            cfg.mppi.lost_window = m.value("lost_window", cfg.mppi.lost_window);
        }
        if (doc.contains("query")) cfg.search_radius = doc.at("query").value("search_radius", cfg.search_radius);
        cfg.waypoint_tolerance = doc.value("waypoint_tolerance", cfg.waypoint_tolerance);
        cfg.min_clean_trials = doc.value("min_clean_trials", cfg.min_clean_trials);
        cfg.master_seed = doc.value("master_seed", cfg.master_seed);
        cfg.threads = doc.value("threads", cfg.threads);
        if (cfg.trees_per_env == 0 || cfg.trials_per_tree == 0) throw FileError("counts must be at least 1");
        if (cfg.environments.empty() || cfg.robots.empty() || cfg.controllers.empty()) {
            throw FileError("environments, robots and controllers must be non-empty");
        }
        return cfg;
    } catch (const Json::exception& e) {
        throw FileError(std::string("bench config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FileError(std::string("bench config: ") + e.what());
    }
}

BenchConfig load_bench_config(const std::filesystem::path& path) {
    try {
        BenchConfig cfg = bench_config_from_json(read_json_file(path), path.parent_path());
        for (const auto& env : cfg.environments) {
            if (!std::filesystem::exists(env)) throw FileError("environment file not found: " + env.string());
        }
        return cfg;
    } catch (const FileError& e) {
        throw FileError(path.string() + ": " + e.what());
    }
}

Json bench_config_to_json(const BenchConfig& cfg) {
    Json envs = Json::array();
    for (const auto& e : cfg.environments) envs.push_back(e.filename().string());
    Json robots = Json::array();
    for (const auto& r : cfg.robots) robots.push_back({{"kind", robot_kind_name(r.kind)}, {"stick_half_length", r.stick_half_length}});
    Json controllers = Json::array();
    for (auto c : cfg.controllers) controllers.push_back(std::string(controller_name(c)));
    Json doc = {{"format", kFormatVersion},
                {"environments", envs},
                {"robots", robots},
                {"trees_per_env", cfg.trees_per_env},
                {"trials_per_tree", cfg.trials_per_tree},
                {"controllers", controllers},
                {"dynamics",
                 {{"order", cfg.dynamics.order == DynamicsOrder::First ? 1 : 2},
                  {"epsilon", cfg.dynamics.epsilon},
                  {"dt", cfg.dynamics.dt},
                  {"noise_std", cfg.dynamics.noise_std},
                  {"weights", cfg.weights}}},
                {"dynamic_obstacles", cfg.dynamic_count ? Json(*cfg.dynamic_count) : Json(cfg.dynamic_obstacles)},
                {"planner",
                 {{"steer_radius_max", cfg.planner.steer_radius_max},
                  {"steer_radius_min", cfg.planner.steer_radius_min},
                  {"start_bias", cfg.planner.start_bias},
                  {"max_iterations", cfg.planner.max_iterations}}},
                {"mppi",
                 {{"horizon", cfg.mppi.horizon},
                  {"num_samples", cfg.mppi.num_samples},
                  {"temperature", cfg.mppi.temperature},
                  {"sigma", cfg.mppi.sigma.x},
                  {"max_steps", cfg.mppi.max_steps},
                  {"lost_window", cfg.mppi.lost_window}}},
                {"query", {{"search_radius", cfg.search_radius}}},
                {"waypoint_tolerance", cfg.waypoint_tolerance},
                {"min_clean_trials", cfg.min_clean_trials},
                {"master_seed", cfg.master_seed}};
    return doc;
}

std::string config_hash(const BenchConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bench_config_to_json(cfg).dump())));
    return buf;
}

std::vector<NormalizedCost> normalized_cost(std::span<const TrialEntry> entries,
                                            std::span<const ControllerKind> controllers, std::size_t min_clean) {
    // (env, robot, tree) -> controller -> clean costs, in trial order.
    using TreeKey = std::tuple<std::string, std::string, std::size_t>;
    std::map<TreeKey, std::map<ControllerKind, std::vector<double>>> clean;
    std::vector<TreeKey> order;
    for (const TrialEntry& e : entries) {
        const TreeKey key{e.env, e.robot, e.tree};
        auto [it, inserted] = clean.try_emplace(key);
        if (inserted) order.push_back(key);
        auto& costs = it->second[e.controller];
        if (e.record.outcome == Outcome::Success) costs.push_back(e.record.true_cost);
    }

    std::vector<NormalizedCost> out;
    for (ControllerKind c : controllers) out.push_back({c, {}, 0.0, 0.0, 0});
    const bool has_min = std::find(controllers.begin(), controllers.end(), ControllerKind::Min) != controllers.end();
    for (const TreeKey& key : order) {
        auto& per = clean[key];
        const auto& min_costs = per[ControllerKind::Min];
        const bool min_ok = has_min && min_costs.size() >= min_clean && min_clean > 0;
        const double min_mean = min_ok ? mean_of(min_costs) : 0.0;
        for (NormalizedCost& nc : out) {
            const auto& costs = per[nc.controller];
            if (!min_ok || costs.size() < min_clean) {
                ++nc.trees_excluded;
                continue;
            }
            nc.ratios.push_back(mean_of(costs) / min_mean);
        }
    }
    for (NormalizedCost& nc : out) {
        nc.mean = mean_of(nc.ratios);
        nc.stddev = stddev_of(nc.ratios);
    }
    return out;
}

std::vector<AggregateStats> aggregate(std::span<const TrialEntry> entries, std::span<const ControllerKind> controllers,
                                      std::size_t min_clean) {
    std::vector<std::string> conditions;
    for (const TrialEntry& e : entries) {
        if (std::find(conditions.begin(), conditions.end(), e.condition) == conditions.end()) {
            conditions.push_back(e.condition);
        }
    }
    std::vector<AggregateStats> out;
    for (const std::string& condition : conditions) {
        std::vector<TrialEntry> subset;
        for (const TrialEntry& e : entries) {
            if (e.condition == condition) subset.push_back(e);
        }
        const auto normalized = normalized_cost(subset, controllers, min_clean);
        for (std::size_t k = 0; k < controllers.size(); ++k) {
            AggregateStats s;
            s.condition = condition;
            s.controller = controllers[k];
            for (const TrialEntry& e : subset) {
                if (e.controller != controllers[k]) continue;
                ++s.trials;
                if (e.record.outcome == Outcome::Failure) ++s.failures;
                if (e.record.outcome == Outcome::Collision) ++s.collisions;
            }
            if (s.trials > 0) s.failure_pct = 100.0 * static_cast<double>(s.failures) / static_cast<double>(s.trials);
            const std::size_t arrived = s.trials - s.failures;
            if (arrived > 0) s.collision_pct = 100.0 * static_cast<double>(s.collisions) / static_cast<double>(arrived);
            s.normalized = normalized[k];
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<TimingStats> timing_report(std::span<const TrialEntry> entries) {
    std::map<ControllerKind, std::vector<double>> samples;
    for (const TrialEntry& e : entries) {
        auto& v = samples[e.controller];
        v.insert(v.end(), e.record.iteration_ms.begin(), e.record.iteration_ms.end());
    }
    std::vector<TimingStats> out;
    for (auto& [controller, ms] : samples) {
        if (ms.empty()) continue;
        TimingStats t;
        t.controller = controller;
        t.iterations = ms.size();
        t.mean_ms = mean_of(ms);
        std::sort(ms.begin(), ms.end());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(ms.size())));
        t.p95_ms = ms[std::clamp<std::size_t>(rank, 1, ms.size()) - 1];
        out.push_back(t);
    }
    return out;
}

Json trial_entry_to_json(const TrialEntry& entry, const std::string& hash) {
    Json doc = trial_to_json(entry.record, false);
    doc["config_hash"] = hash;
    doc["env"] = entry.env;
    doc["robot"] = entry.robot;
    doc["condition"] = entry.condition;
    doc["tree"] = entry.tree;
    doc["controller"] = std::string(controller_name(entry.controller));
    doc["trial"] = entry.trial;
    return doc;
}

TrialEntry trial_entry_from_json(const Json& doc) {
    TrialEntry e;
    e.record = trial_from_json(doc);
    try {
        e.env = doc.at("env").get<std::string>();
        e.robot = doc.at("robot").get<std::string>();
        e.condition = doc.at("condition").get<std::string>();
        e.tree = doc.at("tree").get<std::size_t>();
        e.controller = parse_controller(doc.at("controller").get<std::string>());
        e.trial = doc.at("trial").get<std::size_t>();
    } catch (const Json::exception& ex) {
        throw FileError(std::string("trial archive: ") + ex.what());
    }
    return e;
}

std::vector<TrialEntry> load_trial_archive(const std::filesystem::path& trials_jsonl) {
    std::ifstream in(trials_jsonl);
    if (!in) throw FileError("cannot open " + trials_jsonl.string());
    std::vector<TrialEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            out.push_back(trial_entry_from_json(Json::parse(line)));
        } catch (const Json::exception& e) {
            throw FileError("malformed archive line in " + trials_jsonl.string() + ": " + e.what());
        }
    }
    return out;
}

std::string format_stats_table(std::span<const AggregateStats> stats) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %-6s %7s %9s %11s %24s %9s\n", "condition", "ctrl", "trials", "failure%",
                  "collision%", "normalized cost", "excluded");
    os << line;
    for (const AggregateStats& s : stats) {
        char cost[64];
        if (s.normalized.defined()) {
            std::snprintf(cost, sizeof cost, "%.3f +- %.3f (n=%zu)", s.normalized.mean, s.normalized.stddev,
                          s.normalized.ratios.size());
        } else {
            std::snprintf(cost, sizeof cost, "---");
        }
        std::snprintf(line, sizeof line, "%-22s %-6s %7zu %9.1f %11.1f %24s %9zu\n", s.condition.c_str(),
                      std::string(controller_name(s.controller)).c_str(), s.trials, s.failure_pct, s.collision_pct,
                      cost, s.normalized.trees_excluded);
        os << line;
    }
    return os.str();
}

Json stats_to_json(std::span<const AggregateStats> stats) {
    Json out = Json::array();
    for (const AggregateStats& s : stats) {
        Json row = {{"condition", s.condition},
                    {"controller", std::string(controller_name(s.controller))},
                    {"trials", s.trials},
                    {"failures", s.failures},
                    {"collisions", s.collisions},
                    {"failure_pct", s.failure_pct},
                    {"collision_pct", s.collision_pct},
                    {"trees_included", s.normalized.ratios.size()},
                    {"trees_excluded", s.normalized.trees_excluded}};
        if (s.normalized.defined()) {
            row["normalized_cost_mean"] = s.normalized.mean;
            row["normalized_cost_std"] = s.normalized.stddev;
        } else {
            row["normalized_cost_mean"] = nullptr;
            row["normalized_cost_std"] = nullptr;
        }
        out.push_back(row);
    }
    return out;
}

BenchResult run_benchmark(const BenchConfig& cfg, const std::optional<std::filesystem::path>& archive_dir,
                          const std::function<void(const std::string&)>& progress) {
    const bool has_naive =
        std::find(cfg.controllers.begin(), cfg.controllers.end(), ControllerKind::Naive) != cfg.controllers.end();
    if (has_naive && (cfg.dynamic_obstacles || cfg.dynamics.order != DynamicsOrder::First)) {
        throw std::invalid_argument("the naive controller needs first-order dynamics without dynamic obstacles");
    }
    const std::string hash = config_hash(cfg);

    std::vector<Environment> envs;
    for (const auto& path : cfg.environments) {
        Environment env = load_environment(path);
        if (cfg.dynamic_obstacles && !env.dynamic) {
            throw FileError(path.string() + ": no dynamic obstacle block, but dynamic obstacles were requested");
        }
        envs.push_back(std::move(env));
    }

    // Planning: one slot per (env, robot, tree).
    std::vector<PlannedTree> trees(envs.size() * cfg.robots.size() * cfg.trees_per_env);
    std::mutex progress_mutex;
    run_jobs(trees.size(), cfg.threads, [&](std::size_t slot) {
        const std::size_t tree_index = slot % cfg.trees_per_env;
        const std::size_t robot_index = (slot / cfg.trees_per_env) % cfg.robots.size();
        const std::size_t env_index = slot / (cfg.trees_per_env * cfg.robots.size());
        const RobotModel& robot = cfg.robots[robot_index];
        const Environment env = adapted_to(envs[env_index], robot);
        validate_for_robot(env, robot);
        const WeightMatrix w = cfg.weights.empty() ? default_weights(robot) : weights_from_json(cfg.weights, robot);

        PlannerParams params = cfg.planner;
        params.rng_seed = derive_seed(cfg.master_seed, {"planner/" + env.name + "/" + robot_kind_name(robot.kind), {tree_index}});
        RandomStream rng(params.rng_seed);
        PlanResult plan = rrt_sharp(env, robot, w, params, rng);

        PlannedTree& out = trees[slot];
        out.summary = {env.name, robot_kind_name(robot.kind), tree_index, plan.success(), plan.graph.size(),
                       plan.iterations, kInfinity, 0};
        if (plan.success()) {
            out.summary.start_value = plan.graph.value(*plan.start_index);
            out.min_path = extract_min_path(plan.graph, *plan.start_index);
            out.summary.min_path_vertices = out.min_path.size();
            out.file = TreeFile{env, robot, std::move(plan.graph), *plan.start_index, params, params.rng_seed, plan.iterations};
            const PlanningGraph& g = out.file->graph;
            out.full_subset.emplace(g, subset_indices(g, TreeSubsetMode::Full, out.min_path));
            out.min_subset.emplace(g, subset_indices(g, TreeSubsetMode::MinPathOnly, out.min_path));
        }
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress("planned " + env.name + "/" + out.summary.robot + " tree " + std::to_string(tree_index) + ": " +
                     (plan.success() ? std::to_string(out.summary.vertices) + " vertices" : "FAILED"));
        }
    });

    std::vector<Job> jobs;
    for (std::size_t slot = 0; slot < trees.size(); ++slot) {
        if (!trees[slot].file) continue;
        for (ControllerKind c : cfg.controllers) {
            for (std::size_t t = 0; t < cfg.trials_per_tree; ++t) jobs.push_back({slot, c, t});
        }
    }

    BenchResult result;
    result.trials.resize(jobs.size());
    std::atomic<std::size_t> done{0};
    run_jobs(jobs.size(), cfg.threads, [&](std::size_t j) {
        const Job& job = jobs[j];
        const PlannedTree& planned = trees[job.tree_slot];
        const TreeFile& tree = *planned.file;
        const std::string& env_name = planned.summary.env;
        const std::string& robot_name = planned.summary.robot;

        Scenario scenario;
        scenario.env = &tree.env;
        scenario.robot = tree.robot;
        scenario.weights = tree.graph.weights();
        scenario.dynamics = cfg.dynamics;
        if (cfg.dynamic_obstacles) {
            DynamicObstacleSpec spec = *tree.env.dynamic;
            if (cfg.dynamic_count) spec.count = *cfg.dynamic_count;
            scenario.dynamic_obstacles = spec;
        }
        const TrialSeeds seeds{
            derive_seed(cfg.master_seed, {"trial-env/" + env_name + "/" + robot_name, {planned.summary.tree, job.trial}}),
            derive_seed(cfg.master_seed, {"trial-ctl/" + env_name + "/" + robot_name + "/" +
                                              std::string(controller_name(job.controller)),
                                          {planned.summary.tree, job.trial}})};

        TrialEntry& entry = result.trials[j];
        entry.env = env_name;
        entry.robot = robot_name;
        entry.condition = condition_label(tree.robot, cfg.dynamics.order, cfg.dynamic_obstacles);
        entry.tree = planned.summary.tree;
        entry.controller = job.controller;
        entry.trial = job.trial;
        if (job.controller == ControllerKind::Naive) {
            entry.record = naive_run(scenario, tree.graph, planned.min_path, cfg.mppi.max_steps, seeds, cfg.waypoint_tolerance);
        } else {
            const TreeSubset& subset = job.controller == ControllerKind::Full ? *planned.full_subset : *planned.min_subset;
            MppiParams mppi = cfg.mppi;
            mppi.threads = 1;
            entry.record = mppi_run(scenario, subset, {cfg.search_radius, TreeSubsetMode::Full}, mppi, seeds);
        }
        // Trajectories are not archived; drop them to bound memory.
        entry.record.trajectory.clear();
        entry.record.trajectory.shrink_to_fit();
        entry.record.terminal_nodes.clear();
        entry.record.terminal_nodes.shrink_to_fit();
        const std::size_t finished = ++done;
        if (progress && (finished % 50 == 0 || finished == jobs.size())) {
            std::lock_guard lock(progress_mutex);
            progress("trials " + std::to_string(finished) + "/" + std::to_string(jobs.size()));
        }
    });

    for (const PlannedTree& t : trees) result.trees.push_back(t.summary);
    result.stats = aggregate(result.trials, cfg.controllers, cfg.min_clean_trials);
    result.timing = timing_report(result.trials);

    if (archive_dir) {
        const auto& dir = *archive_dir;
        std::string trials_text;
        for (const TrialEntry& e : result.trials) trials_text += trial_entry_to_json(e, hash).dump() + "\n";
        write_text_file(dir / "trials.jsonl", trials_text);

        std::string trees_text;
        for (const PlannedTree& t : trees) {
            const TreeSummary& s = t.summary;
            Json row = {{"config_hash", hash},       {"env", s.env},
                        {"robot", s.robot},          {"tree", s.tree},
                        {"planned", s.planned},      {"vertices", s.vertices},
                        {"iterations", s.iterations}, {"min_path_vertices", s.min_path_vertices},
                        {"start_value", std::isfinite(s.start_value) ? Json(s.start_value) : Json(nullptr)}};
            trees_text += row.dump() + "\n";
            if (t.file) {
                save_tree(dir / "trees" / (s.env + "-" + s.robot + "-" + std::to_string(s.tree) + ".json"), *t.file);
            }
        }
        write_text_file(dir / "trees.jsonl", trees_text);
        write_text_file(dir / "config.json", bench_config_to_json(cfg).dump(2) + "\n");
        write_text_file(dir / "stats.json", stats_to_json(result.stats).dump(2) + "\n");
        write_text_file(dir / "stats.txt", format_stats_table(result.stats));

        Json timing = Json::array();
        for (const TimingStats& t : result.timing) {
            timing.push_back({{"controller", std::string(controller_name(t.controller))},
                              {"iterations", t.iterations},
                              {"mean_ms", t.mean_ms},
                              {"p95_ms", t.p95_ms}});
        }
        write_text_file(dir / "timing.json", timing.dump(2) + "\n");
    }
    return result;
}

}  // namespace treemppi
