#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treemppi/controller.hpp"
#include "treemppi/io.hpp"
#include "treemppi/planner.hpp"
#include "treemppi/terminal_value.hpp"

namespace treemppi {

struct BenchConfig {
    std::vector<std::filesystem::path> environments;
    std::vector<RobotModel> robots{RobotModel::point()};
    std::size_t trees_per_env = 10;
    std::size_t trials_per_tree = 5;
    std::vector<ControllerKind> controllers{ControllerKind::Naive, ControllerKind::Min, ControllerKind::Full};
    DynamicsParams dynamics;
    std::vector<double> weights;  // [w_x, w_y, w_theta?]; empty: per-robot defaults
    bool dynamic_obstacles = false;
    std::optional<int> dynamic_count;  // overrides the environment's obstacle count
    PlannerParams planner;
    MppiParams mppi;
    double search_radius = 0.75;
    double waypoint_tolerance = kDefaultWaypointTolerance;
    std::size_t min_clean_trials = 3;
    std::uint64_t master_seed = 1;
    std::size_t threads = 0;  // 0: one per hardware thread; does not affect results
};

/// Parses a bench config; relative environment paths resolve against base_dir.
BenchConfig bench_config_from_json(const Json& doc, const std::filesystem::path& base_dir);
BenchConfig load_bench_config(const std::filesystem::path& path);
/// Canonical form used for the config hash (thread count excluded).
Json bench_config_to_json(const BenchConfig& cfg);
std::string config_hash(const BenchConfig& cfg);

/// Condition label, e.g. "point/first/static".
std::string condition_label(const RobotModel& robot, DynamicsOrder order, bool dynamic);

struct TreeSummary {
    std::string env;
    std::string robot;
    std::size_t tree = 0;
    bool planned = false;
    std::size_t vertices = 0;
    std::size_t iterations = 0;
    double start_value = kInfinity;
    std::size_t min_path_vertices = 0;
};

struct TrialEntry {
    std::string env;
    std::string robot;
    std::string condition;
    std::size_t tree = 0;
    ControllerKind controller = ControllerKind::Full;
    std::size_t trial = 0;
    TrialRecord record;
};

struct NormalizedCost {
    ControllerKind controller = ControllerKind::Full;
    std::vector<double> ratios;  // one per included tree
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t trees_excluded = 0;
    bool defined() const { return !ratios.empty(); }
};

/// Per tree, each controller's mean true cost over successful collision-free
/// trials, divided by the min controller's. A tree is skipped for a controller
/// with fewer than min_clean clean trials, and for every controller when min
/// itself falls short. Entries must all share one condition.
std::vector<NormalizedCost> normalized_cost(std::span<const TrialEntry> entries,
                                            std::span<const ControllerKind> controllers, std::size_t min_clean);

struct AggregateStats {
    std::string condition;
    ControllerKind controller = ControllerKind::Full;
    std::size_t trials = 0;
    std::size_t failures = 0;
    std::size_t collisions = 0;
    double failure_pct = 0.0;
    double collision_pct = 0.0;  // over non-failed trials
    NormalizedCost normalized;
};

/// Stats per (condition, controller), in first-appearance order of conditions
/// and the given controller order.
std::vector<AggregateStats> aggregate(std::span<const TrialEntry> entries, std::span<const ControllerKind> controllers,
                                      std::size_t min_clean);

struct TimingStats {
    ControllerKind controller = ControllerKind::Full;
    std::size_t iterations = 0;
    double mean_ms = 0.0;
    double p95_ms = 0.0;
};

/// Mean and 95th percentile wall clock per control iteration, per controller.
/// Controllers without iterations are omitted.
std::vector<TimingStats> timing_report(std::span<const TrialEntry> entries);

struct BenchResult {
    std::vector<TreeSummary> trees;
    std::vector<TrialEntry> trials;
    std::vector<AggregateStats> stats;
    std::vector<TimingStats> timing;
};

/// Plans trees_per_env trees per (environment, robot), then runs
/// trials_per_tree trials per controller on every planned tree. When
/// archive_dir is set, trees, raw trial records, and summaries are written there.
BenchResult run_benchmark(const BenchConfig& cfg, const std::optional<std::filesystem::path>& archive_dir = {},
                          const std::function<void(const std::string&)>& progress = {});

Json trial_entry_to_json(const TrialEntry& entry, const std::string& hash);
TrialEntry trial_entry_from_json(const Json& doc);
std::vector<TrialEntry> load_trial_archive(const std::filesystem::path& trials_jsonl);

std::string format_stats_table(std::span<const AggregateStats> stats);
Json stats_to_json(std::span<const AggregateStats> stats);

}  // namespace treemppi
