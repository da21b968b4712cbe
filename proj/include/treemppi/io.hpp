#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "treemppi/controller.hpp"
#include "treemppi/graph.hpp"
#include "treemppi/planner.hpp"
#include "treemppi/world.hpp"

namespace treemppi {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Missing, unreadable, or malformed input file.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

Environment environment_from_json(const Json& doc);
Json environment_to_json(const Environment& env);
Environment load_environment(const std::filesystem::path& path);

RobotKind parse_robot_kind(const std::string& name);
std::string robot_kind_name(RobotKind kind);

/// A planned tree plus everything needed to execute against it.
struct TreeFile {
    Environment env;
    RobotModel robot;
    PlanningGraph graph;
    VertexIndex start_index = 0;
    PlannerParams planner;
    std::uint64_t rng_seed = 0;
    std::size_t iterations = 0;
};

inline constexpr double kEdgeCostTolerance = 1e-9;

/// Values use null for infinity. Edges are listed once as [i, j, cost].
Json tree_to_json(const TreeFile& tree);
/// Recomputes every edge cost and rejects the file if a stored cost differs
/// by more than kEdgeCostTolerance.
TreeFile tree_from_json(const Json& doc);
void save_tree(const std::filesystem::path& path, const TreeFile& tree);
TreeFile load_tree(const std::filesystem::path& path);

Json trial_to_json(const TrialRecord& record, bool include_trajectory);
TrialRecord trial_from_json(const Json& doc);

Json weights_to_json(const WeightMatrix& w, const RobotModel& robot);
WeightMatrix weights_from_json(const Json& doc, const RobotModel& robot);

}  // namespace treemppi
