#include "treemppi/io.hpp"

#include <fstream>
#include <sstream>

namespace treemppi {

namespace {

Point2 point_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 2) throw FileError("expected [x, y]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Configuration config_from_json(const Json& j) {
    if (!j.is_array() || (j.size() != 2 && j.size() != 3)) throw FileError("expected [x, y] or [x, y, theta]");
    Configuration q{j.at(0).get<double>(), j.at(1).get<double>(), 0.0};
    if (j.size() == 3) q.theta = j.at(2).get<double>();
    return q;
}

Json config_to_json(const Configuration& q, bool with_heading) {
    if (with_heading) return Json::array({q.x, q.y, q.theta});
    return Json::array({q.x, q.y});
}

void check_format(const Json& doc, const char* what) {
    if (!doc.is_object()) throw FileError(std::string(what) + ": expected an object");
    if (!doc.contains("format") || doc.at("format").get<int>() != kFormatVersion) {
        throw FileError(std::string(what) + ": unsupported or missing format version");
    }
}

Json value_to_json(double v) { return std::isinf(v) ? Json(nullptr) : Json(v); }
double value_from_json(const Json& j) { return j.is_null() ? kInfinity : j.get<double>(); }

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw FileError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileError("cannot write " + path.string());
    out << text;
}

RobotKind parse_robot_kind(const std::string& name) {
    if (name == "point") return RobotKind::Point;
    if (name == "stick") return RobotKind::Stick;
    throw FileError("unknown robot kind: " + name);
}

std::string robot_kind_name(RobotKind kind) { return kind == RobotKind::Point ? "point" : "stick"; }

Environment environment_from_json(const Json& doc) {
    check_format(doc, "environment");
    try {
        Environment env;
        env.name = doc.at("name").get<std::string>();
        const Json& b = doc.at("bounds");
        if (!b.is_array() || b.size() != 4) throw FileError("bounds must be [xmin, ymin, xmax, ymax]");
        env.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
        for (const Json& o : doc.value("obstacles", Json::array())) {
            const std::string type = o.at("type").get<std::string>();
            if (type == "polygon") {
                ConvexPolygon poly;
                for (const Json& v : o.at("vertices")) poly.vertices.push_back(point_from_json(v));
                env.static_obstacles.emplace_back(std::move(poly));
            } else if (type == "circle") {
                env.static_obstacles.emplace_back(Circle{point_from_json(o.at("center")), o.at("radius").get<double>()});
            } else {
                throw FileError("unknown obstacle type: " + type);
            }
        }
        env.start = config_from_json(doc.at("start"));
        env.goal = config_from_json(doc.at("goal"));
        env.start.theta = wrap_angle(env.start.theta);
        env.goal.theta = wrap_angle(env.goal.theta);
        env.goal_radius = doc.at("goal_radius").get<double>();
        if (doc.contains("dynamic") && !doc.at("dynamic").is_null()) {
            const Json& d = doc.at("dynamic");
            env.dynamic = DynamicObstacleSpec{d.at("count").get<int>(), d.at("radius").get<double>(),
                                              d.at("max_speed").get<double>(), d.at("perturb").get<double>()};
        }
        validate_environment(env, WeightMatrix{});
        return env;
    } catch (const Json::exception& e) {
        throw FileError(std::string("environment: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FileError(std::string("environment: ") + e.what());
    }
}

Json environment_to_json(const Environment& env) {
    Json obstacles = Json::array();
    for (const auto& o : env.static_obstacles) {
        if (const auto* c = std::get_if<Circle>(&o)) {
            obstacles.push_back({{"type", "circle"}, {"center", {c->center.x, c->center.y}}, {"radius", c->radius}});
        } else {
            Json vertices = Json::array();
            for (const Point2& p : std::get<ConvexPolygon>(o).vertices) vertices.push_back({p.x, p.y});
            obstacles.push_back({{"type", "polygon"}, {"vertices", vertices}});
        }
    }
    const bool heading = env.start.theta != 0.0 || env.goal.theta != 0.0;
    Json doc = {{"format", kFormatVersion},
                {"name", env.name},
                {"bounds", {env.bounds.xmin, env.bounds.ymin, env.bounds.xmax, env.bounds.ymax}},
                {"obstacles", obstacles},
                {"start", config_to_json(env.start, heading)},
                {"goal", config_to_json(env.goal, heading)},
                {"goal_radius", env.goal_radius}};
    if (env.dynamic) {
        doc["dynamic"] = {{"count", env.dynamic->count},
                          {"radius", env.dynamic->radius},
                          {"max_speed", env.dynamic->max_speed},
                          {"perturb", env.dynamic->perturbation_half_width}};
    }
    return doc;
}

Environment load_environment(const std::filesystem::path& path) {
    try {
        Environment env = environment_from_json(read_json_file(path));
        validate_environment(env, WeightMatrix{});
        return env;
    } catch (const FileError& e) {
        throw FileError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw FileError(path.string() + ": " + e.what());
    }
}

Json weights_to_json(const WeightMatrix& w, const RobotModel& robot) {
    if (robot.kind == RobotKind::Point) return Json::array({w.x, w.y});
    return Json::array({w.x, w.y, w.theta});
}

WeightMatrix weights_from_json(const Json& doc, const RobotModel& robot) {
    if (!doc.is_array() || doc.size() < 2 || doc.size() > 3) throw FileError("weights must be [w_x, w_y, w_theta?]");
    WeightMatrix w = default_weights(robot);
    w.x = doc[0].get<double>();
    w.y = doc[1].get<double>();
    if (doc.size() == 3) w.theta = doc[2].get<double>();
    if (!(w.x > 0.0 && w.y > 0.0 && w.theta > 0.0)) throw FileError("weights must be positive");
    return w;
}

Json tree_to_json(const TreeFile& tree) {
    const PlanningGraph& g = tree.graph;
    const bool heading = tree.robot.kind == RobotKind::Stick;
    Json vertices = Json::array();
    Json values = Json::array();
    Json edges = Json::array();
    for (VertexIndex v = 0; v < g.size(); ++v) {
        vertices.push_back(config_to_json(g.vertex(v), heading));
        values.push_back(value_to_json(g.value(v)));
        for (const Edge& e : g.neighbors(v)) {
            if (v < e.to) edges.push_back({v, e.to, e.cost});
        }
    }
    return {{"format", kFormatVersion},
            {"env_name", tree.env.name},
            {"environment", environment_to_json(tree.env)},
            {"robot", {{"kind", robot_kind_name(tree.robot.kind)}, {"stick_half_length", tree.robot.stick_half_length}}},
            {"weights", weights_to_json(g.weights(), tree.robot)},
            {"planner",
             {{"steer_radius_max", tree.planner.steer_radius_max},
              {"steer_radius_min", tree.planner.steer_radius_min},
              {"start_bias", tree.planner.start_bias},
              {"max_iterations", tree.planner.max_iterations}}},
            {"rng_seed", tree.rng_seed},
            {"iterations", tree.iterations},
            {"goal_index", g.goal_index()},
            {"start_index", tree.start_index},
            {"vertices", vertices},
            {"edges", edges},
            {"values", values}};
}

TreeFile tree_from_json(const Json& doc) {
    check_format(doc, "tree");
    try {
        const Json& robot = doc.at("robot");
        RobotModel model{parse_robot_kind(robot.at("kind").get<std::string>()),
                         robot.value("stick_half_length", 0.0)};
        const WeightMatrix w = weights_from_json(doc.at("weights"), model);

        std::vector<Configuration> vertices;
        for (const Json& v : doc.at("vertices")) vertices.push_back(config_from_json(v));
        std::vector<double> values;
        for (const Json& v : doc.at("values")) values.push_back(value_from_json(v));

        std::vector<std::pair<VertexIndex, VertexIndex>> edges;
        std::vector<double> stored_costs;
        for (const Json& e : doc.at("edges")) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3) throw FileError("edges must be [i, j] or [i, j, cost]");
            edges.emplace_back(e[0].get<VertexIndex>(), e[1].get<VertexIndex>());
            stored_costs.push_back(e.size() == 3 ? e[2].get<double>() : -1.0);
        }

        TreeFile tree{environment_from_json(doc.at("environment")), model,
                      PlanningGraph::assemble(vertices, edges, std::move(values), doc.at("goal_index").get<VertexIndex>(), w),
                      doc.at("start_index").get<VertexIndex>(), PlannerParams{}, doc.at("rng_seed").get<std::uint64_t>(),
                      doc.value("iterations", std::size_t{0})};
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (stored_costs[k] < 0.0) continue;
            const auto [u, v] = edges[k];
            const double recomputed = plan_metric(vertices[u], vertices[v], w);
            if (std::abs(recomputed - stored_costs[k]) > kEdgeCostTolerance) {
                throw FileError("edge " + std::to_string(u) + "-" + std::to_string(v) +
                                " cost does not match the planning metric");
            }
        }
        if (tree.start_index >= tree.graph.size()) throw FileError("start_index out of range");
        if (doc.contains("planner")) {
            const Json& p = doc.at("planner");
            tree.planner.steer_radius_max = p.value("steer_radius_max", tree.planner.steer_radius_max);
            tree.planner.steer_radius_min = p.value("steer_radius_min", tree.planner.steer_radius_min);
            tree.planner.start_bias = p.value("start_bias", tree.planner.start_bias);
            tree.planner.max_iterations = p.value("max_iterations", tree.planner.max_iterations);
        }
        tree.planner.rng_seed = tree.rng_seed;
        return tree;
    } catch (const Json::exception& e) {
        throw FileError(std::string("tree: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FileError(std::string("tree: ") + e.what());
    }
}

void save_tree(const std::filesystem::path& path, const TreeFile& tree) {
    write_text_file(path, tree_to_json(tree).dump() + "\n");
}

TreeFile load_tree(const std::filesystem::path& path) {
    try {
        return tree_from_json(read_json_file(path));
    } catch (const FileError& e) {
        throw FileError(path.string() + ": " + e.what());
    }
}

Json trial_to_json(const TrialRecord& record, bool include_trajectory) {
    Json doc = {{"format", kFormatVersion},
                {"outcome", std::string(outcome_name(record.outcome))},
                {"collided", record.collided},
                {"lost", record.lost},
                {"true_cost", record.true_cost},
                {"indicator_cost", record.indicator_cost},
                {"action_cost", record.action_cost},
                {"steps", record.steps}};
    if (include_trajectory) {
        Json traj = Json::array();
        for (const SimState& s : record.trajectory) traj.push_back({s.q.x, s.q.y, s.q.theta, s.v.x, s.v.y, s.v.theta});
        doc["trajectory"] = traj;
        doc["terminal_nodes"] = record.terminal_nodes;
    }
    return doc;
}

TrialRecord trial_from_json(const Json& doc) {
    check_format(doc, "trial");
    try {
        TrialRecord r;
        r.outcome = parse_outcome(doc.at("outcome").get<std::string>());
        r.collided = doc.at("collided").get<bool>();
        r.lost = doc.value("lost", false);
        r.true_cost = doc.at("true_cost").get<double>();
        r.indicator_cost = doc.value("indicator_cost", 0.0);
        r.action_cost = doc.value("action_cost", 0.0);
        r.steps = doc.at("steps").get<std::size_t>();
        for (const Json& s : doc.value("trajectory", Json::array())) {
            if (!s.is_array() || s.size() != 6) throw FileError("trajectory rows must have 6 entries");
            r.trajectory.push_back({{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()},
                                    {s[3].get<double>(), s[4].get<double>(), s[5].get<double>()}});
        }
        r.terminal_nodes = doc.value("terminal_nodes", std::vector<std::ptrdiff_t>{});
        return r;
    } catch (const Json::exception& e) {
        throw FileError(std::string("trial: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw FileError(std::string("trial: ") + e.what());
    }
}

}  // namespace treemppi
