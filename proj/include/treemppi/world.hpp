#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "treemppi/rng.hpp"
#include "treemppi/types.hpp"

namespace treemppi {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

struct Bounds {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;
};

/// Strictly convex polygon, counter-clockwise.
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

struct Circle {
    Point2 center;
    double radius = 0.0;
};

using StaticObstacle = std::variant<ConvexPolygon, Circle>;

struct DynamicObstacle {
    Point2 center;
    double radius = 0.0;
    Point2 velocity;  // meters per control step
    double max_speed = 0.0;
};

struct DynamicObstacleSpec {
    int count = 0;
    double radius = 0.0;
    double max_speed = 0.0;
    double perturbation_half_width = 0.0;
};

struct Environment {
    std::string name;
    Bounds bounds;
    std::vector<StaticObstacle> static_obstacles;
    Configuration start;
    Configuration goal;
    double goal_radius = 0.3;
    std::optional<DynamicObstacleSpec> dynamic;
};

/// Throws std::invalid_argument when the polygon is not strictly convex and
/// counter-clockwise with at least three vertices.
void validate_polygon(const ConvexPolygon& polygon);

/// Structural checks on an environment (shapes, bounds, goal radius, start
/// outside the goal region). Robot-dependent checks are in validate_for_robot.
void validate_environment(const Environment& env, const WeightMatrix& weights);
void validate_for_robot(const Environment& env, const RobotModel& robot);

/// Copy of env with start/goal headings zeroed for point robots.
Environment adapted_to(Environment env, const RobotModel& robot);

bool point_in_polygon(const ConvexPolygon& polygon, Point2 p);
bool segment_intersects_polygon(const ConvexPolygon& polygon, Point2 a, Point2 b);
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Endpoints of the stick body at q.
std::pair<Point2, Point2> stick_segment(const RobotModel& robot, const Configuration& q);

bool collides_static(const Environment& env, const RobotModel& robot, const Configuration& q);
bool collides_dynamic(const RobotModel& robot, const Configuration& q, std::span<const DynamicObstacle> obstacles);

/// Contact counts as collision: touching a shape or the bounds collides.
bool collides(const Environment& env, const RobotModel& robot, const Configuration& q,
              std::span<const DynamicObstacle> dynamic_obstacles = {});

/// Closed metric ball of radius goal_radius around env.goal.
bool in_goal(const Environment& env, const Configuration& q, const WeightMatrix& weights);

inline constexpr double kDefaultStartBias = 0.05;

/// With probability start_bias returns env.start exactly, otherwise a uniform
/// configuration over the bounds (heading uniform on [-pi, pi) for sticks).
Configuration sample_config(const Environment& env, const RobotModel& robot, RandomStream& rng,
                            double start_bias = kDefaultStartBias);

/// Places spec.count obstacles uniformly in the bounds, at rest, keeping them
/// clear of the start configuration.
std::vector<DynamicObstacle> spawn_dynamic_obstacles(const Environment& env, const DynamicObstacleSpec& spec,
                                                     RandomStream& rng);

/// One step: perturb velocity, clamp speed, advance, reflect at bounds.
/// Uses env.dynamic's perturbation half width (zero when absent).
std::vector<DynamicObstacle> step_dynamic_obstacles(std::vector<DynamicObstacle> obstacles, const Environment& env,
                                                    RandomStream& rng);
std::vector<DynamicObstacle> step_dynamic_obstacles(std::vector<DynamicObstacle> obstacles, const Bounds& bounds,
                                                    double perturbation_half_width, RandomStream& rng);

}  // namespace treemppi
