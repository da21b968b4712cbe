#include "treemppi/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treemppi {

namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 p, Point2 a, Point2 b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection, touching included.
bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    const int d1 = sign(cross(q1, q2, p1));
    const int d2 = sign(cross(q1, q2, p2));
    const int d3 = sign(cross(p1, p2, q1));
    const int d4 = sign(cross(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(p1, q1, q2)) return true;
    if (d2 == 0 && on_segment(p2, q1, q2)) return true;
    if (d3 == 0 && on_segment(q1, p1, p2)) return true;
    if (d4 == 0 && on_segment(q2, p1, p2)) return true;
    return false;
}

bool point_outside_bounds(const Bounds& b, Point2 p) {
    return !(p.x > b.xmin && p.x < b.xmax && p.y > b.ymin && p.y < b.ymax);
}

bool point_hits_static(const StaticObstacle& obstacle, Point2 p) {
    if (const auto* circle = std::get_if<Circle>(&obstacle)) {
        return std::hypot(p.x - circle->center.x, p.y - circle->center.y) <= circle->radius;
    }
    return point_in_polygon(std::get<ConvexPolygon>(obstacle), p);
}

bool segment_hits_static(const StaticObstacle& obstacle, Point2 a, Point2 b) {
    if (const auto* circle = std::get_if<Circle>(&obstacle)) {
        return point_segment_distance(circle->center, a, b) <= circle->radius;
    }
    return segment_intersects_polygon(std::get<ConvexPolygon>(obstacle), a, b);
}

}  // namespace

void validate_polygon(const ConvexPolygon& polygon) {
    const auto& v = polygon.vertices;
    if (v.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % v.size()];
        const Point2 c = v[(i + 2) % v.size()];
        if (!(cross(a, b, c) > 0.0)) throw std::invalid_argument("polygon must be strictly convex and counter-clockwise");
    }
    // Local left turns also admit star-shaped windings; the total turn must be one revolution.
    double turning = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2 a = v[i];
        const Point2 b = v[(i + 1) % v.size()];
        const Point2 c = v[(i + 2) % v.size()];
        turning += std::atan2(cross(a, b, c), (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y));
    }
    if (std::abs(turning - kTwoPi) > 1e-6) throw std::invalid_argument("polygon winds more than once");
}

void validate_environment(const Environment& env, const WeightMatrix& weights) {
    const Bounds& b = env.bounds;
    if (!(b.xmax > b.xmin && b.ymax > b.ymin)) throw std::invalid_argument("bounds must have positive extent");
    for (const auto& obstacle : env.static_obstacles) {
        if (const auto* circle = std::get_if<Circle>(&obstacle)) {
            if (!(circle->radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
        } else {
            validate_polygon(std::get<ConvexPolygon>(obstacle));
        }
    }
    if (!(env.goal_radius > 0.0)) throw std::invalid_argument("goal_radius must be positive");
    if (in_goal(env, env.start, weights)) throw std::invalid_argument("start lies inside the goal region");
    if (env.dynamic) {
        const auto& d = *env.dynamic;
        if (d.count < 0 || d.radius <= 0.0 || d.max_speed < 0.0 || d.perturbation_half_width < 0.0) {
            throw std::invalid_argument("invalid dynamic obstacle block");
        }
    }
}

void validate_for_robot(const Environment& env, const RobotModel& robot) {
    if (robot.kind == RobotKind::Stick && !(robot.stick_half_length > 0.0)) {
        throw std::invalid_argument("stick_half_length must be positive");
    }
    if (collides(env, robot, env.start)) throw std::invalid_argument("start configuration is in collision");
    if (collides(env, robot, env.goal)) throw std::invalid_argument("goal configuration is in collision");
}

Environment adapted_to(Environment env, const RobotModel& robot) {
    if (robot.kind == RobotKind::Point) {
        env.start.theta = 0.0;
        env.goal.theta = 0.0;
    }
    return env;
}

bool point_in_polygon(const ConvexPolygon& polygon, Point2 p) {
    const auto& v = polygon.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (cross(v[i], v[(i + 1) % v.size()], p) < 0.0) return false;
    }
    return true;
}

bool segment_intersects_polygon(const ConvexPolygon& polygon, Point2 a, Point2 b) {
    if (point_in_polygon(polygon, a) || point_in_polygon(polygon, b)) return true;
    const auto& v = polygon.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (segments_intersect(a, b, v[i], v[(i + 1) % v.size()])) return true;
    }
    return false;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

std::pair<Point2, Point2> stick_segment(const RobotModel& robot, const Configuration& q) {
    const double hx = robot.stick_half_length * std::cos(q.theta);
    const double hy = robot.stick_half_length * std::sin(q.theta);
    return {{q.x - hx, q.y - hy}, {q.x + hx, q.y + hy}};
}

bool collides_static(const Environment& env, const RobotModel& robot, const Configuration& q) {
    if (robot.kind == RobotKind::Point) {
        const Point2 p{q.x, q.y};
        if (point_outside_bounds(env.bounds, p)) return true;
        return std::any_of(env.static_obstacles.begin(), env.static_obstacles.end(),
                           [&](const StaticObstacle& o) { return point_hits_static(o, p); });
    }
    const auto [a, b] = stick_segment(robot, q);
    // The bounds are convex, so the endpoints decide containment.
    if (point_outside_bounds(env.bounds, a) || point_outside_bounds(env.bounds, b)) return true;
    return std::any_of(env.static_obstacles.begin(), env.static_obstacles.end(),
                       [&](const StaticObstacle& o) { return segment_hits_static(o, a, b); });
}

bool collides_dynamic(const RobotModel& robot, const Configuration& q, std::span<const DynamicObstacle> obstacles) {
    if (robot.kind == RobotKind::Point) {
        return std::any_of(obstacles.begin(), obstacles.end(), [&](const DynamicObstacle& o) {
            return std::hypot(q.x - o.center.x, q.y - o.center.y) <= o.radius;
        });
    }
    const auto [a, b] = stick_segment(robot, q);
    return std::any_of(obstacles.begin(), obstacles.end(),
                       [&](const DynamicObstacle& o) { return point_segment_distance(o.center, a, b) <= o.radius; });
}

bool collides(const Environment& env, const RobotModel& robot, const Configuration& q,
              std::span<const DynamicObstacle> dynamic_obstacles) {
    return collides_static(env, robot, q) || collides_dynamic(robot, q, dynamic_obstacles);
}

bool in_goal(const Environment& env, const Configuration& q, const WeightMatrix& weights) {
    return plan_metric(q, env.goal, weights) <= env.goal_radius;
}

Configuration sample_config(const Environment& env, const RobotModel& robot, RandomStream& rng, double start_bias) {
    if (rng.uniform() < start_bias) return env.start;
    Configuration q;
    q.x = rng.uniform(env.bounds.xmin, env.bounds.xmax);
    q.y = rng.uniform(env.bounds.ymin, env.bounds.ymax);
    if (robot.kind == RobotKind::Stick) q.theta = rng.uniform(-kPi, kPi);
    return q;
}

std::vector<DynamicObstacle> spawn_dynamic_obstacles(const Environment& env, const DynamicObstacleSpec& spec,
                                                     RandomStream& rng) {
    constexpr double kStartClearance = 1.0;
    std::vector<DynamicObstacle> out;
    out.reserve(static_cast<std::size_t>(std::max(spec.count, 0)));
    for (int i = 0; i < spec.count; ++i) {
        DynamicObstacle o;
        o.radius = spec.radius;
        o.max_speed = spec.max_speed;
        // Bounded rejection; the last draw is kept if the bounds are too cramped.
        for (int attempt = 0; attempt < 1000; ++attempt) {
            o.center = {rng.uniform(env.bounds.xmin, env.bounds.xmax), rng.uniform(env.bounds.ymin, env.bounds.ymax)};
            if (std::hypot(o.center.x - env.start.x, o.center.y - env.start.y) > spec.radius + kStartClearance) break;
        }
        out.push_back(o);
    }
    return out;
}

std::vector<DynamicObstacle> step_dynamic_obstacles(std::vector<DynamicObstacle> obstacles, const Environment& env,
                                                    RandomStream& rng) {
    const double h = env.dynamic ? env.dynamic->perturbation_half_width : 0.0;
    return step_dynamic_obstacles(std::move(obstacles), env.bounds, h, rng);
}

std::vector<DynamicObstacle> step_dynamic_obstacles(std::vector<DynamicObstacle> obstacles, const Bounds& b,
                                                    double h, RandomStream& rng) {
    for (auto& o : obstacles) {
        o.velocity.x += rng.uniform(-h, h);
        o.velocity.y += rng.uniform(-h, h);
        const double speed = std::hypot(o.velocity.x, o.velocity.y);
        if (speed > o.max_speed) {
            const double scale = speed > 0.0 ? o.max_speed / speed : 0.0;
            o.velocity = {o.velocity.x * scale, o.velocity.y * scale};
            // Rounding can leave the norm one ulp above the limit.
            while (std::hypot(o.velocity.x, o.velocity.y) > o.max_speed) {
                o.velocity = {o.velocity.x * (1.0 - 0x1.0p-50), o.velocity.y * (1.0 - 0x1.0p-50)};
            }
        }
        o.center.x += o.velocity.x;
        o.center.y += o.velocity.y;
        if (o.center.x < b.xmin) {
            o.center.x = 2.0 * b.xmin - o.center.x;
            o.velocity.x = -o.velocity.x;
        } else if (o.center.x > b.xmax) {
            o.center.x = 2.0 * b.xmax - o.center.x;
            o.velocity.x = -o.velocity.x;
        }
        if (o.center.y < b.ymin) {
            o.center.y = 2.0 * b.ymin - o.center.y;
            o.velocity.y = -o.velocity.y;
        } else if (o.center.y > b.ymax) {
            o.center.y = 2.0 * b.ymax - o.center.y;
            o.velocity.y = -o.velocity.y;
        }
        o.center.x = std::clamp(o.center.x, b.xmin, b.xmax);
        o.center.y = std::clamp(o.center.y, b.ymin, b.ymax);
    }
    return obstacles;
}

}  // namespace treemppi
