#include "treemppi/render.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "treemppi/planner.hpp"

namespace treemppi {

namespace {

constexpr double kScale = 60.0;  // pixels per metre

struct Canvas {
    const Bounds& b;
    std::ostringstream os;

    double px(double x) const { return (x - b.xmin) * kScale; }
    double py(double y) const { return (b.ymax - y) * kScale; }

    void line(Point2 a, Point2 c, const char* cls) {
        char buf[192];
        std::snprintf(buf, sizeof buf, "<line class=\"%s\" x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n", cls,
                      px(a.x), py(a.y), px(c.x), py(c.y));
        os << buf;
    }
    void circle(Point2 c, double r_px, const char* cls) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "<circle class=\"%s\" cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n", cls, px(c.x),
                      py(c.y), r_px);
        os << buf;
    }
};

void draw_robot(Canvas& c, const RobotModel& robot, const Configuration& q, const char* cls) {
    if (robot.kind == RobotKind::Stick) {
        const auto [a, b] = stick_segment(robot, q);
        c.line(a, b, cls);
    } else {
        c.circle({q.x, q.y}, 5.0, cls);
    }
}

}  // namespace

std::string render_svg(const Environment& env, const TreeFile* tree, const TrialRecord* trial) {
    Canvas c{env.bounds, {}};
    const double w = (env.bounds.xmax - env.bounds.xmin) * kScale;
    const double h = (env.bounds.ymax - env.bounds.ymin) * kScale;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                  w, h, w, h);
    c.os << buf;
    c.os << "<style>\n"
            ".bounds{fill:white;stroke:black;stroke-width:2}\n"
            ".obstacle{fill:#555;stroke:none}\n"
            ".goal{fill:#9c9;fill-opacity:0.6;stroke:#363}\n"
            ".start{fill:none;stroke:#06c;stroke-width:2}\n"
            ".edge{stroke:#9ab;stroke-width:0.6}\n"
            ".min-path{stroke:#d60;stroke-width:3}\n"
            ".trajectory{stroke:#06c;stroke-width:2}\n"
            ".terminal{fill:red;stroke:none}\n"
            "</style>\n";
    std::snprintf(buf, sizeof buf, "<rect class=\"bounds\" x=\"0\" y=\"0\" width=\"%.3f\" height=\"%.3f\"/>\n", w, h);
    c.os << buf;

    for (const StaticObstacle& obstacle : env.static_obstacles) {
        if (const auto* poly = std::get_if<ConvexPolygon>(&obstacle)) {
            c.os << "<polygon class=\"obstacle\" points=\"";
            for (const Point2& v : poly->vertices) {
                std::snprintf(buf, sizeof buf, "%.3f,%.3f ", c.px(v.x), c.py(v.y));
                c.os << buf;
            }
            c.os << "\"/>\n";
        } else {
            const auto& circ = std::get<Circle>(obstacle);
            c.circle(circ.center, circ.radius * kScale, "obstacle");
        }
    }
    c.circle({env.goal.x, env.goal.y}, env.goal_radius * kScale, "goal");

    // Robot kind for drawing start/trajectory; point unless a tree says otherwise.
    const RobotModel robot = tree ? tree->robot : RobotModel::point();

    if (tree) {
        const PlanningGraph& g = tree->graph;
        c.os << "<g class=\"tree\">\n";
        for (VertexIndex i = 0; i < g.size(); ++i) {
            for (const Edge& e : g.neighbors(i)) {
                if (e.to <= i) continue;
                const Configuration a = g.vertex(i);
                const Configuration b = g.vertex(e.to);
                c.line({a.x, a.y}, {b.x, b.y}, "edge");
            }
        }
        c.os << "</g>\n";
        if (std::isfinite(g.value(tree->start_index))) {
            const auto path = extract_min_path(g, tree->start_index);
            for (std::size_t k = 1; k < path.size(); ++k) {
                const Configuration a = g.vertex(path[k - 1]);
                const Configuration b = g.vertex(path[k]);
                c.line({a.x, a.y}, {b.x, b.y}, "min-path");
            }
        }
    }

    if (trial && !trial->trajectory.empty()) {
        c.os << "<g class=\"trial\">\n";
        for (std::size_t k = 1; k < trial->trajectory.size(); ++k) {
            const Configuration& a = trial->trajectory[k - 1].q;
            const Configuration& b = trial->trajectory[k].q;
            c.line({a.x, a.y}, {b.x, b.y}, "trajectory");
        }
        if (robot.kind == RobotKind::Stick) {
            for (std::size_t k = 0; k < trial->trajectory.size(); k += 10) {
                draw_robot(c, robot, trial->trajectory[k].q, "trajectory");
            }
        }
        c.os << "</g>\n";
    }
    if (trial && tree) {
        std::set<std::ptrdiff_t> drawn;
        for (std::ptrdiff_t node : trial->terminal_nodes) {
            if (node < 0 || static_cast<std::size_t>(node) >= tree->graph.size() || !drawn.insert(node).second) continue;
            const Configuration q = tree->graph.vertex(static_cast<VertexIndex>(node));
            c.circle({q.x, q.y}, 3.0, "terminal");
        }
    }

    draw_robot(c, robot, env.start, "start");
    c.os << "</svg>\n";
    return c.os.str();
}

}  // namespace treemppi
