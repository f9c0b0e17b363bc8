#pragma once

#include <sstream>
#include <string>

#include "shootcalc/evaluation.hpp"
#include "shootcalc/textio.hpp"

namespace shootcalc {

namespace detail {

// Fixed viewport over the attacking third; 16 px per meter, y flipped.
struct SvgFrame {
    double x_min = 33.0;
    double x_max = 55.0;
    double y_min = -22.0;
    double y_max = 22.0;
    double scale = 16.0;

    double width() const { return (x_max - x_min) * scale; }
    double height() const { return (y_max - y_min) * scale; }
    double px(double x) const { return (x - x_min) * scale; }
    double py(double y) const { return (y_max - y) * scale; }
};

inline void svg_circle(std::ostream& out, const SvgFrame& f, const Vec2& c, double radius_m,
                       const std::string& fill, const std::string& stroke,
                       double stroke_width = 1.0) {
    out << "<circle cx=\"" << fmt_fixed(f.px(c.x), 2) << "\" cy=\"" << fmt_fixed(f.py(c.y), 2)
        << "\" r=\"" << fmt_fixed(radius_m * f.scale, 2) << "\" fill=\"" << fill
        << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt_fixed(stroke_width, 1)
        << "\"/>\n";
}

} // namespace detail

/// Margin diagram of one evaluated scenario: goal mouth, the target grid
/// colored by margin sign, ball, opponents at their control radii, and the
/// chosen target. Pure text with fixed decimals, byte-stable across runs.
inline std::string scenario_svg(const Scenario& scenario, const TargetGrid& grid,
                                const TargetEvaluation& eval, const ShootDecision& decision,
                                const FieldConfig& field = {}) {
    const detail::SvgFrame f;
    std::ostringstream out;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_fixed(f.width(), 0)
        << "\" height=\"" << fmt_fixed(f.height(), 0) << "\" viewBox=\"0 0 "
        << fmt_fixed(f.width(), 0) << ' ' << fmt_fixed(f.height(), 0) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"#1f7a33\"/>\n";

    // goal line and goal mouth
    out << "<line x1=\"" << fmt_fixed(f.px(field.goal_line_x), 2) << "\" y1=\"0\" x2=\""
        << fmt_fixed(f.px(field.goal_line_x), 2) << "\" y2=\"" << fmt_fixed(f.height(), 0)
        << "\" stroke=\"#ffffff\" stroke-width=\"2.0\"/>\n";
    out << "<line x1=\"" << fmt_fixed(f.px(field.goal_line_x), 2) << "\" y1=\""
        << fmt_fixed(f.py(field.goal_half_width), 2) << "\" x2=\""
        << fmt_fixed(f.px(field.goal_line_x), 2) << "\" y2=\""
        << fmt_fixed(f.py(-field.goal_half_width), 2)
        << "\" stroke=\"#dddddd\" stroke-width=\"6.0\"/>\n";

    // path to the chosen target
    if (decision.target_point) {
        out << "<line x1=\"" << fmt_fixed(f.px(scenario.ball.x), 2) << "\" y1=\""
            << fmt_fixed(f.py(scenario.ball.y), 2) << "\" x2=\""
            << fmt_fixed(f.px(decision.target_point->x), 2) << "\" y2=\""
            << fmt_fixed(f.py(decision.target_point->y), 2)
            << "\" stroke=\"#ffff66\" stroke-width=\"2.0\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const bool ok = i < eval.scorable.size() && eval.scorable[i];
        detail::svg_circle(out, f, grid.points[i], 0.18, ok ? "#7CFC00" : "#d93025", "none",
                           0.0);
    }

    for (const Opponent& opp : scenario.opponents) {
        detail::svg_circle(out, f, opp.position, opp.control_radius, "none",
                           opp.is_goalie ? "#ffa500" : "#222222", 1.0);
        detail::svg_circle(out, f, opp.position, 0.3,
                           opp.is_goalie ? "#ffa500" : "#222222", "none", 0.0);
    }

    detail::svg_circle(out, f, scenario.ball, 0.3, "#ffffff", "#000000", 1.0);

    if (decision.target_point)
        detail::svg_circle(out, f, *decision.target_point, 0.45, "none", "#00bfff", 2.0);

    out << "<text x=\"8\" y=\"20\" font-family=\"monospace\" font-size=\"14\" fill=\"#ffffff\">"
        << method_name(decision.method) << ' '
        << (decision.shoots() ? "shoot target " + std::to_string(*decision.target_index)
                              : std::string("no-shoot"))
        << " score " << fmt_fixed(decision.score, 3) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace shootcalc
