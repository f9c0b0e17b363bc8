#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shootcalc/error.hpp"
#include "shootcalc/geometry.hpp"
#include "shootcalc/interception.hpp"
#include "shootcalc/kinematics.hpp"

namespace shootcalc {

/// Pitch geometry around the attacked goal. Targets are inset from the
/// posts by post_margin.
struct FieldConfig {
    double goal_line_x = 52.5;
    double goal_half_width = 7.01;
    double post_margin = 0.5;
    double field_half_height = 34.0;
};

inline void check_field_config(const FieldConfig& field) {
    if (!(field.goal_half_width > field.post_margin) || field.post_margin < 0.0)
        throw ContractViolation("FieldConfig: need goal_half_width > post_margin >= 0");
}

/// K aim points on the goal mouth, equidistant, y strictly increasing.
struct TargetGrid {
    std::vector<Vec2> points;

    int size() const { return static_cast<int>(points.size()); }
};

/// y_i = -(half_width - post_margin) + i * 2(half_width - post_margin)/(K-1),
/// endpoints inclusive, all points on the goal line.
inline TargetGrid make_target_grid(const FieldConfig& field, int k = 28) {
    check_field_config(field);
    if (k < 2)
        throw ContractViolation("make_target_grid: need at least 2 targets");

    const double span = field.goal_half_width - field.post_margin;
    TargetGrid grid;
    grid.points.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double y = -span + static_cast<double>(i) * (2.0 * span) / (k - 1);
        grid.points.push_back({field.goal_line_x, y});
    }
    return grid;
}

/// The shoot situation: ball location, known opponents, ball physics.
struct Scenario {
    Vec2 ball;
    std::vector<Opponent> opponents;
    BallParams ball_params;
};

inline constexpr double kUnreachableMargin = -kMarginCap;

/// Per-target interception margins for one scenario.
/// scorable[i] <=> margins[i] > 0. Targets beyond the travel limit carry
/// the -1000 sentinel instead of raising.
///
/// inflight holds the cycle>=1 margin per target. The full margins of one
/// scenario frequently tie bit-exactly (an opponent close to the ball
/// binds every target through the shared cycle-0 term), and the selectors
/// use the in-flight value as the tie key because it is target-specific
/// and mirror-equivariant where a plain index rule is not. Evaluations
/// built from margins alone may leave it empty.
struct TargetEvaluation {
    std::vector<double> margins;
    std::vector<bool> scorable;
    std::vector<double> inflight;

    bool has_inflight() const { return inflight.size() == margins.size(); }
};

inline TargetEvaluation evaluate_targets(const Scenario& scenario, const TargetGrid& grid) {
    TargetEvaluation eval;
    eval.margins.reserve(grid.points.size());
    eval.scorable.reserve(grid.points.size());
    eval.inflight.reserve(grid.points.size());
    for (const Vec2& target : grid.points) {
        double margin = kUnreachableMargin;
        double forward = kUnreachableMargin;
        try {
            const BallPath path = simulate_path(scenario.ball, target, scenario.ball_params);
            margin = std::clamp(path_min_margin(scenario.opponents, path).margin,
                                -kMarginCap, kMarginCap);
            forward = kMarginCap;
            for (const Opponent& opp : scenario.opponents)
                forward = std::min(forward, inflight_margin(opp, path));
            forward = std::clamp(forward, -kMarginCap, kMarginCap);
        } catch (const UnreachableTarget&) {
        }
        eval.margins.push_back(margin);
        eval.scorable.push_back(margin > 0.0);
        eval.inflight.push_back(forward);
    }
    return eval;
}

enum class Method { Baseline, Cyrus, Surrogate };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::Baseline: return "baseline";
        case Method::Cyrus: return "cyrus";
        case Method::Surrogate: return "surrogate";
    }
    return "unknown";
}

inline std::optional<Method> method_from_name(const std::string& name) {
    if (name == "baseline") return Method::Baseline;
    if (name == "cyrus") return Method::Cyrus;
    if (name == "surrogate") return Method::Surrogate;
    return std::nullopt;
}

/// Outcome of a selection method. target_index/target_point are present
/// exactly when the method decides to shoot.
struct ShootDecision {
    std::optional<int> target_index;
    std::optional<Vec2> target_point;
    double score = 0.0;
    Method method = Method::Baseline;

    bool shoots() const { return target_index.has_value(); }
};

namespace detail {

struct Run {
    int lo = 0;
    int hi = 0;
    double min_margin = 0.0;
    double min_inflight = 0.0;

    int length() const { return hi - lo + 1; }
};

inline std::vector<Run> scorable_runs(const TargetEvaluation& eval) {
    const bool with_inflight = eval.has_inflight();
    std::vector<Run> runs;
    const int k = static_cast<int>(eval.scorable.size());
    int i = 0;
    while (i < k) {
        if (!eval.scorable[static_cast<std::size_t>(i)]) {
            ++i;
            continue;
        }
        Run run;
        run.lo = i;
        run.min_margin = eval.margins[static_cast<std::size_t>(i)];
        run.min_inflight = with_inflight ? eval.inflight[static_cast<std::size_t>(i)] : 0.0;
        while (i + 1 < k && eval.scorable[static_cast<std::size_t>(i + 1)]) {
            ++i;
            run.min_margin = std::min(run.min_margin, eval.margins[static_cast<std::size_t>(i)]);
            if (with_inflight)
                run.min_inflight =
                    std::min(run.min_inflight, eval.inflight[static_cast<std::size_t>(i)]);
        }
        run.hi = i;
        runs.push_back(run);
        ++i;
    }
    return runs;
}

} // namespace detail

/// Longest-consecutive-run selection: the widest block of scorable targets
/// wins and its center is the shot. Equal-length blocks are broken by the
/// larger in-block minimum margin, then the larger in-block minimum
/// in-flight margin, then the lower start index. For even-length blocks
/// the center is whichever of the two middle targets compares larger by
/// (margin, in-flight margin), the lower index on a full tie. Margin-based
/// tie keys keep the choice mirror-equivariant where fixed index rules are
/// not. Score is the run length; no scorable target means no shot.
inline ShootDecision baseline_select(const TargetEvaluation& eval, const TargetGrid& grid) {
    if (eval.margins.size() != grid.points.size() || eval.scorable.size() != grid.points.size())
        throw ContractViolation("baseline_select: evaluation and grid sizes differ");

    ShootDecision decision;
    decision.method = Method::Baseline;

    const std::vector<detail::Run> runs = detail::scorable_runs(eval);
    if (runs.empty()) return decision;

    const detail::Run* best = &runs.front();
    for (const detail::Run& run : runs) {
        if (run.length() != best->length()) {
            if (run.length() > best->length()) best = &run;
        } else if (run.min_margin != best->min_margin) {
            if (run.min_margin > best->min_margin) best = &run;
        } else if (run.min_inflight > best->min_inflight) {
            best = &run;
        }
    }

    int center = (best->lo + best->hi) / 2;
    if (best->length() % 2 == 0) {
        const std::size_t lo_mid = static_cast<std::size_t>(center);
        const std::size_t hi_mid = lo_mid + 1;
        if (eval.margins[hi_mid] > eval.margins[lo_mid])
            center = static_cast<int>(hi_mid);
        else if (eval.margins[hi_mid] == eval.margins[lo_mid] && eval.has_inflight() &&
                 eval.inflight[hi_mid] > eval.inflight[lo_mid])
            center = static_cast<int>(hi_mid);
    }

    decision.target_index = center;
    decision.target_point = grid.points[static_cast<std::size_t>(center)];
    decision.score = best->length();
    return decision;
}

/// Margin-maximization selection: argmax of the per-target margins.
/// Exact ties fall to the larger in-flight margin, then toward the grid
/// center, then toward the lower index. The shot is taken only when the
/// best margin clears the threshold; score is the best margin either way.
inline ShootDecision cyrus_select(const TargetEvaluation& eval, const TargetGrid& grid,
                                  double threshold = 0.5) {
    if (eval.margins.size() != grid.points.size())
        throw ContractViolation("cyrus_select: evaluation and grid sizes differ");
    if (!(threshold >= 0.0))
        throw ContractViolation("cyrus_select: threshold must be >= 0");
    if (eval.margins.empty())
        throw ContractViolation("cyrus_select: empty evaluation");

    const bool with_inflight = eval.has_inflight();
    const double center = (static_cast<double>(eval.margins.size()) - 1.0) / 2.0;
    int best = 0;
    for (int i = 1; i < static_cast<int>(eval.margins.size()); ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        const std::size_t sb = static_cast<std::size_t>(best);
        if (eval.margins[si] != eval.margins[sb]) {
            if (eval.margins[si] > eval.margins[sb]) best = i;
        } else if (with_inflight && eval.inflight[si] != eval.inflight[sb]) {
            if (eval.inflight[si] > eval.inflight[sb]) best = i;
        } else if (std::abs(i - center) < std::abs(best - center)) {
            best = i;
        }
    }

    ShootDecision decision;
    decision.method = Method::Cyrus;
    decision.score = eval.margins[static_cast<std::size_t>(best)];
    if (decision.score > threshold) {
        decision.target_index = best;
        decision.target_point = grid.points[static_cast<std::size_t>(best)];
    }
    return decision;
}

/// Mirror of a scenario across the field's long axis.
inline Scenario mirrored(const Scenario& scenario) {
    Scenario out = scenario;
    out.ball = scenario.ball.mirrored();
    for (Opponent& opp : out.opponents) opp.position = opp.position.mirrored();
    return out;
}

} // namespace shootcalc
