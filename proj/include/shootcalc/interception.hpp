#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>

#include "shootcalc/error.hpp"
#include "shootcalc/geometry.hpp"
#include "shootcalc/kinematics.hpp"

namespace shootcalc {

/// Margin sentinel: a path no opponent threatens scores +1000 cycles,
/// an unreachable target scores -1000. Keeps margins finite and ordered.
inline constexpr double kMarginCap = 1000.0;

inline constexpr double kGoalieControlRadius = 2.0;  // catchable area

/// One opposing player as the shooter knows it. `poscount` is the number
/// of cycles since the player was last observed; it does not enter the
/// reach-time model here (staleness is handled by the learned correction).
struct Opponent {
    Vec2 position;
    int poscount = 0;
    double speed_max = 1.05;       // meters per cycle
    double control_radius = 1.085; // kickable margin, meters
    int turn_delay = 1;            // cycles before the pursuit starts
    bool is_goalie = false;
};

inline Opponent make_goalie(const Vec2& position, int poscount = 0) {
    Opponent goalie;
    goalie.position = position;
    goalie.poscount = poscount;
    goalie.control_radius = kGoalieControlRadius;
    goalie.is_goalie = true;
    return goalie;
}

inline void check_opponent(const Opponent& opp) {
    if (!opp.position.finite())
        throw ContractViolation("Opponent: position must be finite");
    if (!(opp.speed_max > 0.0))
        throw ContractViolation("Opponent: speed_max must be positive");
    if (opp.control_radius < 0.0)
        throw ContractViolation("Opponent: control_radius must be >= 0");
    if (opp.poscount < 0)
        throw ContractViolation("Opponent: poscount must be >= 0");
    if (opp.turn_delay < 0)
        throw ContractViolation("Opponent: turn_delay must be >= 0");
}

/// Cycles the opponent needs to control the ball at `point`:
/// 0 inside the control radius, otherwise turn_delay plus straight-line
/// pursuit time for the remaining distance.
inline double reach_cycles(const Opponent& opp, const Vec2& point) {
    check_opponent(opp);
    const double d = distance(opp.position, point);
    if (d <= opp.control_radius) return 0.0;
    return opp.turn_delay + (d - opp.control_radius) / opp.speed_max;
}

/// Interception outcome of one opponent against one ball path.
/// margin <= 0 means the opponent reaches some path point no later
/// than the ball does.
struct InterceptResult {
    double margin = 0.0;
    std::optional<int> intercept_cycle;
    bool intercepted = false;
};

/// margin = min over path cycles n of (reach_cycles(opp, positions[n]) - n),
/// taken up to the goal-crossing cycle when the path crosses.
/// intercept_cycle is the argmin; the smallest cycle wins ties.
inline InterceptResult intercept_margin(const Opponent& opp, const BallPath& path) {
    if (path.positions.empty())
        throw ContractViolation("intercept_margin: path has no positions");

    const int last = path.crossed_goal_at ? *path.crossed_goal_at
                                          : static_cast<int>(path.positions.size()) - 1;
    double best = std::numeric_limits<double>::infinity();
    int best_cycle = 0;
    for (int n = 0; n <= last; ++n) {
        const double m = reach_cycles(opp, path.positions[static_cast<std::size_t>(n)]) - n;
        if (m < best) {
            best = m;
            best_cycle = n;
        }
    }
    return InterceptResult{best, best_cycle, best <= 0.0};
}

/// Minimum of (reach - cycle) restricted to cycles >= 1, the ball already
/// in flight. Cycle 0 sits at the ball itself, so the full margin shares
/// that term across every target of a scenario and exact cross-target ties
/// are common; the in-flight margin is target-specific and discriminates
/// them. Paths with no in-flight positions score +kMarginCap.
inline double inflight_margin(const Opponent& opp, const BallPath& path) {
    if (path.positions.empty())
        throw ContractViolation("inflight_margin: path has no positions");

    const int last = path.crossed_goal_at ? *path.crossed_goal_at
                                          : static_cast<int>(path.positions.size()) - 1;
    double best = kMarginCap;
    for (int n = 1; n <= last; ++n)
        best = std::min(best,
                        reach_cycles(opp, path.positions[static_cast<std::size_t>(n)]) - n);
    return best;
}

struct PathMargin {
    double margin = kMarginCap;
    std::optional<std::size_t> worst_opponent;
};

/// Minimum intercept margin over all opponents; the index of the binding
/// opponent comes along (first one on exact ties). No opponents at all
/// yields the +kMarginCap sentinel.
inline PathMargin path_min_margin(std::span<const Opponent> opponents, const BallPath& path) {
    if (path.positions.empty())
        throw ContractViolation("path_min_margin: path has no positions");

    PathMargin result;
    for (std::size_t i = 0; i < opponents.size(); ++i) {
        const double m = intercept_margin(opponents[i], path).margin;
        if (!result.worst_opponent || m < result.margin) {
            result.margin = m;
            result.worst_opponent = i;
        }
    }
    return result;
}

} // namespace shootcalc
