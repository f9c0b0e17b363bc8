#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "shootcalc/error.hpp"
#include "shootcalc/geometry.hpp"

namespace shootcalc {

/// Ball motion parameters of the simulated shot: the ball covers
/// initial_speed meters in its first cycle, then each per-cycle
/// displacement shrinks by the decay factor (ground friction).
struct BallParams {
    double initial_speed = 3.0;  // meters per cycle
    double decay = 0.94;         // per-cycle velocity factor, in (0,1)
};

inline void check_ball_params(const BallParams& params) {
    if (!(params.initial_speed > 0.0) || !std::isfinite(params.initial_speed))
        throw ContractViolation("BallParams: initial_speed must be positive");
    if (!(params.decay > 0.0) || !(params.decay < 1.0))
        throw ContractViolation("BallParams: decay must lie in (0,1)");
}

/// Discretized ball trajectory toward a shoot target.
/// positions[n] is the ball location at cycle n, positions[0] == origin.
/// crossed_goal_at, when set, is the first cycle whose progress along the
/// ray reaches the origin->target distance; unset means the ball slowed
/// below the stop speed before arriving.
struct BallPath {
    Vec2 origin;
    Vec2 target;
    std::vector<Vec2> positions;
    std::optional<int> crossed_goal_at;
};

/// Closed form of the per-cycle recurrence p_{n+1} = p_n + v_n,
/// v_{n+1} = v_n * decay with v_0 = initial_speed:
/// position(n) = origin + direction * initial_speed * (1 - decay^n) / (1 - decay).
/// `direction` must be unit length within 1e-9.
inline Vec2 ball_position_at(const Vec2& origin, const Vec2& direction,
                             const BallParams& params, int n) {
    check_ball_params(params);
    if (n < 0)
        throw ContractViolation("ball_position_at: cycle count must be >= 0");
    if (std::abs(direction.norm() - 1.0) > 1e-9)
        throw ContractViolation("ball_position_at: direction must be a unit vector");
    const double progress =
        params.initial_speed * (1.0 - std::pow(params.decay, n)) / (1.0 - params.decay);
    return origin + direction * progress;
}

/// Geometric-series limit of total travel, initial_speed / (1 - decay).
/// Evaluated in percent scale: server decay constants are two-decimal
/// values (0.94), and 100 - 94 is exact in doubles where 1 - 0.94 is not,
/// so the canonical limit 3.0 / 0.06 comes out as exactly 50.0.
inline double max_travel_distance(const BallParams& params) {
    check_ball_params(params);
    return params.initial_speed * 100.0 / (100.0 - params.decay * 100.0);
}

/// Simulates the shot from `ball` toward `target` cycle by cycle.
/// Stops at the first cycle whose progress covers the ball->target
/// distance (sets crossed_goal_at) or once the per-cycle speed drops
/// below `stop_speed` (crossed_goal_at left unset).
/// Throws UnreachableTarget when the target lies at or beyond the
/// total travel limit.
inline BallPath simulate_path(const Vec2& ball, const Vec2& target,
                              const BallParams& params, double stop_speed = 0.1) {
    check_ball_params(params);
    if (!(stop_speed > 0.0))
        throw ContractViolation("simulate_path: stop_speed must be positive");
    if (!ball.finite() || !target.finite())
        throw ContractViolation("simulate_path: ball and target must be finite");

    const Vec2 offset = target - ball;
    const double dist = offset.norm();
    if (dist == 0.0)
        throw ContractViolation("simulate_path: target must differ from ball");

    const double limit = max_travel_distance(params);
    if (dist >= limit)
        throw UnreachableTarget(dist, limit);

    const Vec2 dir = offset / dist;

    BallPath path;
    path.origin = ball;
    path.target = target;
    path.positions.push_back(ball);

    double speed = params.initial_speed;
    double progress = 0.0;
    int cycle = 0;
    while (speed >= stop_speed) {
        progress += speed;
        path.positions.push_back(ball + dir * progress);
        ++cycle;
        if (progress >= dist) {
            path.crossed_goal_at = cycle;
            break;
        }
        speed *= params.decay;
    }
    return path;
}

} // namespace shootcalc
