#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "shootcalc/error.hpp"
#include "shootcalc/geometry.hpp"

namespace shootcalc {

enum class Encoding { Raw, Pattern };

inline constexpr int feature_dim(Encoding encoding) {
    return encoding == Encoding::Raw ? 6 : 3;
}

/// Plain coordinate packing, in declared order.
struct RawFeatures {
    double ball_x = 0.0;
    double ball_y = 0.0;
    double opp_x = 0.0;
    double opp_y = 0.0;
    double target_x = 0.0;
    double target_y = 0.0;

    std::array<double, 6> values() const {
        return {ball_x, ball_y, opp_x, opp_y, target_x, target_y};
    }
};

inline RawFeatures encode_raw(const Vec2& ball, const Vec2& opp, const Vec2& target) {
    return RawFeatures{ball.x, ball.y, opp.x, opp.y, target.x, target.y};
}

struct RawTriple {
    Vec2 ball;
    Vec2 opp;
    Vec2 target;
};

inline RawTriple decode_raw(const RawFeatures& f) {
    return RawTriple{{f.ball_x, f.ball_y}, {f.opp_x, f.opp_y}, {f.target_x, f.target_y}};
}

/// Rigid-motion-invariant encoding: the two ball-relative distances and
/// the unsigned angle between the ball->target and ball->opponent rays.
/// The unsigned angle (rather than a signed one) is what keeps the
/// encoding identical for a scenario and its mirror image.
struct PatternFeatures {
    double dist_ball_target = 0.0;
    double dist_ball_opp = 0.0;
    double angle = 0.0;  // radians, in [0, pi]

    std::array<double, 3> values() const { return {dist_ball_target, dist_ball_opp, angle}; }
};

/// An opponent sitting exactly on the ball encodes as distance 0, angle 0.
inline PatternFeatures encode_pattern(const Vec2& ball, const Vec2& opp, const Vec2& target) {
    const Vec2 to_target = target - ball;
    const double dist_bt = to_target.norm();
    if (dist_bt == 0.0)
        throw ContractViolation("encode_pattern: target must differ from ball");

    const Vec2 to_opp = opp - ball;
    const double dist_bo = to_opp.norm();

    double angle = 0.0;
    if (dist_bo > 0.0)
        angle = std::atan2(std::abs(to_target.cross(to_opp)), to_target.dot(to_opp));

    return PatternFeatures{dist_bt, dist_bo, angle};
}

/// Feature vector for the surrogate's input layer.
inline std::vector<double> encode(Encoding encoding, const Vec2& ball, const Vec2& opp,
                                  const Vec2& target) {
    if (encoding == Encoding::Raw) {
        const auto v = encode_raw(ball, opp, target).values();
        return std::vector<double>(v.begin(), v.end());
    }
    const auto v = encode_pattern(ball, opp, target).values();
    return std::vector<double>(v.begin(), v.end());
}

} // namespace shootcalc
