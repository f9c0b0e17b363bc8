#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "shootcalc/error.hpp"
#include "shootcalc/evaluation.hpp"
#include "shootcalc/features.hpp"
#include "shootcalc/interception.hpp"
#include "shootcalc/kinematics.hpp"
#include "shootcalc/mlp.hpp"
#include "shootcalc/rng.hpp"

namespace shootcalc {

/// Additive staleness correction: factor * poscount is added to each
/// per-opponent prediction. Calibration yields factor <= 0 (a stale
/// observation is worth less margin than a fresh one).
struct PoscountCorrection {
    double factor = 0.0;
};

/// Surrogate margin for a single opponent, no staleness term.
inline double predict_margin(const Mlp& m, Encoding encoding, const Vec2& ball,
                             const Vec2& opp, const Vec2& target) {
    const std::vector<double> x = encode(encoding, ball, opp, target);
    return forward(m, x);
}

/// Scenario-level surrogate margin for one target: per-opponent prediction
/// plus factor * poscount, minimized over the opponents. No opponents at
/// all yields the +kMarginCap sentinel, mirroring the oracle.
inline double predict_scenario_margin(const Mlp& m, const Scenario& scenario,
                                      const Vec2& target, Encoding encoding,
                                      const PoscountCorrection& correction) {
    double best = kMarginCap;
    for (const Opponent& opp : scenario.opponents) {
        const double pred = predict_margin(m, encoding, scenario.ball, opp.position, target) +
                            correction.factor * opp.poscount;
        best = std::min(best, pred);
    }
    return best;
}

/// Margin-maximization selection driven by the surrogate instead of the
/// oracle; same argmax and threshold semantics as cyrus_select.
inline ShootDecision surrogate_select(const Mlp& m, const Scenario& scenario,
                                      const TargetGrid& grid, Encoding encoding,
                                      const PoscountCorrection& correction,
                                      double threshold = 0.5) {
    TargetEvaluation eval;
    eval.margins.reserve(grid.points.size());
    eval.scorable.reserve(grid.points.size());
    for (const Vec2& target : grid.points) {
        const double margin = predict_scenario_margin(m, scenario, target, encoding, correction);
        eval.margins.push_back(margin);
        eval.scorable.push_back(margin > 0.0);
    }
    ShootDecision decision = cyrus_select(eval, grid, threshold);
    decision.method = Method::Surrogate;
    return decision;
}

/// One calibration observation: an opponent's staleness and the gap
/// between the true margin and the surrogate's stale-input prediction.
struct PoscountSample {
    double poscount = 0.0;
    double residual = 0.0;
};

/// Zero-intercept least squares of residual against poscount:
/// factor = sum(pc * r) / sum(pc^2).
inline PoscountCorrection fit_poscount_factor(std::span<const PoscountSample> samples) {
    double num = 0.0;
    double den = 0.0;
    for (const PoscountSample& s : samples) {
        num += s.poscount * s.residual;
        den += s.poscount * s.poscount;
    }
    if (den == 0.0)
        throw DataError("fit_poscount_factor: all poscounts are zero, slope is undefined");
    return PoscountCorrection{num / den};
}

/// Single-opponent margin predictor; the calibration measures whichever
/// predictor will be corrected in deployment.
using MarginPredictor = std::function<double(const Vec2& ball, const Vec2& opp,
                                             const Vec2& target)>;

inline MarginPredictor mlp_predictor(const Mlp& m, Encoding encoding) {
    return [&m, encoding](const Vec2& ball, const Vec2& opp, const Vec2& target) {
        return predict_margin(m, encoding, ball, opp, target);
    };
}

/// Ground-truth predictor: the interception oracle itself. Useful for
/// isolating the staleness drift from surrogate fitting error.
inline MarginPredictor oracle_predictor() {
    return [](const Vec2& ball, const Vec2& opp, const Vec2& target) {
        Opponent o;
        o.position = opp;
        try {
            const BallPath path = simulate_path(ball, target, BallParams{});
            return std::clamp(intercept_margin(o, path).margin, -kMarginCap, kMarginCap);
        } catch (const UnreachableTarget&) {
            return -kMarginCap;
        }
    };
}

/// Builds (poscount, residual) pairs from scenarios treated as ground
/// truth. Each opponent's position is its true one; the observation the
/// predictor sees is displaced by a seeded random vector of length up to
/// poscount * speed_max (uniform direction, uniform length, clamped to the
/// field), i.e. where the agent last saw a player that has since moved.
/// residual = true margin - prediction from the stale observation, one
/// pair per (scenario, opponent, target).
inline std::vector<PoscountSample> staleness_residual_pairs(
    std::span<const Scenario> scenarios, const TargetGrid& grid,
    const MarginPredictor& predictor, std::uint64_t seed,
    const FieldConfig& field = {}) {
    std::vector<PoscountSample> pairs;

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const Scenario& scenario = scenarios[s];
        Rng rng(seed, s);

        std::vector<BallPath> paths;
        std::vector<bool> reachable;
        paths.reserve(grid.points.size());
        for (const Vec2& target : grid.points) {
            try {
                paths.push_back(simulate_path(scenario.ball, target, scenario.ball_params));
                reachable.push_back(true);
            } catch (const UnreachableTarget&) {
                paths.push_back(BallPath{});
                reachable.push_back(false);
            }
        }

        for (const Opponent& opp : scenario.opponents) {
            const double angle = rng.uniform(0.0, 2.0 * std::acos(-1.0));
            const double length = rng.next_double() * opp.poscount * opp.speed_max;
            Vec2 stale = opp.position + Vec2{std::cos(angle), std::sin(angle)} * length;
            stale.x = std::clamp(stale.x, -field.goal_line_x, field.goal_line_x);
            stale.y = std::clamp(stale.y, -field.field_half_height, field.field_half_height);

            for (std::size_t t = 0; t < grid.points.size(); ++t) {
                if (!reachable[t]) continue;
                const double truth =
                    std::clamp(intercept_margin(opp, paths[t]).margin, -kMarginCap, kMarginCap);
                const double predicted = predictor(scenario.ball, stale, grid.points[t]);
                pairs.push_back({static_cast<double>(opp.poscount), truth - predicted});
            }
        }
    }
    return pairs;
}

/// Staleness simulation plus the zero-intercept regression in one step.
inline PoscountCorrection calibrate_poscount_factor(std::span<const Scenario> scenarios,
                                                    const TargetGrid& grid,
                                                    const MarginPredictor& predictor,
                                                    std::uint64_t seed,
                                                    const FieldConfig& field = {}) {
    const std::vector<PoscountSample> pairs =
        staleness_residual_pairs(scenarios, grid, predictor, seed, field);
    return fit_poscount_factor(pairs);
}

} // namespace shootcalc
