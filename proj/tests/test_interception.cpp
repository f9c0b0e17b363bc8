#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "shootcalc/interception.hpp"
#include "shootcalc/rng.hpp"

using namespace shootcalc;

namespace {

// Oracle written against the definition, independent of intercept_margin.
double brute_force_margin(const Opponent& opp, const BallPath& path) {
    const int last = path.crossed_goal_at ? *path.crossed_goal_at
                                          : static_cast<int>(path.positions.size()) - 1;
    double best = 1e300;
    for (int n = 0; n <= last; ++n) {
        const Vec2& p = path.positions[static_cast<std::size_t>(n)];
        const double d = std::sqrt((opp.position.x - p.x) * (opp.position.x - p.x) +
                                   (opp.position.y - p.y) * (opp.position.y - p.y));
        double reach = 0.0;
        if (d > opp.control_radius)
            reach = opp.turn_delay + (d - opp.control_radius) / opp.speed_max;
        best = std::min(best, reach - n);
    }
    return best;
}

Opponent opponent_at(double x, double y) {
    Opponent opp;
    opp.position = {x, y};
    return opp;
}

} // namespace

TEST_CASE("reach_cycles formula") {
    CHECK(reach_cycles(opponent_at(0, 0), {1.0, 0}) == 0.0);  // inside control radius
    CHECK(reach_cycles(opponent_at(0, 0), {0, 0}) == 0.0);
    CHECK(reach_cycles(opponent_at(0, 0), {2.135, 0}) ==
          doctest::Approx(2.0).epsilon(1e-12));  // 1 + (2.135-1.085)/1.05

    Opponent goalie = make_goalie({0, 0});
    CHECK(goalie.control_radius == 2.0);
    CHECK(reach_cycles(goalie, {1.9, 0}) == 0.0);
}

TEST_CASE("reach_cycles validates the opponent") {
    Opponent bad = opponent_at(0, 0);
    bad.speed_max = 0.0;
    CHECK_THROWS_AS(reach_cycles(bad, {1, 1}), ContractViolation);
    bad = opponent_at(0, 0);
    bad.poscount = -1;
    CHECK_THROWS_AS(reach_cycles(bad, {1, 1}), ContractViolation);
}

TEST_CASE("intercept_margin: far opponent cannot reach, on-ball opponent intercepts") {
    const BallPath path = simulate_path({47.5, 0}, {52.5, 0}, {3.0, 0.94});

    const InterceptResult far = intercept_margin(opponent_at(20.0, 30.0), path);
    CHECK(far.margin > 0.0);
    CHECK_FALSE(far.intercepted);

    const InterceptResult on_ball = intercept_margin(opponent_at(47.5, 0), path);
    CHECK(on_ball.margin == 0.0);
    REQUIRE(on_ball.intercept_cycle.has_value());
    CHECK(*on_ball.intercept_cycle == 0);
    CHECK(on_ball.intercepted);
}

TEST_CASE("intercept_margin equals the brute-force oracle") {
    const BallPath path = simulate_path({47.5, 0}, {52.5, 0}, {3.0, 0.94});
    const Opponent opp = opponent_at(50.5, 1.0);
    const InterceptResult r = intercept_margin(opp, path);
    CHECK(r.margin == doctest::Approx(brute_force_margin(opp, path)).epsilon(1e-12));

    Rng rng(90210);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 ball{rng.uniform(30, 50), rng.uniform(-15, 15)};
        const Vec2 target{52.5, rng.uniform(-6.5, 6.5)};
        const BallPath p = simulate_path(ball, target, {3.0, 0.94});
        const Opponent o = opponent_at(rng.uniform(35, 52.5), rng.uniform(-20, 20));
        const InterceptResult res = intercept_margin(o, p);
        CHECK(res.margin == doctest::Approx(brute_force_margin(o, p)).epsilon(1e-12));
        CHECK(res.intercepted == (res.margin <= 0.0));
        REQUIRE(res.intercept_cycle.has_value());
        CHECK(*res.intercept_cycle >= 0);
        CHECK(*res.intercept_cycle < static_cast<int>(p.positions.size()));
    }
}

TEST_CASE("path_min_margin: sentinel, singleton, and elementwise minimum") {
    const BallPath path = simulate_path({47.5, 0}, {52.5, 0}, {3.0, 0.94});

    const PathMargin empty = path_min_margin({}, path);
    CHECK(empty.margin == kMarginCap);
    CHECK_FALSE(empty.worst_opponent.has_value());

    const Opponent solo = opponent_at(50.0, 2.0);
    const std::vector<Opponent> one{solo};
    CHECK(path_min_margin(one, path).margin == intercept_margin(solo, path).margin);

    Rng rng(555);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Opponent> three;
        for (int i = 0; i < 3; ++i)
            three.push_back(opponent_at(rng.uniform(40, 52.5), rng.uniform(-20, 20)));
        const PathMargin got = path_min_margin(three, path);
        double expect = 1e300;
        std::size_t expect_idx = 0;
        for (std::size_t i = 0; i < three.size(); ++i) {
            const double m = brute_force_margin(three[i], path);
            if (m < expect) {
                expect = m;
                expect_idx = i;
            }
        }
        CHECK(got.margin == doctest::Approx(expect).epsilon(1e-12));
        REQUIRE(got.worst_opponent.has_value());
        CHECK(*got.worst_opponent == expect_idx);
    }
}

TEST_CASE("adding an opponent never increases the path margin") {
    Rng rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 ball{rng.uniform(36, 50), rng.uniform(-15, 15)};
        const BallPath path = simulate_path(ball, {52.5, rng.uniform(-6.5, 6.5)}, {3.0, 0.94});

        std::vector<Opponent> opponents;
        const int n = rng.uniform_int(0, 5);
        for (int i = 0; i < n; ++i)
            opponents.push_back(opponent_at(rng.uniform(40, 52.5), rng.uniform(-20, 20)));
        const double before = path_min_margin(opponents, path).margin;

        opponents.push_back(opponent_at(rng.uniform(40, 52.5), rng.uniform(-20, 20)));
        const double after = path_min_margin(opponents, path).margin;
        CHECK(after <= before);
    }
}

TEST_CASE("moving an opponent farther from every path point never lowers its margin") {
    Rng rng(98);
    for (int trial = 0; trial < 200; ++trial) {
        const Vec2 ball{rng.uniform(36, 50), rng.uniform(-5, 5)};
        const BallPath path = simulate_path(ball, {52.5, rng.uniform(-6.5, 6.5)}, {3.0, 0.94});

        double max_path_y = -1e300;
        for (const Vec2& p : path.positions) max_path_y = std::max(max_path_y, p.y);

        // start above the whole path and move straight up: distance to every
        // path point strictly increases
        Opponent opp = opponent_at(rng.uniform(40, 52.5), max_path_y + rng.uniform(0.1, 10.0));
        const double before = intercept_margin(opp, path).margin;
        opp.position.y += rng.uniform(0.0, 20.0);
        const double after = intercept_margin(opp, path).margin;
        CHECK(after >= before);
    }
}

TEST_CASE("margins are mirror symmetric") {
    Rng rng(66);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec2 ball{rng.uniform(36, 50), rng.uniform(-15, 15)};
        const Vec2 target{52.5, rng.uniform(-6.5, 6.5)};
        const Opponent opp = opponent_at(rng.uniform(40, 52.5), rng.uniform(-20, 20));

        const BallPath path = simulate_path(ball, target, {3.0, 0.94});
        const BallPath mirror_path =
            simulate_path(ball.mirrored(), target.mirrored(), {3.0, 0.94});
        Opponent mirror_opp = opp;
        mirror_opp.position = opp.position.mirrored();

        const double a = intercept_margin(opp, path).margin;
        const double b = intercept_margin(mirror_opp, mirror_path).margin;
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("reach_cycles is 1/speed_max-Lipschitz outside the control radius") {
    Rng rng(1212);
    const Opponent opp = opponent_at(0, 0);
    for (int trial = 0; trial < 500; ++trial) {
        const Vec2 a{rng.uniform(-30, 30), rng.uniform(-30, 30)};
        const Vec2 b{rng.uniform(-30, 30), rng.uniform(-30, 30)};
        if (distance(a, opp.position) <= opp.control_radius ||
            distance(b, opp.position) <= opp.control_radius)
            continue;
        const double gap = std::abs(reach_cycles(opp, a) - reach_cycles(opp, b));
        CHECK(gap <= distance(a, b) / opp.speed_max + 1e-12);
    }
}
