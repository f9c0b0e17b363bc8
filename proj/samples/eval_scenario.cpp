// Evaluate one hand-built scenario with both selection methods and dump
// the margin diagram next to the binary.

#include <iostream>

#include "shootcalc/evaluation.hpp"
#include "shootcalc/svg.hpp"
#include "shootcalc/textio.hpp"

int main() {
    using namespace shootcalc;

    Scenario scenario;
    scenario.ball = {46.0, 3.0};
    scenario.opponents.push_back(make_goalie({52.5, 0.5}));
    Opponent defender;
    defender.position = {49.0, -2.0};
    defender.poscount = 4;
    scenario.opponents.push_back(defender);

    const TargetGrid grid = make_target_grid(FieldConfig{});
    const TargetEvaluation eval = evaluate_targets(scenario, grid);

    for (const ShootDecision& d :
         {baseline_select(eval, grid), cyrus_select(eval, grid)}) {
        std::cout << method_name(d.method) << ": ";
        if (d.shoots())
            std::cout << "shoot target " << *d.target_index << " at y="
                      << fmt_fixed(d.target_point->y, 2) << ", score "
                      << fmt_fixed(d.score, 3) << '\n';
        else
            std::cout << "no shot (score " << fmt_fixed(d.score, 3) << ")\n";
    }

    const std::string svg = scenario_svg(scenario, grid, eval, cyrus_select(eval, grid));
    write_text_file("eval_scenario.svg", svg);
    std::cout << "wrote eval_scenario.svg\n";
    return 0;
}
