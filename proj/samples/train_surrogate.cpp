// End-to-end surrogate workflow in miniature: sample scenarios, label them
// with the interception oracle, train the pattern-encoded network, and
// calibrate the staleness correction.

#include <iostream>

#include "shootcalc/datagen.hpp"
#include "shootcalc/pipeline.hpp"
#include "shootcalc/surrogate.hpp"
#include "shootcalc/textio.hpp"

int main() {
    using namespace shootcalc;

    ScenarioSpec spec;
    spec.seed = 7;
    const std::vector<Scenario> scenarios = sample_scenarios(spec, 40);
    const TargetGrid grid = make_target_grid(spec.field);
    const std::vector<DatasetRecord> records = label_records(scenarios, grid);
    std::cout << "labeled " << records.size() << " records\n";

    TrainConfig cfg;
    cfg.epochs = 40;
    cfg.seed = 7;
    const TrainResult result = train_on_records(records, Encoding::Pattern, 16, cfg);
    std::cout << "val MSE " << fmt_fixed(result.history.front().val_mse, 3) << " -> "
              << fmt_fixed(result.history.back().val_mse, 3) << " over "
              << cfg.epochs << " epochs\n";

    const std::vector<Scenario> calib = sample_scenarios(
        [&spec] { ScenarioSpec s = spec; s.seed = 8; return s; }(), 200);
    const PoscountCorrection correction = calibrate_poscount_factor(
        calib, grid, mlp_predictor(result.model, Encoding::Pattern), 9);
    std::cout << "poscount factor " << fmt_fixed(correction.factor, 4)
              << " cycles per poscount\n";
    return 0;
}
