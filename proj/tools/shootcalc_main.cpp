// shootcalc command-line front end: gen / eval / train / compare.
// All logic lives in the library; this file only maps flags onto the
// runner option structs and keeps to the exit-code contract
// (0 success, 2 usage error, 3 data error).

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shootcalc/pipeline.hpp"

namespace {

using namespace shootcalc;

int dispatch(CLI::App& app, int argc, char** argv,
             const std::function<int()>& selected) {
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    return selected();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic shoot-target evaluation for 2D soccer simulation"};
    app.require_subcommand(1);

    GenOptions gen;
    long long gen_n = 0;
    CLI::App* cmd_gen = app.add_subcommand("gen", "sample scenarios into a JSONL file");
    cmd_gen->add_option("--n", gen_n, "number of scenarios")->required();
    cmd_gen->add_option("--seed", gen.spec.seed, "generation seed");
    cmd_gen->add_option("--out", gen.out_path, "output JSONL path")->required();
    cmd_gen->add_option("--goalie-prob", gen.spec.goalie_probability,
                        "probability of drawing a goalie");
    cmd_gen->add_option("--opponents-min", gen.spec.n_opponents_min, "minimum opponent count");
    cmd_gen->add_option("--opponents-max", gen.spec.n_opponents_max, "maximum opponent count");
    cmd_gen->add_option("--poscount-max", gen.spec.poscount_max, "maximum staleness in cycles");
    cmd_gen->add_option("--ball-speed", gen.spec.ball_params.initial_speed,
                        "initial shot speed, m/cycle");
    cmd_gen->add_option("--decay", gen.spec.ball_params.decay, "per-cycle ball decay");

    EvalOptions eval;
    std::string eval_method = "cyrus";
    CLI::App* cmd_eval = app.add_subcommand("eval", "decide shots for a scenario file");
    cmd_eval->add_option("scenarios", eval.scenario_path, "scenario JSONL file")->required();
    cmd_eval->add_option("--method", eval_method, "baseline or cyrus");
    cmd_eval->add_option("--k", eval.k, "number of goal targets");
    cmd_eval->add_option("--threshold", eval.threshold, "cyrus no-shoot threshold, cycles");
    cmd_eval->add_option("--out", eval.out_csv, "decision CSV path")->required();
    cmd_eval->add_option("--svg", eval.svg_dir, "directory for per-scenario margin diagrams");

    TrainOptions train;
    std::string train_encoding = "pattern";
    CLI::App* cmd_train = app.add_subcommand("train", "fit the margin surrogate on a dataset");
    cmd_train->add_option("dataset", train.dataset_path, "labeled dataset CSV")->required();
    cmd_train->add_option("--encoding", train_encoding, "raw or pattern");
    cmd_train->add_option("--epochs", train.train.epochs, "training epochs");
    cmd_train->add_option("--seed", train.train.seed, "shuffle/init seed");
    cmd_train->add_option("--lr", train.train.learning_rate, "learning rate");
    cmd_train->add_option("--batch", train.train.batch_size, "mini-batch size");
    cmd_train->add_option("--hidden", train.hidden_dim, "hidden layer width");
    cmd_train->add_option("--out", train.model_out, "model output path")->required();
    cmd_train->add_option("--history", train.history_out,
                          "per-epoch MSE CSV (default: <model>.history.csv)");

    CompareOptions compare;
    std::string compare_methods_flag = "baseline,cyrus";
    std::string compare_encoding = "pattern";
    CLI::App* cmd_compare =
        app.add_subcommand("compare", "score selection methods against the oracle");
    cmd_compare->add_option("scenarios", compare.scenario_path, "scenario JSONL file")
        ->required();
    cmd_compare->add_option("--methods", compare_methods_flag,
                            "comma list of baseline,cyrus,surrogate");
    cmd_compare->add_option("--model", compare.model_path, "surrogate model file");
    cmd_compare->add_option("--encoding", compare_encoding, "surrogate feature encoding");
    cmd_compare->add_option("--threshold", compare.threshold, "no-shoot threshold, cycles");
    cmd_compare->add_option("--poscount-factor", compare.poscount_factor,
                            "additive staleness correction per poscount");
    cmd_compare->add_option("--k", compare.k, "number of goal targets");
    cmd_compare->add_option("--seed", compare.seed, "corpus seed recorded in the report");
    cmd_compare->add_option("--out", compare.out_csv, "report CSV path");

    return dispatch(app, argc, argv, [&]() -> int {
        if (cmd_gen->parsed()) {
            if (gen_n <= 0) {
                std::cerr << "error: --n must be positive\n";
                return kExitUsage;
            }
            gen.n = static_cast<std::uint64_t>(gen_n);
            return run_gen(gen);
        }
        if (cmd_eval->parsed()) {
            const auto method = method_from_name(eval_method);
            if (!method || *method == Method::Surrogate) {
                std::cerr << "error: unknown eval method '" << eval_method << "'\n";
                return kExitUsage;
            }
            eval.method = *method;
            return run_eval(eval);
        }
        if (cmd_train->parsed()) {
            if (train_encoding == "raw") train.encoding = Encoding::Raw;
            else if (train_encoding == "pattern") train.encoding = Encoding::Pattern;
            else {
                std::cerr << "error: unknown encoding '" << train_encoding << "'\n";
                return kExitUsage;
            }
            return run_train(train);
        }
        if (cmd_compare->parsed()) {
            compare.methods.clear();
            for (const std::string& name : split_fields(compare_methods_flag)) {
                const auto method = method_from_name(name);
                if (!method) {
                    std::cerr << "error: unknown method '" << name << "'\n";
                    return kExitUsage;
                }
                compare.methods.push_back(*method);
            }
            if (compare_encoding == "raw") compare.encoding = Encoding::Raw;
            else if (compare_encoding == "pattern") compare.encoding = Encoding::Pattern;
            else {
                std::cerr << "error: unknown encoding '" << compare_encoding << "'\n";
                return kExitUsage;
            }
            return run_compare(compare);
        }
        return kExitUsage;
    });
}
