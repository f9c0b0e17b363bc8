#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shootcalc/datagen.hpp"
#include "shootcalc/error.hpp"
#include "shootcalc/evaluation.hpp"
#include "shootcalc/mlp.hpp"
#include "shootcalc/parallel.hpp"
#include "shootcalc/surrogate.hpp"
#include "shootcalc/svg.hpp"
#include "shootcalc/textio.hpp"

// Command implementations behind the CLI. Each runner validates its
// options, does the work through the library, and returns a process exit
// code: 0 success, 2 usage error, 3 data error.

namespace shootcalc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

namespace detail {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ContractViolation& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
}

} // namespace detail

// --- gen ---------------------------------------------------------------------

struct GenOptions {
    std::uint64_t n = 0;
    ScenarioSpec spec;
    std::string out_path;
};

inline int run_gen(const GenOptions& opt, std::ostream& err = std::cerr) {
    if (opt.n == 0) {
        err << "error: --n must be positive\n";
        return kExitUsage;
    }
    if (opt.out_path.empty()) {
        err << "error: --out is required\n";
        return kExitUsage;
    }
    return detail::guarded(err, [&]() {
        const std::vector<Scenario> scenarios = sample_scenarios(opt.spec, opt.n);
        write_scenarios_jsonl(scenarios, opt.out_path);
        return kExitOk;
    });
}

// --- eval --------------------------------------------------------------------

struct EvalOptions {
    std::string scenario_path;
    Method method = Method::Cyrus;
    int k = 28;
    double threshold = 0.5;
    std::string out_csv;
    std::string svg_dir;  // empty: no diagrams
    FieldConfig field;
};

inline constexpr const char* kDecisionHeader =
    "scenario_id,method,shoot,target_index,target_x,target_y,score";

inline std::string decision_row(std::int64_t id, const ShootDecision& d) {
    std::ostringstream row;
    row << id << ',' << method_name(d.method) << ',' << (d.shoots() ? 1 : 0) << ',';
    if (d.shoots())
        row << *d.target_index << ',' << fmt_g17(d.target_point->x) << ','
            << fmt_g17(d.target_point->y);
    else
        row << ",,";
    row << ',' << fmt_g17(d.score);
    return row.str();
}

inline int run_eval(const EvalOptions& opt, std::ostream& err = std::cerr) {
    if (opt.out_csv.empty()) {
        err << "error: --out is required\n";
        return kExitUsage;
    }
    if (opt.method == Method::Surrogate) {
        err << "error: eval supports baseline and cyrus; use compare for the surrogate\n";
        return kExitUsage;
    }
    return detail::guarded(err, [&]() {
        const std::vector<Scenario> scenarios =
            read_scenarios_jsonl_file(opt.scenario_path, opt.field);
        const TargetGrid grid = make_target_grid(opt.field, opt.k);

        struct Row {
            ShootDecision decision;
            std::string svg;
        };
        std::vector<Row> rows(scenarios.size());
        const bool with_svg = !opt.svg_dir.empty();
        if (with_svg) std::filesystem::create_directories(opt.svg_dir);

        parallel_for(scenarios.size(), [&](std::size_t i) {
            const TargetEvaluation eval = evaluate_targets(scenarios[i], grid);
            rows[i].decision = opt.method == Method::Baseline
                                   ? baseline_select(eval, grid)
                                   : cyrus_select(eval, grid, opt.threshold);
            if (with_svg)
                rows[i].svg = scenario_svg(scenarios[i], grid, eval, rows[i].decision, opt.field);
        });

        std::ostringstream csv;
        csv << kDecisionHeader << '\n';
        for (std::size_t i = 0; i < rows.size(); ++i)
            csv << decision_row(static_cast<std::int64_t>(i), rows[i].decision) << '\n';
        write_text_file(opt.out_csv, csv.str());

        if (with_svg) {
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const std::filesystem::path p =
                    std::filesystem::path(opt.svg_dir) / ("scenario_" + std::to_string(i) + ".svg");
                write_text_file(p.string(), rows[i].svg);
            }
        }
        return kExitOk;
    });
}

// --- train -------------------------------------------------------------------

struct TrainOptions {
    std::string dataset_path;
    Encoding encoding = Encoding::Pattern;
    TrainConfig train;
    int hidden_dim = 16;
    double split_fraction = 0.8;
    std::string model_out;
    std::string history_out;  // empty: derived from model_out
};

/// Seeded-shuffle split into train/validation index sets.
inline void split_indices(std::size_t n, double train_fraction, std::uint64_t seed,
                          std::vector<std::size_t>& train_idx,
                          std::vector<std::size_t>& val_idx) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed, 0x5117ULL);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }
    const std::size_t n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
    train_idx.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    val_idx.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
}

inline Samples gather(const Samples& all, const std::vector<std::size_t>& idx) {
    Samples out;
    out.dim = all.dim;
    out.features.reserve(idx.size() * static_cast<std::size_t>(all.dim));
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) out.append(all.row(i), all.labels[i]);
    return out;
}

struct TrainResult {
    Mlp model;
    std::vector<EpochStats> history;
};

/// Library-level train command: 80/20 seeded split, normalization from the
/// training split only, then fit.
inline TrainResult train_on_records(std::span<const DatasetRecord> records,
                                    Encoding encoding, int hidden_dim,
                                    const TrainConfig& cfg, double split_fraction = 0.8) {
    if (records.empty())
        throw DataError("training dataset is empty");

    const Samples all = to_samples(records, encoding);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> val_idx;
    split_indices(all.size(), split_fraction, cfg.seed, train_idx, val_idx);
    if (train_idx.empty() || val_idx.empty())
        throw DataError("dataset too small for an 80/20 split");

    const Samples train_set = gather(all, train_idx);
    const Samples val_set = gather(all, val_idx);

    TrainResult result;
    result.model = make_mlp(feature_dim(encoding), hidden_dim, cfg.seed);
    set_normalization_from(result.model, train_set);
    result.history = fit(result.model, train_set, val_set, cfg);
    return result;
}

inline std::string history_csv(std::span<const EpochStats> history) {
    std::ostringstream out;
    out << "epoch,train_mse,val_mse\n";
    for (const EpochStats& row : history)
        out << row.epoch << ',' << fmt_g17(row.train_mse) << ',' << fmt_g17(row.val_mse) << '\n';
    return out.str();
}

inline int run_train(const TrainOptions& opt, std::ostream& err = std::cerr) {
    if (opt.model_out.empty()) {
        err << "error: --out is required\n";
        return kExitUsage;
    }
    if (opt.train.epochs < 0) {
        err << "error: --epochs must be >= 0\n";
        return kExitUsage;
    }
    return detail::guarded(err, [&]() {
        const std::vector<DatasetRecord> records = read_dataset_file(opt.dataset_path);
        const TrainResult result = train_on_records(records, opt.encoding, opt.hidden_dim,
                                                    opt.train, opt.split_fraction);
        save_mlp(result.model, opt.model_out);
        const std::string hist_path =
            opt.history_out.empty() ? opt.model_out + ".history.csv" : opt.history_out;
        write_text_file(hist_path, history_csv(result.history));
        return kExitOk;
    });
}

// --- compare -----------------------------------------------------------------

struct CompareOptions {
    std::string scenario_path;
    std::vector<Method> methods{Method::Baseline, Method::Cyrus};
    std::string model_path;  // required when methods includes Surrogate
    Encoding encoding = Encoding::Pattern;
    double threshold = 0.5;
    double poscount_factor = 0.0;
    int k = 28;
    std::uint64_t seed = 0;  // report metadata: the corpus generation seed
    std::string out_csv;     // empty: summary only
    FieldConfig field;
};

struct MethodStats {
    Method method = Method::Baseline;
    std::uint64_t scenarios = 0;
    std::uint64_t shots = 0;
    std::uint64_t successes = 0;  // oracle margin of the chosen target > 0
    double margin_sum = 0.0;      // oracle margin summed over taken shots

    double success_rate() const {
        return shots == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(shots);
    }
    double no_shoot_rate() const {
        return scenarios == 0
                   ? 0.0
                   : static_cast<double>(scenarios - shots) / static_cast<double>(scenarios);
    }
    double mean_margin() const {
        return shots == 0 ? 0.0 : margin_sum / static_cast<double>(shots);
    }
};

struct CompareReport {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    std::vector<MethodStats> methods;
};

inline constexpr const char* kCompareHeader =
    "method,n_scenarios,shots,success_rate,no_shoot_rate,mean_margin,seed";

inline std::string compare_csv(const CompareReport& report) {
    std::ostringstream out;
    out << "# success = oracle margin of the chosen target > 0 (desk-scale proxy,"
           " not a full-match win rate)\n";
    out << kCompareHeader << '\n';
    for (const MethodStats& m : report.methods)
        out << method_name(m.method) << ',' << m.scenarios << ',' << m.shots << ','
            << fmt_g17(m.success_rate()) << ',' << fmt_g17(m.no_shoot_rate()) << ','
            << fmt_g17(m.mean_margin()) << ',' << report.seed << '\n';
    return out.str();
}

inline std::string compare_summary(const CompareReport& report) {
    std::ostringstream out;
    out << "compared " << report.n << " scenarios (success = chosen target's oracle margin > 0)\n";
    for (const MethodStats& m : report.methods) {
        out << "  " << method_name(m.method) << ": success " << fmt_fixed(100.0 * m.success_rate(), 1)
            << "% over " << m.shots << " shots, no-shoot " << fmt_fixed(100.0 * m.no_shoot_rate(), 1)
            << "%, mean margin " << fmt_fixed(m.mean_margin(), 3) << '\n';
    }
    return out.str();
}

/// Evaluates every method on every scenario. Decisions come from the
/// method under test; success is judged by the interception oracle at the
/// chosen target.
inline CompareReport compare_methods(std::span<const Scenario> scenarios,
                                     const CompareOptions& opt, const Mlp* model) {
    const TargetGrid grid = make_target_grid(opt.field, opt.k);
    const PoscountCorrection correction{opt.poscount_factor};

    struct PerScenario {
        std::vector<std::optional<double>> shot_margin;  // oracle margin if the method shot
    };
    std::vector<PerScenario> outcomes(scenarios.size());

    parallel_for(scenarios.size(), [&](std::size_t i) {
        const TargetEvaluation oracle = evaluate_targets(scenarios[i], grid);
        PerScenario& out = outcomes[i];
        out.shot_margin.resize(opt.methods.size());
        for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
            ShootDecision d;
            switch (opt.methods[mi]) {
                case Method::Baseline: d = baseline_select(oracle, grid); break;
                case Method::Cyrus: d = cyrus_select(oracle, grid, opt.threshold); break;
                case Method::Surrogate:
                    d = surrogate_select(*model, scenarios[i], grid, opt.encoding, correction,
                                         opt.threshold);
                    break;
            }
            if (d.shoots())
                out.shot_margin[mi] = oracle.margins[static_cast<std::size_t>(*d.target_index)];
        }
    });

    CompareReport report;
    report.n = scenarios.size();
    report.seed = opt.seed;
    for (std::size_t mi = 0; mi < opt.methods.size(); ++mi) {
        MethodStats stats;
        stats.method = opt.methods[mi];
        stats.scenarios = scenarios.size();
        for (const PerScenario& out : outcomes) {
            if (!out.shot_margin[mi]) continue;
            ++stats.shots;
            if (*out.shot_margin[mi] > 0.0) ++stats.successes;
            stats.margin_sum += *out.shot_margin[mi];
        }
        report.methods.push_back(stats);
    }
    return report;
}

inline int run_compare(const CompareOptions& opt, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
    if (opt.methods.empty()) {
        err << "error: --methods must name at least one method\n";
        return kExitUsage;
    }
    const bool wants_surrogate =
        std::find(opt.methods.begin(), opt.methods.end(), Method::Surrogate) !=
        opt.methods.end();
    if (wants_surrogate && opt.model_path.empty()) {
        err << "error: the surrogate method requires --model\n";
        return kExitUsage;
    }
    return detail::guarded(err, [&]() {
        const std::vector<Scenario> scenarios =
            read_scenarios_jsonl_file(opt.scenario_path, opt.field);
        if (scenarios.empty())
            throw DataError("scenario file is empty: " + opt.scenario_path);

        Mlp model;
        if (wants_surrogate) model = load_mlp_file(opt.model_path);

        const CompareReport report = compare_methods(scenarios, opt, &model);
        out << compare_summary(report);
        if (!opt.out_csv.empty()) write_text_file(opt.out_csv, compare_csv(report));
        return kExitOk;
    });
}

} // namespace shootcalc
