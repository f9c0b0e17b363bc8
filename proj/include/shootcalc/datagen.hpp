#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shootcalc/error.hpp"
#include "shootcalc/evaluation.hpp"
#include "shootcalc/features.hpp"
#include "shootcalc/interception.hpp"
#include "shootcalc/mlp.hpp"
#include "shootcalc/rng.hpp"
#include "shootcalc/textio.hpp"

namespace shootcalc {

/// Sampling ranges for synthetic attacking situations. Scenario i is a
/// pure function of (seed, i); see sample_scenario.
struct ScenarioSpec {
    double ball_x_min = 36.0;
    double ball_x_max = 52.0;
    double ball_y_min = -20.0;
    double ball_y_max = 20.0;
    int n_opponents_min = 1;
    int n_opponents_max = 11;
    double opp_x_min = 40.0;
    double opp_x_max = 52.5;
    double opp_y_min = -20.0;
    double opp_y_max = 20.0;
    double goalie_probability = 0.9;
    int poscount_min = 0;
    int poscount_max = 30;
    std::uint64_t seed = 0;
    BallParams ball_params;
    FieldConfig field;
};

inline void check_scenario_spec(const ScenarioSpec& spec) {
    if (!(spec.ball_x_min <= spec.ball_x_max) || !(spec.ball_y_min <= spec.ball_y_max))
        throw ContractViolation("ScenarioSpec: empty ball range");
    if (!(spec.opp_x_min <= spec.opp_x_max) || !(spec.opp_y_min <= spec.opp_y_max))
        throw ContractViolation("ScenarioSpec: empty opponent box");
    if (spec.n_opponents_min < 0 || spec.n_opponents_min > spec.n_opponents_max)
        throw ContractViolation("ScenarioSpec: bad opponent count range");
    if (spec.poscount_min < 0 || spec.poscount_min > spec.poscount_max)
        throw ContractViolation("ScenarioSpec: bad poscount range");
    if (spec.goalie_probability < 0.0 || spec.goalie_probability > 1.0)
        throw ContractViolation("ScenarioSpec: goalie_probability outside [0,1]");
    if (spec.ball_x_max >= spec.field.goal_line_x)
        throw ContractViolation("ScenarioSpec: ball range crosses the goal line");
    if (spec.ball_x_min < -spec.field.goal_line_x ||
        std::max(std::abs(spec.ball_y_min), std::abs(spec.ball_y_max)) >
            spec.field.field_half_height ||
        spec.opp_x_min < -spec.field.goal_line_x || spec.opp_x_max > spec.field.goal_line_x ||
        std::max(std::abs(spec.opp_y_min), std::abs(spec.opp_y_max)) >
            spec.field.field_half_height)
        throw ContractViolation("ScenarioSpec: sampling boxes leave the field");
    check_ball_params(spec.ball_params);
    check_field_config(spec.field);
}

/// Deterministic counter-based sampling: the generator for scenario i is
/// keyed by (seed, i), so any index is reproducible in isolation and
/// generation can be sharded. Draw order: ball x, ball y, opponent count,
/// goalie flag, then per opponent (goalie first when drawn) position and
/// poscount. The goalie stands on the goal mouth with the enlarged
/// control radius and counts toward the opponent total.
inline Scenario sample_scenario(const ScenarioSpec& spec, std::uint64_t index) {
    check_scenario_spec(spec);
    Rng rng(spec.seed, index);

    Scenario scenario;
    scenario.ball_params = spec.ball_params;
    scenario.ball.x = rng.uniform(spec.ball_x_min, spec.ball_x_max);
    scenario.ball.y = rng.uniform(spec.ball_y_min, spec.ball_y_max);

    const int n = rng.uniform_int(spec.n_opponents_min, spec.n_opponents_max);
    const bool with_goalie = rng.bernoulli(spec.goalie_probability) && n > 0;
    scenario.opponents.reserve(static_cast<std::size_t>(n));

    if (with_goalie) {
        const double y =
            rng.uniform(-spec.field.goal_half_width, spec.field.goal_half_width);
        Opponent goalie = make_goalie({spec.field.goal_line_x, y});
        goalie.poscount = rng.uniform_int(spec.poscount_min, spec.poscount_max);
        scenario.opponents.push_back(goalie);
    }
    for (int i = with_goalie ? 1 : 0; i < n; ++i) {
        Opponent opp;
        opp.position.x = rng.uniform(spec.opp_x_min, spec.opp_x_max);
        opp.position.y = rng.uniform(spec.opp_y_min, spec.opp_y_max);
        opp.poscount = rng.uniform_int(spec.poscount_min, spec.poscount_max);
        scenario.opponents.push_back(opp);
    }
    return scenario;
}

inline std::vector<Scenario> sample_scenarios(const ScenarioSpec& spec, std::uint64_t count) {
    std::vector<Scenario> scenarios;
    scenarios.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) scenarios.push_back(sample_scenario(spec, i));
    return scenarios;
}

/// One labeled observation: a single opponent against a single target,
/// with the interception oracle's margin as ground truth.
struct DatasetRecord {
    std::int64_t scenario_id = 0;
    Vec2 ball;
    Vec2 opponent;
    int poscount = 0;
    Vec2 target;
    double true_margin = 0.0;

    bool operator==(const DatasetRecord&) const = default;
};

/// Labels every (scenario, opponent, target) triple in lexicographic
/// order. The margin is the single opponent's intercept margin against
/// the simulated path; unreachable targets take the -1000 sentinel.
inline std::vector<DatasetRecord> label_records(std::span<const Scenario> scenarios,
                                                const TargetGrid& grid) {
    if (scenarios.empty())
        throw DataError("label_records: no scenarios");

    std::vector<DatasetRecord> records;
    records.reserve(scenarios.size() * grid.points.size());

    for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const Scenario& scenario = scenarios[s];

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
            for (std::size_t t = 0; t < grid.points.size(); ++t) {
                DatasetRecord rec;
                rec.scenario_id = static_cast<std::int64_t>(s);
                rec.ball = scenario.ball;
                rec.opponent = opp.position;
                rec.poscount = opp.poscount;
                rec.target = grid.points[t];
                rec.true_margin =
                    reachable[t]
                        ? std::clamp(intercept_margin(opp, paths[t]).margin, -kMarginCap,
                                     kMarginCap)
                        : kUnreachableMargin;
                records.push_back(rec);
            }
        }
    }
    return records;
}

inline constexpr const char* kDatasetHeader =
    "scenario_id,ball_x,ball_y,opp_x,opp_y,poscount,target_x,target_y,margin";

inline void write_dataset(std::span<const DatasetRecord> records, std::ostream& out) {
    out << kDatasetHeader << '\n';
    for (const DatasetRecord& r : records) {
        out << r.scenario_id << ',' << fmt_g17(r.ball.x) << ',' << fmt_g17(r.ball.y) << ','
            << fmt_g17(r.opponent.x) << ',' << fmt_g17(r.opponent.y) << ',' << r.poscount << ','
            << fmt_g17(r.target.x) << ',' << fmt_g17(r.target.y) << ','
            << fmt_g17(r.true_margin) << '\n';
    }
}

inline void write_dataset(std::span<const DatasetRecord> records, const std::string& path) {
    std::ostringstream buf;
    write_dataset(records, buf);
    write_text_file(path, buf.str());
}

inline std::vector<DatasetRecord> read_dataset(std::istream& in,
                                               const std::string& source = "<dataset>") {
    std::string line;
    long line_no = 0;
    if (!std::getline(in, line))
        throw ParseError(source, 1, "missing header");
    ++line_no;
    if (line != kDatasetHeader)
        throw ParseError(source, 1, "unexpected header: '" + line + "'");

    std::vector<DatasetRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 9)
            throw ParseError(source, line_no,
                             "expected 9 fields, got " + std::to_string(f.size()));
        DatasetRecord r;
        r.scenario_id = parse_int_field(source, line_no, f[0]);
        r.ball = {parse_double_field(source, line_no, f[1]),
                  parse_double_field(source, line_no, f[2])};
        r.opponent = {parse_double_field(source, line_no, f[3]),
                      parse_double_field(source, line_no, f[4])};
        r.poscount = static_cast<int>(parse_int_field(source, line_no, f[5]));
        r.target = {parse_double_field(source, line_no, f[6]),
                    parse_double_field(source, line_no, f[7])};
        r.true_margin = parse_double_field(source, line_no, f[8]);
        records.push_back(r);
    }
    return records;
}

inline std::vector<DatasetRecord> read_dataset_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open dataset: " + path);
    return read_dataset(in, path);
}

/// Feature/label table for the surrogate from labeled records.
inline Samples to_samples(std::span<const DatasetRecord> records, Encoding encoding) {
    Samples samples;
    samples.dim = feature_dim(encoding);
    samples.features.reserve(records.size() * static_cast<std::size_t>(samples.dim));
    samples.labels.reserve(records.size());
    for (const DatasetRecord& r : records) {
        const std::vector<double> x = encode(encoding, r.ball, r.opponent, r.target);
        samples.features.insert(samples.features.end(), x.begin(), x.end());
        samples.labels.push_back(r.true_margin);
    }
    return samples;
}

// --- scenario files: one JSON object per line -------------------------------

inline void write_scenarios_jsonl(std::span<const Scenario> scenarios, std::ostream& out) {
    for (const Scenario& s : scenarios) {
        nlohmann::json j;
        j["ball"] = {s.ball.x, s.ball.y};
        j["ball_speed"] = s.ball_params.initial_speed;
        nlohmann::json opps = nlohmann::json::array();
        for (const Opponent& o : s.opponents) {
            nlohmann::json jo;
            jo["pos"] = {o.position.x, o.position.y};
            jo["poscount"] = o.poscount;
            jo["is_goalie"] = o.is_goalie;
            opps.push_back(jo);
        }
        j["opponents"] = opps;
        out << j.dump() << '\n';
    }
}

inline void write_scenarios_jsonl(std::span<const Scenario> scenarios, const std::string& path) {
    std::ostringstream buf;
    write_scenarios_jsonl(scenarios, buf);
    write_text_file(path, buf.str());
}

inline std::vector<Scenario> read_scenarios_jsonl(std::istream& in,
                                                  const std::string& source = "<scenarios>",
                                                  const FieldConfig& field = {}) {
    std::vector<Scenario> scenarios;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, line_no, e.what());
        }
        try {
            Scenario s;
            s.ball = {j.at("ball").at(0).get<double>(), j.at("ball").at(1).get<double>()};
            s.ball_params.initial_speed = j.at("ball_speed").get<double>();
            for (const nlohmann::json& jo : j.at("opponents")) {
                Opponent o;
                o.position = {jo.at("pos").at(0).get<double>(),
                              jo.at("pos").at(1).get<double>()};
                o.poscount = jo.at("poscount").get<int>();
                if (jo.at("is_goalie").get<bool>()) {
                    o.is_goalie = true;
                    o.control_radius = kGoalieControlRadius;
                }
                check_opponent(o);
                s.opponents.push_back(o);
            }
            check_ball_params(s.ball_params);
            if (!s.ball.finite() || std::abs(s.ball.y) > field.field_half_height ||
                std::abs(s.ball.x) > field.goal_line_x || s.ball.x >= field.goal_line_x)
                throw ContractViolation("ball outside the field or beyond the goal line");
            scenarios.push_back(std::move(s));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(source, line_no, e.what());
        } catch (const ContractViolation& e) {
            throw ParseError(source, line_no, e.what());
        }
    }
    return scenarios;
}

inline std::vector<Scenario> read_scenarios_jsonl_file(const std::string& path,
                                                       const FieldConfig& field = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open scenario file: " + path);
    return read_scenarios_jsonl(in, path, field);
}

} // namespace shootcalc
