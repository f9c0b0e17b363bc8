#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "shootcalc/error.hpp"
#include "shootcalc/rng.hpp"
#include "shootcalc/textio.hpp"

namespace shootcalc {

/// One-hidden-layer regressor: y = w_out . tanh(w_in . normalize(x) + b_in) + b_out.
/// normalize(x)_j = (x_j - input_means[j]) / input_scales[j].
struct Mlp {
    int input_dim = 0;
    int hidden_dim = 0;
    std::vector<double> w_in;   // hidden_dim x input_dim, row-major
    std::vector<double> b_in;   // hidden_dim
    std::vector<double> w_out;  // hidden_dim
    double b_out = 0.0;
    std::vector<double> input_means;   // input_dim
    std::vector<double> input_scales;  // input_dim, strictly positive
    std::uint64_t seed = 0;
};

struct TrainConfig {
    double learning_rate = 0.01;
    int epochs = 200;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

/// Flat row-major sample store: features is size() x dim, labels is size().
struct Samples {
    int dim = 0;
    std::vector<double> features;
    std::vector<double> labels;

    std::size_t size() const { return labels.size(); }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(features).subspan(i * static_cast<std::size_t>(dim),
                                                         static_cast<std::size_t>(dim));
    }

    void append(std::span<const double> x, double label) {
        if (static_cast<int>(x.size()) != dim)
            throw ContractViolation("Samples::append: feature dimension mismatch");
        features.insert(features.end(), x.begin(), x.end());
        labels.push_back(label);
    }
};

/// Weights drawn uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)] from the
/// seeded generator; biases start at zero, normalization at identity.
inline Mlp make_mlp(int input_dim, int hidden_dim, std::uint64_t seed) {
    if (input_dim < 1 || hidden_dim < 1)
        throw ContractViolation("make_mlp: dimensions must be positive");

    Mlp m;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.seed = seed;
    m.w_in.resize(static_cast<std::size_t>(hidden_dim) * input_dim);
    m.b_in.assign(static_cast<std::size_t>(hidden_dim), 0.0);
    m.w_out.resize(static_cast<std::size_t>(hidden_dim));
    m.input_means.assign(static_cast<std::size_t>(input_dim), 0.0);
    m.input_scales.assign(static_cast<std::size_t>(input_dim), 1.0);

    Rng rng(seed);
    const double lim_in = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (double& w : m.w_in) w = rng.uniform(-lim_in, lim_in);
    const double lim_out = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    for (double& w : m.w_out) w = rng.uniform(-lim_out, lim_out);
    return m;
}

inline void check_features(const Mlp& m, std::span<const double> features) {
    if (static_cast<int>(features.size()) != m.input_dim)
        throw ContractViolation("Mlp: feature vector has wrong dimension");
}

inline double forward(const Mlp& m, std::span<const double> features) {
    check_features(m, features);
    double out = m.b_out;
    for (int h = 0; h < m.hidden_dim; ++h) {
        double z = m.b_in[static_cast<std::size_t>(h)];
        const double* row = m.w_in.data() + static_cast<std::size_t>(h) * m.input_dim;
        for (int j = 0; j < m.input_dim; ++j) {
            const std::size_t sj = static_cast<std::size_t>(j);
            z += row[j] * (features[sj] - m.input_means[sj]) / m.input_scales[sj];
        }
        out += m.w_out[static_cast<std::size_t>(h)] * std::tanh(z);
    }
    return out;
}

/// Mean (prediction - label)^2 over a sample set.
inline double mse(const Mlp& m, const Samples& data) {
    if (data.size() == 0)
        throw DataError("mse: empty sample set");
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double e = forward(m, data.row(i)) - data.labels[i];
        sum += e * e;
    }
    return sum / static_cast<double>(data.size());
}

namespace detail {

struct Gradients {
    std::vector<double> w_in;
    std::vector<double> b_in;
    std::vector<double> w_out;
    double b_out = 0.0;

    explicit Gradients(const Mlp& m)
        : w_in(m.w_in.size(), 0.0), b_in(m.b_in.size(), 0.0), w_out(m.w_out.size(), 0.0) {}

    void zero() {
        std::fill(w_in.begin(), w_in.end(), 0.0);
        std::fill(b_in.begin(), b_in.end(), 0.0);
        std::fill(w_out.begin(), w_out.end(), 0.0);
        b_out = 0.0;
    }
};

/// Backprop of the squared error (y - label)^2 for one record; gradients
/// accumulate. Returns the squared error.
inline double accumulate_gradients(const Mlp& m, std::span<const double> features,
                                   double label, Gradients& g,
                                   std::vector<double>& hidden_buf,
                                   std::vector<double>& norm_buf) {
    hidden_buf.resize(static_cast<std::size_t>(m.hidden_dim));
    norm_buf.resize(static_cast<std::size_t>(m.input_dim));
    for (int j = 0; j < m.input_dim; ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        norm_buf[sj] = (features[sj] - m.input_means[sj]) / m.input_scales[sj];
    }

    double out = m.b_out;
    for (int h = 0; h < m.hidden_dim; ++h) {
        double z = m.b_in[static_cast<std::size_t>(h)];
        const double* row = m.w_in.data() + static_cast<std::size_t>(h) * m.input_dim;
        for (int j = 0; j < m.input_dim; ++j) z += row[j] * norm_buf[static_cast<std::size_t>(j)];
        hidden_buf[static_cast<std::size_t>(h)] = std::tanh(z);
        out += m.w_out[static_cast<std::size_t>(h)] * hidden_buf[static_cast<std::size_t>(h)];
    }

    const double err = out - label;
    const double dout = 2.0 * err;
    g.b_out += dout;
    for (int h = 0; h < m.hidden_dim; ++h) {
        const std::size_t sh = static_cast<std::size_t>(h);
        const double th = hidden_buf[sh];
        g.w_out[sh] += dout * th;
        const double dz = dout * m.w_out[sh] * (1.0 - th * th);
        g.b_in[sh] += dz;
        double* grow = g.w_in.data() + sh * static_cast<std::size_t>(m.input_dim);
        for (int j = 0; j < m.input_dim; ++j) grow[j] += dz * norm_buf[static_cast<std::size_t>(j)];
    }
    return err * err;
}

inline void apply_step(Mlp& m, const Gradients& g, double scale) {
    for (std::size_t i = 0; i < m.w_in.size(); ++i) m.w_in[i] -= scale * g.w_in[i];
    for (std::size_t i = 0; i < m.b_in.size(); ++i) m.b_in[i] -= scale * g.b_in[i];
    for (std::size_t i = 0; i < m.w_out.size(); ++i) m.w_out[i] -= scale * g.w_out[i];
    m.b_out -= scale * g.b_out;
}

} // namespace detail

/// One pass of mini-batch gradient descent on the mean squared error.
/// Record order is a Fisher-Yates shuffle seeded by (cfg.seed, epoch_index),
/// so a multi-epoch run revisits the data in different orders while staying
/// fully deterministic. Returns the epoch MSE accumulated before each
/// batch's update.
inline double train_epoch(Mlp& m, const Samples& data, const TrainConfig& cfg,
                          int epoch_index = 0) {
    if (data.size() == 0)
        throw DataError("train_epoch: empty dataset");
    if (data.dim != m.input_dim)
        throw ContractViolation("train_epoch: dataset dimension mismatch");
    if (!(cfg.learning_rate > 0.0))
        throw ContractViolation("train_epoch: learning_rate must be positive");
    if (cfg.batch_size < 1)
        throw ContractViolation("train_epoch: batch_size must be >= 1");

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(cfg.seed, static_cast<std::uint64_t>(epoch_index));
    for (std::size_t i = order.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<int>(i) - 1));
        std::swap(order[i - 1], order[j]);
    }

    detail::Gradients grads(m);
    std::vector<double> hidden_buf;
    std::vector<double> norm_buf;
    double sq_err_sum = 0.0;

    std::size_t pos = 0;
    while (pos < order.size()) {
        const std::size_t batch = std::min<std::size_t>(
            static_cast<std::size_t>(cfg.batch_size), order.size() - pos);
        grads.zero();
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t idx = order[pos + b];
            sq_err_sum += detail::accumulate_gradients(m, data.row(idx), data.labels[idx],
                                                       grads, hidden_buf, norm_buf);
        }
        detail::apply_step(m, grads, cfg.learning_rate / static_cast<double>(batch));
        pos += batch;
    }
    return sq_err_sum / static_cast<double>(data.size());
}

/// Analytic-vs-central-difference check of the squared-error gradient over
/// every trainable parameter. Relative error per parameter is
/// |a - n| / max(|a|, |n|) with 0/0 counting as 0; returns the maximum.
inline double gradient_check(const Mlp& m, std::span<const double> features, double label,
                             double epsilon = 1e-5) {
    if (!(epsilon > 0.0) || epsilon > 1e-2)
        throw ContractViolation("gradient_check: epsilon must lie in (0, 1e-2]");
    check_features(m, features);

    detail::Gradients analytic(m);
    std::vector<double> hidden_buf;
    std::vector<double> norm_buf;
    detail::accumulate_gradients(m, features, label, analytic, hidden_buf, norm_buf);

    Mlp probe = m;
    const auto loss = [&](const Mlp& net) {
        const double e = forward(net, features) - label;
        return e * e;
    };
    const auto rel_error = [](double a, double n) {
        const double denom = std::max(std::abs(a), std::abs(n));
        // central differences carry ~1e-11 of absolute rounding noise;
        // below that floor the pair counts as matching (0/0 -> 0)
        if (denom < 1e-10) return 0.0;
        return std::abs(a - n) / denom;
    };

    double worst = 0.0;
    const auto check_param = [&](double& slot, double analytic_grad) {
        const double saved = slot;
        slot = saved + epsilon;
        const double up = loss(probe);
        slot = saved - epsilon;
        const double down = loss(probe);
        slot = saved;
        const double numeric = (up - down) / (2.0 * epsilon);
        worst = std::max(worst, rel_error(analytic_grad, numeric));
    };

    for (std::size_t i = 0; i < probe.w_in.size(); ++i) check_param(probe.w_in[i], analytic.w_in[i]);
    for (std::size_t i = 0; i < probe.b_in.size(); ++i) check_param(probe.b_in[i], analytic.b_in[i]);
    for (std::size_t i = 0; i < probe.w_out.size(); ++i) check_param(probe.w_out[i], analytic.w_out[i]);
    check_param(probe.b_out, analytic.b_out);
    return worst;
}

/// Normalization constants from a sample set: per-feature mean and
/// standard deviation (unit scale for constant features).
inline void set_normalization_from(Mlp& m, const Samples& data) {
    if (data.size() == 0)
        throw DataError("set_normalization_from: empty sample set");
    if (data.dim != m.input_dim)
        throw ContractViolation("set_normalization_from: dimension mismatch");

    const double n = static_cast<double>(data.size());
    for (int j = 0; j < m.input_dim; ++j) {
        const std::size_t sj = static_cast<std::size_t>(j);
        double sum = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) sum += data.row(i)[sj];
        const double mean = sum / n;
        double var = 0.0;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double d = data.row(i)[sj] - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        m.input_means[sj] = mean;
        m.input_scales[sj] = sd > 1e-12 ? sd : 1.0;
    }
}

struct EpochStats {
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
};

/// Epoch 0 row reports the untouched network; rows 1..epochs report the
/// pre-update train MSE of each pass and the validation MSE after it.
inline std::vector<EpochStats> fit(Mlp& m, const Samples& train, const Samples& val,
                                   const TrainConfig& cfg) {
    if (cfg.epochs < 0)
        throw ContractViolation("fit: epochs must be >= 0");
    std::vector<EpochStats> history;
    history.push_back({0, mse(m, train), mse(m, val)});
    for (int e = 1; e <= cfg.epochs; ++e) {
        const double train_mse = train_epoch(m, train, cfg, e - 1);
        history.push_back({e, train_mse, mse(m, val)});
    }
    return history;
}

inline constexpr const char* kMlpFormatTag = "shootcalc-mlp 1";

inline void save_mlp(const Mlp& m, std::ostream& out) {
    const auto line = [&out](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out << ' ';
            out << fmt_g17(v[i]);
        }
        out << '\n';
    };
    out << kMlpFormatTag << '\n';
    out << m.input_dim << ' ' << m.hidden_dim << ' ' << m.seed << '\n';
    line(m.input_means);
    line(m.input_scales);
    for (int h = 0; h < m.hidden_dim; ++h) {
        const std::size_t base = static_cast<std::size_t>(h) * m.input_dim;
        std::vector<double> row(m.w_in.begin() + base, m.w_in.begin() + base + m.input_dim);
        line(row);
    }
    line(m.b_in);
    line(m.w_out);
    out << fmt_g17(m.b_out) << '\n';
}

inline void save_mlp(const Mlp& m, const std::string& path) {
    std::ostringstream buf;
    save_mlp(m, buf);
    write_text_file(path, buf.str());
}

inline Mlp load_mlp(std::istream& in, const std::string& source = "<mlp>") {
    long line_no = 0;
    std::string line;
    const auto next_line = [&]() {
        if (!std::getline(in, line))
            throw ParseError(source, line_no + 1, "unexpected end of file");
        ++line_no;
        return line;
    };
    const auto parse_row = [&](std::size_t count) {
        const std::vector<std::string> fields = split_fields(next_line(), ' ');
        if (fields.size() != count)
            throw ParseError(source, line_no,
                             "expected " + std::to_string(count) + " values, got " +
                                 std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(count);
        for (const std::string& f : fields) row.push_back(parse_double_field(source, line_no, f));
        return row;
    };

    if (next_line() != kMlpFormatTag)
        throw ParseError(source, line_no, "not a shootcalc mlp file");

    const std::vector<std::string> dims = split_fields(next_line(), ' ');
    if (dims.size() != 3)
        throw ParseError(source, line_no, "expected 'input_dim hidden_dim seed'");
    Mlp m;
    m.input_dim = static_cast<int>(parse_int_field(source, line_no, dims[0]));
    m.hidden_dim = static_cast<int>(parse_int_field(source, line_no, dims[1]));
    m.seed = static_cast<std::uint64_t>(parse_int_field(source, line_no, dims[2]));
    if (m.input_dim < 1 || m.hidden_dim < 1)
        throw ParseError(source, line_no, "dimensions must be positive");

    const std::size_t in_dim = static_cast<std::size_t>(m.input_dim);
    m.input_means = parse_row(in_dim);
    m.input_scales = parse_row(in_dim);
    for (double s : m.input_scales)
        if (!(s > 0.0)) throw ParseError(source, line_no, "input scales must be positive");
    m.w_in.reserve(static_cast<std::size_t>(m.hidden_dim) * in_dim);
    for (int h = 0; h < m.hidden_dim; ++h) {
        const std::vector<double> row = parse_row(in_dim);
        m.w_in.insert(m.w_in.end(), row.begin(), row.end());
    }
    m.b_in = parse_row(static_cast<std::size_t>(m.hidden_dim));
    m.w_out = parse_row(static_cast<std::size_t>(m.hidden_dim));
    const std::string last = next_line();
    m.b_out = parse_double_field(source, line_no, last);
    return m;
}

inline Mlp load_mlp_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open model file: " + path);
    return load_mlp(in, path);
}

} // namespace shootcalc
