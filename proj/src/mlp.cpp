#include "ectshape/classifiers.hpp"
#include "ectshape/error.hpp"
#include "ectshape/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ectshape {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Activations {
    std::vector<double> hidden;
    std::vector<double> output;
};

Activations run(const MlpModel& m, std::span<const double> x) {
    Activations a;
    const auto H = static_cast<std::size_t>(m.hidden);
    const auto I = static_cast<std::size_t>(m.inputs);
    const auto O = static_cast<std::size_t>(m.outputs);
    a.hidden.resize(H);
    for (std::size_t h = 0; h < H; ++h) {
        double z = m.b1[h];
        for (std::size_t i = 0; i < I; ++i) z += m.w1[h * I + i] * x[i];
        a.hidden[h] = sigmoid(z);
    }
    a.output.resize(O);
    for (std::size_t o = 0; o < O; ++o) {
        double z = m.b2[o];
        for (std::size_t h = 0; h < H; ++h) z += m.w2[o * H + h] * a.hidden[h];
        a.output[o] = sigmoid(z);
    }
    return a;
}

// Accumulates d(0.5 * ||out - target||^2)/d(params) for one example into
// grads (laid out as parameter_blocks()). Returns that example's loss.
double backprop(const MlpModel& m, std::span<const double> x, int label,
                std::vector<std::vector<double>>& grads) {
    const auto H = static_cast<std::size_t>(m.hidden);
    const auto I = static_cast<std::size_t>(m.inputs);
    const auto O = static_cast<std::size_t>(m.outputs);
    const Activations a = run(m, x);

    double loss = 0.0;
    std::vector<double> delta_out(O);
    for (std::size_t o = 0; o < O; ++o) {
        const double target = static_cast<int>(o) == label ? 1.0 : 0.0;
        const double err = a.output[o] - target;
        loss += 0.5 * err * err;
        delta_out[o] = err * a.output[o] * (1.0 - a.output[o]);
    }
    std::vector<double> delta_hidden(H, 0.0);
    for (std::size_t h = 0; h < H; ++h) {
        double s = 0.0;
        for (std::size_t o = 0; o < O; ++o) s += m.w2[o * H + h] * delta_out[o];
        delta_hidden[h] = s * a.hidden[h] * (1.0 - a.hidden[h]);
    }

    auto& gw1 = grads[0];
    auto& gb1 = grads[1];
    auto& gw2 = grads[2];
    auto& gb2 = grads[3];
    for (std::size_t h = 0; h < H; ++h) {
        for (std::size_t i = 0; i < I; ++i) gw1[h * I + i] += delta_hidden[h] * x[i];
        gb1[h] += delta_hidden[h];
    }
    for (std::size_t o = 0; o < O; ++o) {
        for (std::size_t h = 0; h < H; ++h) gw2[o * H + h] += delta_out[o] * a.hidden[h];
        gb2[o] += delta_out[o];
    }
    return loss;
}

std::vector<std::vector<double>> zero_like(const MlpModel& m) {
    std::vector<std::vector<double>> g;
    for (auto block : m.parameter_blocks()) g.emplace_back(block.size(), 0.0);
    return g;
}

}  // namespace

std::vector<std::span<double>> MlpModel::parameter_blocks() {
    return {std::span<double>(w1), std::span<double>(b1), std::span<double>(w2),
            std::span<double>(b2)};
}

std::vector<std::span<const double>> MlpModel::parameter_blocks() const {
    return {std::span<const double>(w1), std::span<const double>(b1),
            std::span<const double>(w2), std::span<const double>(b2)};
}

std::vector<double> MlpModel::scale(std::span<const double> raw) const {
    if (raw.size() != static_cast<std::size_t>(inputs)) {
        throw Error(ErrorCode::DimensionMismatch, "perceptron input width");
    }
    std::vector<double> out(raw.size());
    for (std::size_t j = 0; j < raw.size(); ++j) {
        const double range = scale_max[j] - scale_min[j];
        out[j] = range > 0.0 ? (raw[j] - scale_min[j]) / range : 0.0;
    }
    return out;
}

std::vector<double> MlpModel::forward(std::span<const double> scaled) const {
    if (scaled.size() != static_cast<std::size_t>(inputs)) {
        throw Error(ErrorCode::DimensionMismatch, "perceptron input width");
    }
    return run(*this, scaled).output;
}

double mlp_loss(const MlpModel& model, std::span<const std::vector<double>> scaled_inputs,
                std::span<const int> labels) {
    if (scaled_inputs.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "inputs and labels differ in length");
    }
    double loss = 0.0;
    for (std::size_t n = 0; n < labels.size(); ++n) {
        const auto out = model.forward(scaled_inputs[n]);
        for (std::size_t o = 0; o < out.size(); ++o) {
            const double err = out[o] - (static_cast<int>(o) == labels[n] ? 1.0 : 0.0);
            loss += 0.5 * err * err;
        }
    }
    return loss;
}

std::vector<std::vector<double>> mlp_loss_gradient(
    const MlpModel& model, std::span<const std::vector<double>> scaled_inputs,
    std::span<const int> labels) {
    if (scaled_inputs.size() != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, "inputs and labels differ in length");
    }
    auto grads = zero_like(model);
    for (std::size_t n = 0; n < labels.size(); ++n) {
        if (scaled_inputs[n].size() != static_cast<std::size_t>(model.inputs)) {
            throw Error(ErrorCode::DimensionMismatch, "perceptron input width");
        }
        backprop(model, scaled_inputs[n], labels[n], grads);
    }
    return grads;
}

MlpModel init_mlp(int inputs, int hidden, int outputs, std::uint64_t seed) {
    if (inputs < 1 || hidden < 1 || outputs < 1) {
        throw Error(ErrorCode::InvalidArgument, "perceptron layer sizes must be >= 1");
    }
    MlpModel m;
    m.inputs = inputs;
    m.hidden = hidden;
    m.outputs = outputs;
    m.w1.resize(static_cast<std::size_t>(hidden * inputs));
    m.b1.resize(static_cast<std::size_t>(hidden));
    m.w2.resize(static_cast<std::size_t>(outputs * hidden));
    m.b2.resize(static_cast<std::size_t>(outputs));
    m.scale_min.assign(static_cast<std::size_t>(inputs), 0.0);
    m.scale_max.assign(static_cast<std::size_t>(inputs), 1.0);
    SplitMix64 rng(seed);
    for (auto block : m.parameter_blocks()) {
        for (double& w : block) w = rng.uniform(-0.5, 0.5);
    }
    return m;
}

MlpModel train_mlp(const LabeledDataset& data, const MlpParams& params) {
    data.validate();
    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0) {
            throw Error(ErrorCode::EmptyClass, "class " + std::to_string(c) + " has no rows");
        }
    }
    if (params.epochs < 0 || !(params.learning_rate > 0.0) || params.momentum < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "invalid perceptron training parameters");
    }
    const int d = static_cast<int>(data.dims());
    const int K = data.num_classes;
    const int hidden = params.hidden.value_or((d + K + 1) / 2);
    if (hidden < 1) {
        throw Error(ErrorCode::InvalidArgument, "hidden units must be >= 1");
    }

    SplitMix64 rng(params.seed);
    MlpModel m = init_mlp(d, hidden, K, rng.next_u64());

    for (std::size_t j = 0; j < static_cast<std::size_t>(d); ++j) {
        double lo = data.rows.front().values[j];
        double hi = lo;
        for (const auto& r : data.rows) {
            lo = std::min(lo, r.values[j]);
            hi = std::max(hi, r.values[j]);
        }
        m.scale_min[j] = lo;
        m.scale_max[j] = hi;
    }

    std::vector<std::vector<double>> inputs;
    std::vector<int> labels;
    inputs.reserve(data.rows.size());
    for (const auto& r : data.rows) {
        inputs.push_back(m.scale(r.values));
        labels.push_back(*r.label);
    }

    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);
    auto velocity = zero_like(m);
    auto grads = zero_like(m);

    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        for (std::size_t idx : order) {
            for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
            epoch_loss += backprop(m, inputs[idx], labels[idx], grads);
            auto blocks = m.parameter_blocks();
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                for (std::size_t k = 0; k < blocks[b].size(); ++k) {
                    velocity[b][k] =
                        params.momentum * velocity[b][k] - params.learning_rate * grads[b][k];
                    blocks[b][k] += velocity[b][k];
                }
            }
        }
        if (!std::isfinite(epoch_loss)) {
            throw Error(ErrorCode::NonFiniteLoss,
                        "training diverged at epoch " + std::to_string(epoch));
        }
    }
    for (auto block : m.parameter_blocks()) {
        for (double w : block) {
            if (!std::isfinite(w)) {
                throw Error(ErrorCode::NonFiniteLoss, "non-finite weight after training");
            }
        }
    }
    return m;
}

}  // namespace ectshape
