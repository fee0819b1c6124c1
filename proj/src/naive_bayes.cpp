#include "ectshape/classifiers.hpp"
#include "ectshape/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ectshape {

GnbModel train_gnb(const LabeledDataset& data) {
    data.validate();
    const std::size_t K = static_cast<std::size_t>(data.num_classes);
    const std::size_t d = data.dims();

    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < K; ++c) {
        if (counts[c] == 0) {
            throw Error(ErrorCode::EmptyClass, "class " + std::to_string(c) + " has no rows");
        }
    }

    GnbModel m;
    m.num_classes = data.num_classes;
    m.num_features = static_cast<int>(d);
    m.means.assign(K, std::vector<double>(d, 0.0));
    m.variances.assign(K, std::vector<double>(d, 0.0));
    m.priors.assign(K, 0.0);

    for (const auto& r : data.rows) {
        auto& mu = m.means[static_cast<std::size_t>(*r.label)];
        for (std::size_t j = 0; j < d; ++j) mu[j] += r.values[j];
    }
    for (std::size_t c = 0; c < K; ++c) {
        for (double& v : m.means[c]) v /= static_cast<double>(counts[c]);
    }
    for (const auto& r : data.rows) {
        const auto c = static_cast<std::size_t>(*r.label);
        for (std::size_t j = 0; j < d; ++j) {
            const double dev = r.values[j] - m.means[c][j];
            m.variances[c][j] += dev * dev;
        }
    }

    // Floor scales with the squared global range of each feature.
    std::vector<double> floor(d, 1e-12);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = data.rows.front().values[j];
        double hi = lo;
        for (const auto& r : data.rows) {
            lo = std::min(lo, r.values[j]);
            hi = std::max(hi, r.values[j]);
        }
        floor[j] = 1e-9 * (hi - lo) * (hi - lo) + 1e-12;
    }
    const auto n = static_cast<double>(data.rows.size());
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t j = 0; j < d; ++j) {
            double& v = m.variances[c][j];
            v = std::max(v / static_cast<double>(counts[c]), floor[j]);
        }
        m.priors[c] = static_cast<double>(counts[c]) / n;
    }
    return m;
}

std::vector<double> gnb_log_joint(const GnbModel& m, std::span<const double> x) {
    if (x.size() != static_cast<std::size_t>(m.num_features)) {
        throw Error(ErrorCode::DimensionMismatch, "naive Bayes query width");
    }
    const double log_two_pi = std::log(2.0 * std::numbers::pi);
    std::vector<double> out(static_cast<std::size_t>(m.num_classes));
    for (std::size_t c = 0; c < out.size(); ++c) {
        double s = std::log(m.priors[c]);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double var = m.variances[c][j];
            const double dev = x[j] - m.means[c][j];
            s += -0.5 * (log_two_pi + std::log(var)) - dev * dev / (2.0 * var);
        }
        out[c] = s;
    }
    return out;
}

}  // namespace ectshape
