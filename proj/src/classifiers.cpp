#include "ectshape/classifiers.hpp"

#include "ectshape/error.hpp"

#include <cmath>
#include <sstream>

namespace ectshape {

std::vector<int> LabeledDataset::labels() const {
    std::vector<int> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r.label.value_or(-1));
    }
    return out;
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
    std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
    for (const auto& r : rows) {
        if (r.label && *r.label >= 0 && *r.label < num_classes) {
            ++counts[static_cast<std::size_t>(*r.label)];
        }
    }
    return counts;
}

void LabeledDataset::validate() const {
    if (num_classes < 2) {
        throw Error(ErrorCode::InvalidArgument,
                    "dataset needs at least 2 classes, has " + std::to_string(num_classes));
    }
    if (!class_names.empty() && class_names.size() != static_cast<std::size_t>(num_classes)) {
        throw Error(ErrorCode::InvalidArgument, "class_names size differs from num_classes");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.values.size() != dims()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "row " + std::to_string(i) + " has " + std::to_string(r.values.size()) +
                            " values, expected " + std::to_string(dims()));
        }
        for (double v : r.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::InvalidArgument,
                            "row " + std::to_string(i) + " has a non-finite value");
            }
        }
        if (!r.label || *r.label < 0 || *r.label >= num_classes) {
            throw Error(ErrorCode::LabelOutOfRange,
                        "row " + std::to_string(i) + " has a missing or out-of-range label");
        }
    }
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.num_classes = num_classes;
    out.feature_names = feature_names;
    out.class_names = class_names;
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) {
        out.rows.push_back(rows.at(i));
    }
    return out;
}

std::string_view to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Tree: return "tree";
        case ClassifierKind::NaiveBayes: return "nb";
        case ClassifierKind::Mlp: return "mlp";
    }
    return "tree";
}

ClassifierKind parse_classifier_kind(std::string_view name) {
    if (name == "tree" || name == "j48") return ClassifierKind::Tree;
    if (name == "nb" || name == "gnb") return ClassifierKind::NaiveBayes;
    if (name == "mlp") return ClassifierKind::Mlp;
    throw Error(ErrorCode::InvalidArgument, "unknown classifier: " + std::string(name));
}

std::string ClassifierConfig::describe() const {
    std::ostringstream os;
    os << "classifier=" << to_string(kind);
    switch (kind) {
        case ClassifierKind::Tree:
            os << " tree_max_depth=" << tree.max_depth << " tree_min_leaf=" << tree.min_leaf
               << " tree_gain_ratio=" << (tree.use_gain_ratio ? "true" : "false");
            break;
        case ClassifierKind::NaiveBayes:
            break;
        case ClassifierKind::Mlp:
            os << " mlp_hidden=" << (mlp.hidden ? std::to_string(*mlp.hidden) : "auto")
               << " mlp_lr=" << mlp.learning_rate << " mlp_momentum=" << mlp.momentum
               << " mlp_epochs=" << mlp.epochs;
            break;
    }
    return os.str();
}

ClassifierKind TrainedModel::kind() const noexcept {
    switch (model.index()) {
        case 0: return ClassifierKind::NaiveBayes;
        case 1: return ClassifierKind::Tree;
        default: return ClassifierKind::Mlp;
    }
}

int argmax(std::span<const double> values) {
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

TrainedModel train(const LabeledDataset& data, const ClassifierConfig& config) {
    TrainedModel out;
    out.feature_names = data.feature_names;
    out.num_classes = data.num_classes;
    out.class_names = data.class_names;
    switch (config.kind) {
        case ClassifierKind::NaiveBayes: out.model = train_gnb(data); break;
        case ClassifierKind::Tree: out.model = train_tree(data, config.tree); break;
        case ClassifierKind::Mlp: out.model = train_mlp(data, config.mlp); break;
    }
    return out;
}

namespace {

void normalize_in_place(std::vector<double>& p) {
    double total = 0.0;
    for (double v : p) total += v;
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
        return;
    }
    for (double& v : p) v /= total;
}

std::vector<double> gnb_posterior(const GnbModel& m, std::span<const double> x) {
    std::vector<double> logp = gnb_log_joint(m, x);
    double top = logp[0];
    for (double v : logp) top = std::max(top, v);
    for (double& v : logp) v = std::exp(v - top);
    normalize_in_place(logp);
    return logp;
}

std::vector<double> tree_posterior(const TreeModel& m, std::span<const double> x) {
    int at = 0;
    while (!m.nodes[static_cast<std::size_t>(at)].is_leaf()) {
        const TreeNode& n = m.nodes[static_cast<std::size_t>(at)];
        at = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return m.nodes[static_cast<std::size_t>(at)].distribution;
}

std::vector<double> mlp_posterior(const MlpModel& m, std::span<const double> x) {
    std::vector<double> out = m.forward(m.scale(x));
    normalize_in_place(out);
    return out;
}

}  // namespace

Prediction predict(const TrainedModel& model, std::span<const double> features) {
    if (features.size() != model.feature_names.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model expects " + std::to_string(model.feature_names.size()) +
                        " features, got " + std::to_string(features.size()));
    }
    Prediction p;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, GnbModel>) {
                p.posterior = gnb_posterior(m, features);
            } else if constexpr (std::is_same_v<M, TreeModel>) {
                p.posterior = tree_posterior(m, features);
            } else {
                p.posterior = mlp_posterior(m, features);
            }
        },
        model.model);
    p.label = argmax(p.posterior);
    return p;
}

}  // namespace ectshape
