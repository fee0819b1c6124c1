#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ectshape {

struct FeatureRow {
    std::vector<double> values;
    std::optional<int> label;
};

struct LabeledDataset {
    std::vector<FeatureRow> rows;
    int num_classes = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;  // optional; size num_classes when present

    std::size_t dims() const noexcept { return feature_names.size(); }
    std::vector<int> labels() const;
    std::vector<std::size_t> class_counts() const;

    /// Throws on non-finite values, inconsistent widths, missing or
    /// out-of-range labels, or num_classes < 2.
    void validate() const;

    LabeledDataset subset(std::span<const std::size_t> indices) const;
};

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

struct GnbModel {
    int num_classes = 0;
    int num_features = 0;
    std::vector<double> priors;                  // [K]
    std::vector<std::vector<double>> means;      // [K][d]
    std::vector<std::vector<double>> variances;  // [K][d], floored
};

GnbModel train_gnb(const LabeledDataset& data);

/// Per-class log of prior times the product of Gaussian densities.
std::vector<double> gnb_log_joint(const GnbModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Binary decision tree

struct TreeParams {
    int max_depth = 25;
    int min_leaf = 2;
    bool use_gain_ratio = true;
};

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> distribution;  // leaves only, Laplace-smoothed

    bool is_leaf() const noexcept { return feature < 0; }
};

/// nodes[0] is the root. Values <= threshold route left.
struct TreeModel {
    int num_classes = 0;
    int num_features = 0;
    std::vector<TreeNode> nodes;

    int depth() const;
    std::size_t leaf_count() const;
};

TreeModel train_tree(const LabeledDataset& data, const TreeParams& params = {});

// ---------------------------------------------------------------------------
// Multilayer perceptron: one sigmoid hidden layer, sigmoid outputs,
// squared error, per-example SGD with momentum.

struct MlpParams {
    std::optional<int> hidden;  // default ceil((d + K) / 2)
    double learning_rate = 0.3;
    double momentum = 0.2;
    int epochs = 500;
    std::uint64_t seed = 0;
};

struct MlpModel {
    int inputs = 0;
    int hidden = 0;
    int outputs = 0;
    std::vector<double> w1;  // hidden x inputs, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // outputs x hidden, row-major
    std::vector<double> b2;  // outputs
    std::vector<double> scale_min;  // per input feature, from training data
    std::vector<double> scale_max;

    /// Parameter blocks in a fixed order (w1, b1, w2, b2).
    std::vector<std::span<double>> parameter_blocks();
    std::vector<std::span<const double>> parameter_blocks() const;

    /// Min-max scaling with the stored ranges; constant features map to 0.
    std::vector<double> scale(std::span<const double> raw) const;
    /// Sigmoid output activations for an already scaled input.
    std::vector<double> forward(std::span<const double> scaled) const;
};

/// Sum over examples of 0.5 * ||output - onehot(label)||^2. Inputs are scaled.
double mlp_loss(const MlpModel& model, std::span<const std::vector<double>> scaled_inputs,
                std::span<const int> labels);

/// Gradient of mlp_loss, laid out like parameter_blocks().
std::vector<std::vector<double>> mlp_loss_gradient(
    const MlpModel& model, std::span<const std::vector<double>> scaled_inputs,
    std::span<const int> labels);

/// Uniform [-0.5, 0.5] initialization drawn from `seed`.
MlpModel init_mlp(int inputs, int hidden, int outputs, std::uint64_t seed);

MlpModel train_mlp(const LabeledDataset& data, const MlpParams& params = {});

// ---------------------------------------------------------------------------
// Uniform contract

enum class ClassifierKind { Tree, NaiveBayes, Mlp };

std::string_view to_string(ClassifierKind kind);          // tree | nb | mlp
ClassifierKind parse_classifier_kind(std::string_view name);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::Tree;
    TreeParams tree;
    MlpParams mlp;

    /// One-line "key=value" summary used in artifact headers.
    std::string describe() const;
};

struct TrainedModel {
    std::variant<GnbModel, TreeModel, MlpModel> model;
    std::vector<std::string> feature_names;
    int num_classes = 0;
    std::vector<std::string> class_names;

    ClassifierKind kind() const noexcept;
};

struct Prediction {
    int label = 0;
    std::vector<double> posterior;
};

TrainedModel train(const LabeledDataset& data, const ClassifierConfig& config);

Prediction predict(const TrainedModel& model, std::span<const double> features);

/// Index of the largest entry, lowest index on ties.
int argmax(std::span<const double> values);

}  // namespace ectshape
