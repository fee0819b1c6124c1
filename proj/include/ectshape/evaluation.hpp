#pragma once

#include "ectshape/classifiers.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ectshape {

struct FoldAssignment {
    std::vector<int> fold_of_row;
    int k = 0;

    /// Row indices assigned to `fold`, ascending.
    std::vector<std::size_t> rows_in(int fold) const;
    std::vector<std::size_t> rows_not_in(int fold) const;
};

/// counts[t][p] = rows of true class t predicted as p.
struct ConfusionMatrix {
    std::vector<std::vector<long long>> counts;

    static ConfusionMatrix zeros(int num_classes);
    int num_classes() const noexcept { return static_cast<int>(counts.size()); }
    long long total() const noexcept;
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricSet {
    double accuracy = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double precision = 0.0;
    double mcc = 0.0;

    friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

struct EvalReport {
    ClassifierKind classifier_kind = ClassifierKind::Tree;
    std::string params;  // ClassifierConfig::describe()
    std::uint64_t seed = 0;
    int k = 0;
    std::vector<ConfusionMatrix> per_fold;
    ConfusionMatrix pooled;
    std::vector<MetricSet> per_class;  // one-vs-rest on the pooled matrix
    MetricSet macro;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Per-class shuffle, then one global round-robin deal that continues across
/// classes from a random starting fold. Per-class and overall fold sizes each
/// differ by at most one.
FoldAssignment stratified_k_fold(const LabeledDataset& data, int k, std::uint64_t seed);

ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> preds,
                                 int num_classes);

/// Binary reduction for one class. Zero denominators make the affected
/// metric 0.
MetricSet one_vs_rest_metrics(const ConfusionMatrix& cm, int class_index);

MetricSet macro_metrics(std::span<const MetricSet> per_class);

/// Pooled-matrix metrics per class, then the unweighted class mean.
MetricSet pooled_macro_metrics(const ConfusionMatrix& cm, std::vector<MetricSet>* per_class = nullptr);

/// The fold-mean alternative: macro metrics of each fold matrix, then the
/// mean over folds.
MetricSet per_fold_mean_metrics(const EvalReport& report);

EvalReport cross_validate(const LabeledDataset& data, const ClassifierConfig& config, int k,
                          std::uint64_t seed);

}  // namespace ectshape
