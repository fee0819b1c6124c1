#include "ectshape/evaluation.hpp"

#include "ectshape/error.hpp"
#include "ectshape/rng.hpp"

#include <cmath>

namespace ectshape {

namespace {

// Stream ids for seeds derived from the user seed.
constexpr std::uint64_t kFoldStream = 1;
constexpr std::uint64_t kClassifierStream = 1000;

}  // namespace

std::vector<std::size_t> FoldAssignment::rows_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
        if (fold_of_row[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::rows_not_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of_row.size(); ++i) {
        if (fold_of_row[i] != fold) out.push_back(i);
    }
    return out;
}

ConfusionMatrix ConfusionMatrix::zeros(int num_classes) {
    ConfusionMatrix cm;
    const auto K = static_cast<std::size_t>(num_classes);
    cm.counts.assign(K, std::vector<long long>(K, 0));
    return cm;
}

long long ConfusionMatrix::total() const noexcept {
    long long n = 0;
    for (const auto& row : counts) {
        for (long long c : row) n += c;
    }
    return n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.num_classes() != num_classes()) {
        throw Error(ErrorCode::DimensionMismatch, "confusion matrices differ in size");
    }
    for (std::size_t t = 0; t < counts.size(); ++t) {
        for (std::size_t p = 0; p < counts.size(); ++p) counts[t][p] += other.counts[t][p];
    }
    return *this;
}

FoldAssignment stratified_k_fold(const LabeledDataset& data, int k, std::uint64_t seed) {
    const std::size_t n = data.rows.size();
    if (k < 2 || static_cast<std::size_t>(k) > n) {
        throw Error(ErrorCode::BadK, "k=" + std::to_string(k) + " with " + std::to_string(n) +
                                         " rows is not stratifiable");
    }
    data.validate();

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(data.num_classes));
    for (std::size_t i = 0; i < n; ++i) {
        by_class[static_cast<std::size_t>(*data.rows[i].label)].push_back(i);
    }

    SplitMix64 rng(seed);
    FoldAssignment fa;
    fa.k = k;
    fa.fold_of_row.assign(n, -1);
    auto next_fold = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(k)));
    for (auto& members : by_class) {
        rng.shuffle(std::span<std::size_t>(members));
        for (std::size_t row : members) {
            fa.fold_of_row[row] = static_cast<int>(next_fold);
            next_fold = (next_fold + 1) % static_cast<std::size_t>(k);
        }
    }
    return fa;
}

ConfusionMatrix confusion_matrix(std::span<const int> truths, std::span<const int> preds,
                                 int num_classes) {
    if (truths.size() != preds.size()) {
        throw Error(ErrorCode::LengthMismatch, "truths and predictions differ in length");
    }
    if (num_classes < 1) {
        throw Error(ErrorCode::InvalidArgument, "confusion matrix needs >= 1 class");
    }
    ConfusionMatrix cm = ConfusionMatrix::zeros(num_classes);
    for (std::size_t i = 0; i < truths.size(); ++i) {
        const int t = truths[i];
        const int p = preds[i];
        if (t < 0 || t >= num_classes || p < 0 || p >= num_classes) {
            throw Error(ErrorCode::LabelOutOfRange, "label at position " + std::to_string(i));
        }
        ++cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    }
    return cm;
}

MetricSet one_vs_rest_metrics(const ConfusionMatrix& cm, int class_index) {
    const long long total = cm.total();
    if (cm.counts.empty() || total == 0) {
        throw Error(ErrorCode::EmptyMatrix, "confusion matrix holds no rows");
    }
    if (class_index < 0 || class_index >= cm.num_classes()) {
        throw Error(ErrorCode::LabelOutOfRange, "class " + std::to_string(class_index));
    }
    const auto c = static_cast<std::size_t>(class_index);
    long long row_sum = 0, col_sum = 0;
    for (std::size_t j = 0; j < cm.counts.size(); ++j) {
        row_sum += cm.counts[c][j];
        col_sum += cm.counts[j][c];
    }
    const auto tp = static_cast<double>(cm.counts[c][c]);
    const auto fn = static_cast<double>(row_sum) - tp;
    const auto fp = static_cast<double>(col_sum) - tp;
    const auto tn = static_cast<double>(total) - tp - fn - fp;

    auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
    MetricSet m;
    m.accuracy = ratio(tp + tn, static_cast<double>(total));
    m.sensitivity = ratio(tp, tp + fn);
    m.specificity = ratio(tn, tn + fp);
    m.precision = ratio(tp, tp + fp);
    const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    m.mcc = den > 0.0 ? (tp * tn - fp * fn) / std::sqrt(den) : 0.0;
    return m;
}

MetricSet macro_metrics(std::span<const MetricSet> per_class) {
    MetricSet out;
    if (per_class.empty()) {
        return out;
    }
    for (const MetricSet& m : per_class) {
        out.accuracy += m.accuracy;
        out.sensitivity += m.sensitivity;
        out.specificity += m.specificity;
        out.precision += m.precision;
        out.mcc += m.mcc;
    }
    const auto n = static_cast<double>(per_class.size());
    out.accuracy /= n;
    out.sensitivity /= n;
    out.specificity /= n;
    out.precision /= n;
    out.mcc /= n;
    return out;
}

MetricSet pooled_macro_metrics(const ConfusionMatrix& cm, std::vector<MetricSet>* per_class) {
    std::vector<MetricSet> sets;
    for (int c = 0; c < cm.num_classes(); ++c) sets.push_back(one_vs_rest_metrics(cm, c));
    MetricSet macro = macro_metrics(sets);
    if (per_class) *per_class = std::move(sets);
    return macro;
}

MetricSet per_fold_mean_metrics(const EvalReport& report) {
    std::vector<MetricSet> folds;
    for (const auto& cm : report.per_fold) {
        if (cm.total() > 0) folds.push_back(pooled_macro_metrics(cm));
    }
    return macro_metrics(folds);
}

EvalReport cross_validate(const LabeledDataset& data, const ClassifierConfig& config, int k,
                          std::uint64_t seed) {
    const FoldAssignment folds = stratified_k_fold(data, k, derive_seed(seed, kFoldStream));

    EvalReport report;
    report.classifier_kind = config.kind;
    report.params = config.describe();
    report.seed = seed;
    report.k = k;
    report.pooled = ConfusionMatrix::zeros(data.num_classes);

    for (int f = 0; f < k; ++f) {
        const auto train_rows = folds.rows_not_in(f);
        const auto test_rows = folds.rows_in(f);
        ClassifierConfig fold_config = config;
        fold_config.mlp.seed = derive_seed(seed, kClassifierStream + static_cast<std::uint64_t>(f));

        TrainedModel model;
        try {
            model = train(data.subset(train_rows), fold_config);
        } catch (const Error& e) {
            throw e.annotated("fold " + std::to_string(f));
        }
        std::vector<int> truths, preds;
        for (std::size_t i : test_rows) {
            truths.push_back(*data.rows[i].label);
            preds.push_back(predict(model, data.rows[i].values).label);
        }
        report.per_fold.push_back(confusion_matrix(truths, preds, data.num_classes));
        report.pooled += report.per_fold.back();
    }
    report.macro = pooled_macro_metrics(report.pooled, &report.per_class);
    return report;
}

}  // namespace ectshape
