#include "ectshape/error.hpp"
#include "ectshape/evaluation.hpp"
#include "ectshape/pipeline.hpp"
#include "ectshape/rng.hpp"
#include "ectshape/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ectshape {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

LabeledDataset grouped(int K, int per_class) {
    LabeledDataset d;
    d.num_classes = K;
    d.feature_names = {"x"};
    for (int c = 0; c < K; ++c) {
        for (int i = 0; i < per_class; ++i) d.rows.push_back({{static_cast<double>(c * 100 + i)}, c});
    }
    return d;
}

LabeledDataset synthetic_features(std::uint64_t seed, const SynthSpec& spec) {
    std::vector<FeatureRecord> rows;
    for (const auto& r : generate_synthetic(spec, seed)) {
        rows.push_back({r.record_id, r.label.name, shape_descriptors(r.cloud)});
    }
    return to_labeled_dataset(rows, FeatureMode::Basic);
}

SynthSpec three_classes() {
    SynthSpec s;
    s.classes = {{"a", 64, {0, 0}, 4, 1, 10, 0.05, 20},
                 {"b", 64, {0, 0}, 2, 1.5, 60, 0.05, 20},
                 {"c", 64, {0, 0}, 3, 0.8, -40, 0.05, 20}};
    return s;
}

void check_partition(const LabeledDataset& d, const FoldAssignment& fa) {
    ASSERT_EQ(fa.fold_of_row.size(), d.rows.size());
    std::vector<std::vector<int>> per(static_cast<std::size_t>(d.num_classes),
                                      std::vector<int>(static_cast<std::size_t>(fa.k), 0));
    std::vector<int> total(static_cast<std::size_t>(fa.k), 0);
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        const int f = fa.fold_of_row[i];
        ASSERT_GE(f, 0);
        ASSERT_LT(f, fa.k);
        ++per[static_cast<std::size_t>(*d.rows[i].label)][static_cast<std::size_t>(f)];
        ++total[static_cast<std::size_t>(f)];
    }
    for (const auto& row : per) {
        EXPECT_LE(*std::max_element(row.begin(), row.end()) - *std::min_element(row.begin(), row.end()), 1);
    }
    EXPECT_LE(*std::max_element(total.begin(), total.end()) - *std::min_element(total.begin(), total.end()), 1);
    std::size_t covered = 0;
    for (int f = 0; f < fa.k; ++f) {
        covered += fa.rows_in(f).size();
        EXPECT_EQ(fa.rows_in(f).size() + fa.rows_not_in(f).size(), d.rows.size());
    }
    EXPECT_EQ(covered, d.rows.size());
}

TEST(StratifiedKFold, TwelveByTwentyGivesTwoPerClassPerFold) {
    const auto d = grouped(12, 20);
    const auto fa = stratified_k_fold(d, 10, 0);
    for (int f = 0; f < 10; ++f) {
        const auto rows = fa.rows_in(f);
        EXPECT_EQ(rows.size(), 24u);
        std::vector<int> per(12, 0);
        for (auto r : rows) ++per[static_cast<std::size_t>(*d.rows[r].label)];
        for (int c : per) EXPECT_EQ(c, 2);
    }
}

TEST(StratifiedKFold, LeaveOneOut) {
    const auto d = grouped(5, 1);
    const auto fa = stratified_k_fold(d, 5, 3);
    for (int f = 0; f < 5; ++f) EXPECT_EQ(fa.rows_in(f).size(), 1u);
}

TEST(StratifiedKFold, DeterministicAndSeedSensitive) {
    const auto d = grouped(4, 13);
    EXPECT_EQ(stratified_k_fold(d, 5, 9).fold_of_row, stratified_k_fold(d, 5, 9).fold_of_row);
    EXPECT_NE(stratified_k_fold(d, 5, 9).fold_of_row, stratified_k_fold(d, 5, 10).fold_of_row);
}

TEST(StratifiedKFold, BadK) {
    const auto d = grouped(2, 3);
    EXPECT_EQ(code_of([&] { stratified_k_fold(d, 1, 0); }), ErrorCode::BadK);
    EXPECT_EQ(code_of([&] { stratified_k_fold(d, 7, 0); }), ErrorCode::BadK);
}

TEST(StratifiedKFoldProperty, BalancedPartitions) {
    SplitMix64 rng(77);
    for (int t = 0; t < 200; ++t) {
        LabeledDataset d;
        d.num_classes = 2 + static_cast<int>(rng.below(5));
        d.feature_names = {"x"};
        for (int c = 0; c < d.num_classes; ++c) {
            const int n = 1 + static_cast<int>(rng.below(25));
            for (int i = 0; i < n; ++i) d.rows.push_back({{0.0}, c});
        }
        const int k = 2 + static_cast<int>(rng.below(std::min<std::uint64_t>(9, d.rows.size() - 1)));
        check_partition(d, stratified_k_fold(d, k, rng.next_u64()));
    }
}

TEST(ConfusionMatrix, Examples) {
    const std::vector<int> t1{0, 1, 2};
    const auto id = confusion_matrix(t1, t1, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_EQ(id.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], i == j ? 1 : 0);

    const std::vector<int> t2{0, 0}, p2{1, 1};
    const auto all_wrong = confusion_matrix(t2, p2, 2);
    EXPECT_EQ(all_wrong.counts, (std::vector<std::vector<long long>>{{0, 2}, {0, 0}}));

    const std::vector<int> t3{0, 0, 0, 1}, p3{0, 0, 1, 1};
    EXPECT_EQ(confusion_matrix(t3, p3, 2).counts, (std::vector<std::vector<long long>>{{2, 1}, {0, 1}}));
    EXPECT_EQ(confusion_matrix(t3, p3, 2).total(), 4);
}

TEST(ConfusionMatrix, Errors) {
    const std::vector<int> a{0, 1}, b{0}, c{0, 2};
    EXPECT_EQ(code_of([&] { confusion_matrix(a, b, 2); }), ErrorCode::LengthMismatch);
    EXPECT_EQ(code_of([&] { confusion_matrix(a, c, 2); }), ErrorCode::LabelOutOfRange);
}

TEST(OneVsRest, PerfectDiagonal) {
    ConfusionMatrix cm{{{3, 0, 0}, {0, 4, 0}, {0, 0, 5}}};
    for (int c = 0; c < 3; ++c) EXPECT_EQ(one_vs_rest_metrics(cm, c), (MetricSet{1, 1, 1, 1, 1}));
}

TEST(OneVsRest, WorkedBinaryCase) {
    // TP=5 FN=2 FP=1 TN=12 for class 0
    ConfusionMatrix cm{{{5, 2}, {1, 12}}};
    const auto m = one_vs_rest_metrics(cm, 0);
    EXPECT_DOUBLE_EQ(m.accuracy, 17.0 / 20.0);
    EXPECT_DOUBLE_EQ(m.sensitivity, 5.0 / 7.0);
    EXPECT_DOUBLE_EQ(m.specificity, 12.0 / 13.0);
    EXPECT_DOUBLE_EQ(m.precision, 5.0 / 6.0);
    EXPECT_NEAR(m.mcc, 58.0 / std::sqrt(6.0 * 7.0 * 13.0 * 14.0), 1e-15);
    EXPECT_NEAR(m.mcc, 0.66339, 1e-5);
}

TEST(OneVsRest, AbsentClassUsesZeroConvention) {
    ConfusionMatrix cm{{{4, 1, 0}, {2, 3, 0}, {0, 0, 0}}};
    const auto m = one_vs_rest_metrics(cm, 2);
    EXPECT_EQ(m.sensitivity, 0.0);
    EXPECT_EQ(m.precision, 0.0);
    EXPECT_EQ(m.specificity, 1.0);
    EXPECT_EQ(m.mcc, 0.0);
    EXPECT_EQ(m.accuracy, 1.0);
}

TEST(OneVsRest, EmptyMatrix) {
    EXPECT_EQ(code_of([] { one_vs_rest_metrics(ConfusionMatrix::zeros(3), 0); }), ErrorCode::EmptyMatrix);
}

TEST(OneVsRestProperty, MatchesDirectCounting) {
    SplitMix64 rng(1000);
    for (int t = 0; t < 1000; ++t) {
        const int K = 2 + static_cast<int>(rng.below(4));
        auto cm = ConfusionMatrix::zeros(K);
        for (auto& row : cm.counts)
            for (auto& v : row) v = static_cast<long long>(rng.below(21));
        if (cm.total() == 0) cm.counts[0][0] = 1;
        const double N = static_cast<double>(cm.total());
        for (int c = 0; c < K; ++c) {
            const auto got = one_vs_rest_metrics(cm, c);
            const auto ref = oracle::counting_metrics(cm.counts, c);
            EXPECT_NEAR(got.accuracy, ref.accuracy, 1e-12);
            EXPECT_NEAR(got.sensitivity, ref.sensitivity, 1e-12);
            EXPECT_NEAR(got.specificity, ref.specificity, 1e-12);
            EXPECT_NEAR(got.precision, ref.precision, 1e-12);
            EXPECT_NEAR(got.mcc, ref.mcc, 1e-12);

            double off = 0;
            for (int i = 0; i < K; ++i) {
                if (i == c) continue;
                off += static_cast<double>(cm.counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)] +
                                           cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
            }
            EXPECT_NEAR(got.accuracy, 1.0 - off / N, 1e-12);
            for (double v : {got.accuracy, got.sensitivity, got.specificity, got.precision}) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
            EXPECT_GE(got.mcc, -1.0 - 1e-12);
            EXPECT_LE(got.mcc, 1.0 + 1e-12);
        }
    }
}

TEST(MacroMetrics, Means) {
    const MetricSet a{0.9, 0.5, 0.2, 0.1, 0.3};
    const std::vector<MetricSet> same{a, a, a};
    const auto m = macro_metrics(same);
    EXPECT_DOUBLE_EQ(m.accuracy, a.accuracy);
    EXPECT_DOUBLE_EQ(m.mcc, a.mcc);
    const std::vector<MetricSet> two{{0.9, 0, 0, 0, 0}, {0.7, 0, 0, 0, 0}};
    EXPECT_DOUBLE_EQ(macro_metrics(two).accuracy, 0.8);
}

TEST(MacroMetrics, PooledTwelveClassesMatchBruteForce) {
    SplitMix64 rng(12);
    auto cm = ConfusionMatrix::zeros(12);
    for (std::size_t t = 0; t < 12; ++t) {
        for (std::size_t p = 0; p < 12; ++p) cm.counts[t][p] = t == p ? 15 + static_cast<long long>(rng.below(5)) : static_cast<long long>(rng.below(2));
    }
    std::vector<MetricSet> per;
    const auto macro = pooled_macro_metrics(cm, &per);
    ASSERT_EQ(per.size(), 12u);
    MetricSet sum;
    for (int c = 0; c < 12; ++c) {
        const auto ref = oracle::counting_metrics(cm.counts, c);
        sum.accuracy += ref.accuracy / 12;
        sum.sensitivity += ref.sensitivity / 12;
        sum.specificity += ref.specificity / 12;
        sum.precision += ref.precision / 12;
        sum.mcc += ref.mcc / 12;
    }
    EXPECT_NEAR(macro.accuracy, sum.accuracy, 1e-12);
    EXPECT_NEAR(macro.sensitivity, sum.sensitivity, 1e-12);
    EXPECT_NEAR(macro.specificity, sum.specificity, 1e-12);
    EXPECT_NEAR(macro.precision, sum.precision, 1e-12);
    EXPECT_NEAR(macro.mcc, sum.mcc, 1e-12);
}

TEST(CrossValidate, WellSeparatedSyntheticClasses) {
    const auto d = synthetic_features(0, three_classes());
    for (auto kind : {ClassifierKind::Tree, ClassifierKind::NaiveBayes, ClassifierKind::Mlp}) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        const auto r = cross_validate(d, cfg, 10, 0);
        EXPECT_GE(r.macro.accuracy, 0.95) << to_string(kind);
        EXPECT_EQ(r.pooled.total(), static_cast<long long>(d.rows.size()));
        EXPECT_EQ(r.per_fold.size(), 10u);
        auto sum = ConfusionMatrix::zeros(3);
        for (const auto& f : r.per_fold) sum += f;
        EXPECT_EQ(sum, r.pooled);
        EXPECT_EQ(r.per_class.size(), 3u);
    }
}

TEST(CrossValidate, ShuffledLabelsAreChanceLevel) {
    auto spec = three_classes();
    for (auto& c : spec.classes) c.n_records = 100;
    const auto base = synthetic_features(3, spec);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::NaiveBayes;
    double mean_mcc = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto d = base;
        auto labels = d.labels();
        SplitMix64 rng(seed + 500);
        rng.shuffle(std::span<int>(labels));
        for (std::size_t i = 0; i < d.rows.size(); ++i) d.rows[i].label = labels[i];
        const auto r = cross_validate(d, cfg, 10, seed);
        EXPECT_LE(std::abs(r.macro.mcc), 0.15) << seed;
        mean_mcc += r.macro.mcc / 10;
    }
    EXPECT_LE(std::abs(mean_mcc), 0.15);
}

TEST(CrossValidate, Deterministic) {
    const auto d = synthetic_features(4, three_classes());
    for (auto kind : {ClassifierKind::Tree, ClassifierKind::NaiveBayes, ClassifierKind::Mlp}) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        cfg.mlp.epochs = 60;
        EXPECT_EQ(cross_validate(d, cfg, 5, 42), cross_validate(d, cfg, 5, 42));
    }
}

TEST(CrossValidate, TrainingErrorsNameFold) {
    // one class has a single row, so some training split lacks it
    auto d = grouped(2, 6);
    d.rows.push_back({{500.0}, 2});
    d.num_classes = 3;
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::NaiveBayes;
    try {
        cross_validate(d, cfg, 3, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptyClass);
        EXPECT_NE(std::string(e.what()).find("fold"), std::string::npos);
    }
}

TEST(PerFoldMean, AveragesFoldMacros) {
    const auto d = synthetic_features(5, three_classes());
    ClassifierConfig cfg;
    const auto r = cross_validate(d, cfg, 4, 1);
    const auto m = per_fold_mean_metrics(r);
    double acc = 0;
    for (const auto& f : r.per_fold) acc += pooled_macro_metrics(f).accuracy / 4;
    EXPECT_NEAR(m.accuracy, acc, 1e-12);
}

}  // namespace
}  // namespace ectshape
