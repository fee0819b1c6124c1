#include "ectshape/error.hpp"
#include "ectshape/model_io.hpp"
#include "ectshape/rng.hpp"

#include <gtest/gtest.h>

#include <cstring>

namespace ectshape {
namespace {

LabeledDataset sample_data() {
    SplitMix64 rng(12);
    LabeledDataset d;
    d.num_classes = 3;
    d.feature_names = {"L", "W", "alpha_deg"};
    d.class_names = {"ang30_d0.4", "perp_d0.7", "perp_d1.0"};
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 12; ++i) {
            d.rows.push_back({{rng.normal(c, 0.4), rng.normal(-c, 0.3), rng.normal(10.0 * c, 3)}, c});
        }
    }
    return d;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

bool bit_equal(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!bit_equal(a[i], b[i])) return false;
    }
    return true;
}

TrainedModel trained(ClassifierKind kind) {
    ClassifierConfig cfg;
    cfg.kind = kind;
    cfg.mlp.epochs = 40;
    cfg.mlp.seed = 5;
    return train(sample_data(), cfg);
}

TEST(ModelIo, GnbRoundTripIsBitExact) {
    const auto m = trained(ClassifierKind::NaiveBayes);
    const auto back = load_model(save_model(m, "header\nsecond"));
    ASSERT_EQ(back.kind(), ClassifierKind::NaiveBayes);
    const auto& a = std::get<GnbModel>(m.model);
    const auto& b = std::get<GnbModel>(back.model);
    EXPECT_TRUE(bit_equal(a.priors, b.priors));
    EXPECT_TRUE(bit_equal(a.means, b.means));
    EXPECT_TRUE(bit_equal(a.variances, b.variances));
    EXPECT_EQ(back.feature_names, m.feature_names);
    EXPECT_EQ(back.class_names, m.class_names);
    EXPECT_EQ(back.num_classes, 3);
}

TEST(ModelIo, TreeRoundTripIsBitExact) {
    const auto m = trained(ClassifierKind::Tree);
    const auto back = load_model(save_model(m));
    const auto& a = std::get<TreeModel>(m.model);
    const auto& b = std::get<TreeModel>(back.model);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
        EXPECT_EQ(a.nodes[i].feature, b.nodes[i].feature);
        EXPECT_EQ(std::memcmp(&a.nodes[i].threshold, &b.nodes[i].threshold, sizeof(double)), 0);
        EXPECT_EQ(a.nodes[i].left, b.nodes[i].left);
        EXPECT_EQ(a.nodes[i].right, b.nodes[i].right);
        EXPECT_TRUE(bit_equal(a.nodes[i].distribution, b.nodes[i].distribution));
    }
}

TEST(ModelIo, MlpRoundTripIsBitExact) {
    const auto m = trained(ClassifierKind::Mlp);
    const auto text = save_model(m);
    const auto back = load_model(text);
    const auto& a = std::get<MlpModel>(m.model);
    const auto& b = std::get<MlpModel>(back.model);
    EXPECT_EQ(a.hidden, b.hidden);
    EXPECT_TRUE(bit_equal(a.w1, b.w1));
    EXPECT_TRUE(bit_equal(a.b1, b.b1));
    EXPECT_TRUE(bit_equal(a.w2, b.w2));
    EXPECT_TRUE(bit_equal(a.b2, b.b2));
    EXPECT_TRUE(bit_equal(a.scale_min, b.scale_min));
    EXPECT_TRUE(bit_equal(a.scale_max, b.scale_max));
    // re-saving reproduces the text exactly
    EXPECT_EQ(save_model(back), text);
}

TEST(ModelIo, PredictionsSurviveRoundTrip) {
    const auto d = sample_data();
    for (auto kind : {ClassifierKind::Tree, ClassifierKind::NaiveBayes, ClassifierKind::Mlp}) {
        const auto m = trained(kind);
        const auto back = load_model(save_model(m));
        for (const auto& r : d.rows) {
            EXPECT_EQ(predict(m, r.values).posterior, predict(back, r.values).posterior);
        }
    }
}

TEST(ModelIo, HeaderLineNamesKind) {
    const auto text = save_model(trained(ClassifierKind::Mlp), "made by test");
    EXPECT_EQ(text.rfind("# made by test\n", 0), 0u);
    EXPECT_NE(text.find("\nectshape-model v1 mlp\n"), std::string::npos);
}

TEST(ModelIo, RejectsDamagedFiles) {
    const auto good = save_model(trained(ClassifierKind::Tree));
    const std::vector<std::string> bad{
        "",
        "not a model\n",
        "ectshape-model v2 tree\n",
        "ectshape-model v1 forest\n",
        good.substr(0, good.size() / 2),
    };
    for (const auto& text : bad) {
        try {
            load_model(text);
            ADD_FAILURE() << "accepted: " << text.substr(0, 40);
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadModelFile);
        }
    }
    std::string corrupt = good;
    const auto pos = corrupt.find("split ");
    ASSERT_NE(pos, std::string::npos);
    corrupt.replace(pos, 6, "splat ");
    EXPECT_THROW(load_model(corrupt), Error);
}

}  // namespace
}  // namespace ectshape
