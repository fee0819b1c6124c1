#include "ectshape/error.hpp"
#include "ectshape/shape_geometry.hpp"
#include "ectshape/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace ectshape {
namespace {

SynthSpec one_class(double a, double b, double rot, double noise, int points = 64) {
    SynthSpec s;
    s.classes = {{"c", points, {0, 0}, a, b, rot, noise, 3}};
    return s;
}

TEST(Synthetic, NoiselessRotationRecovered) {
    const auto clean = generate_synthetic(one_class(4, 2, 30, 0), 0);
    ASSERT_EQ(clean.size(), 3u);
    const auto base = shape_descriptors(clean[0].cloud);
    EXPECT_NEAR(base.alpha_deg, 30.0, 0.5);

    const auto noisy = generate_synthetic(one_class(4, 2, 30, 0.01), 9);
    for (const auto& r : noisy) {
        const auto f = shape_descriptors(r.cloud);
        EXPECT_NEAR(f.alpha_deg, 30.0, 0.5);
        EXPECT_NEAR(f.elongation_E, base.elongation_E, 0.02 * base.elongation_E);
    }
}

TEST(Synthetic, CircleMeetsTieConvention) {
    const auto recs = generate_synthetic(one_class(2, 2, 0, 0), 0);
    const auto ax = principal_axes(central_moments(recs[0].cloud));
    EXPECT_EQ(ax.alpha_deg, 0.0);
}

TEST(Synthetic, SeedChangesCoordinatesNotStructure) {
    const auto spec = twelve_class_grid(0.03, 4);
    const auto a = generate_synthetic(spec, 1);
    const auto b = generate_synthetic(spec, 2);
    ASSERT_EQ(a.size(), b.size());
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].record_id, b[i].record_id);
        EXPECT_EQ(a[i].label, b[i].label);
        EXPECT_EQ(a[i].cloud.size(), b[i].cloud.size());
        any_diff = any_diff || !(a[i].cloud == b[i].cloud);
    }
    EXPECT_TRUE(any_diff);
    const auto again = generate_synthetic(spec, 1);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].cloud, again[i].cloud);
}

TEST(Synthetic, LabelsFollowSortedNames) {
    SynthSpec s;
    s.classes = {{"zeta", 16, {}, 2, 1, 0, 0, 1}, {"alpha", 16, {}, 2, 1, 0, 0, 2}};
    const auto recs = generate_synthetic(s, 0);
    ASSERT_EQ(recs.size(), 3u);
    EXPECT_EQ(recs[0].label, (ClassLabel{"zeta", 1}));
    EXPECT_EQ(recs[1].label, (ClassLabel{"alpha", 0}));
    EXPECT_NE(recs[1].record_id, recs[2].record_id);
}

TEST(Synthetic, TwelveClassGridShape) {
    const auto spec = twelve_class_grid();
    EXPECT_EQ(spec.classes.size(), 12u);
    EXPECT_EQ(generate_synthetic(spec, 0).size(), 240u);
}

TEST(Synthetic, BadSpecs) {
    auto expect_bad = [](SynthSpec s) {
        try {
            generate_synthetic(s, 0);
            ADD_FAILURE();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::BadSpec);
        }
    };
    expect_bad(one_class(1, 2, 0, 0));
    expect_bad(one_class(2, 0, 0, 0));
    expect_bad(one_class(2, 1, 0, 0, 15));
    expect_bad(one_class(2, 1, 0, -1));
    expect_bad(SynthSpec{});
}

TEST(SynthSpecText, ParsesAllKeys) {
    const auto s = parse_synth_spec(
        "# demo\n"
        "sample_rate 5000\n"
        "class wide a=4 b=1 rotation=15 noise=0.1 points=32 records=5 center=1.5,-2\n"
        "class round a=1 b=1\n");
    EXPECT_EQ(s.sample_rate_hz, 5000.0);
    ASSERT_EQ(s.classes.size(), 2u);
    const auto& w = s.classes[0];
    EXPECT_EQ(w.name, "wide");
    EXPECT_EQ(w.axis_a, 4.0);
    EXPECT_EQ(w.axis_b, 1.0);
    EXPECT_EQ(w.rotation_deg, 15.0);
    EXPECT_EQ(w.noise_sigma, 0.1);
    EXPECT_EQ(w.n_points, 32);
    EXPECT_EQ(w.n_records, 5);
    EXPECT_EQ(w.center, (Point2{1.5, -2}));
    EXPECT_EQ(s.classes[1].n_points, 64);
}

TEST(SynthSpecText, RejectsGarbage) {
    for (const char* text : {"class x a=1\n", "class x a=1 b=2\n", "shape x\n", "class x a=2 b=1 colour=red\n",
                             "class x a=2 b=1 points=abc\n", ""}) {
        EXPECT_THROW(parse_synth_spec(text), Error) << text;
    }
}

TEST(Synthetic, ImpedanceRecordCarriesLabel) {
    const auto recs = generate_synthetic(one_class(3, 1, 0, 0), 0);
    const auto r = to_impedance_record(recs[0], 2500);
    EXPECT_EQ(r.samples.size(), 64u);
    EXPECT_EQ(r.sample_rate_hz, 2500);
    ASSERT_TRUE(r.label.has_value());
    EXPECT_EQ(r.label->name, "c");
    EXPECT_EQ(r.samples[0].re, recs[0].cloud[0].x);
}

}  // namespace
}  // namespace ectshape
