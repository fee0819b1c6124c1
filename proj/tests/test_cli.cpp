#include "cli.hpp"

#include "ectshape/model_io.hpp"
#include "ectshape/pipeline.hpp"
#include "ectshape/text.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace ectshape {
namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ect-shape");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& body) {
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << body;
}

std::string strip_comments(const std::string& body) {
    std::string out;
    for (const auto& line : text::split_lines(body)) {
        if (!line.starts_with("#")) out += std::string(line) + "\n";
    }
    return out;
}

std::string strip_timestamp(const std::string& body) {
    std::string out;
    for (const auto& line : text::split_lines(body)) {
        if (!line.starts_with("# timestamp:")) out += std::string(line) + "\n";
    }
    return out;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
    return n;
}

constexpr const char* kThreeClassSpec =
    "class wide a=4 b=1 rotation=10 noise=0.03 records=20\n"
    "class round a=2 b=1.6 rotation=60 noise=0.03 records=20\n"
    "class tilted a=3 b=0.8 rotation=-40 noise=0.03 records=20\n";

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ectshape_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& rel) const { return (dir_ / rel).string(); }

    void synth(const std::string& out_dir, const std::string& seed = "3") {
        spit(dir_ / "spec.txt", kThreeClassSpec);
        const auto r = run_cli({"synth", "--spec", path("spec.txt"), "--out-dir", path(out_dir), "--seed", seed});
        ASSERT_EQ(r.code, 0) << r.err;
    }

    fs::path dir_;
};

TEST_F(CliTest, SynthWritesRecordsAndManifest) {
    synth("syn");
    const auto manifest = slurp(path("syn/manifest.csv"));
    EXPECT_EQ(strip_comments(manifest).size() > 0, true);
    EXPECT_EQ(count(strip_comments(manifest), "\n"), 60u);
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(path("syn/records"))) files += e.is_regular_file();
    EXPECT_EQ(files, 60u);
    EXPECT_EQ(manifest.rfind("# ect-shape 1.0.0\n", 0), 0u);
    EXPECT_NE(manifest.find("# seed: 3\n"), std::string::npos);
}

TEST_F(CliTest, SynthIsDeterministic) {
    synth("a", "11");
    synth("b", "11");
    for (const auto& e : fs::recursive_directory_iterator(path("a"))) {
        if (!e.is_regular_file()) continue;
        const auto rel = fs::relative(e.path(), path("a"));
        const auto ta = slurp(e.path());
        const auto tb = slurp(fs::path(path("b")) / rel);
        EXPECT_EQ(strip_timestamp(ta), strip_timestamp(tb)) << rel;
    }
}

TEST_F(CliTest, ExtractCountsRowsAndSkipsCollinear) {
    synth("syn");
    auto manifest = slurp(path("syn/manifest.csv"));
    spit(dir_ / "syn/records/flat.txt", "0 0\n1 1\n2 2\n3 3\n4 4\n");
    manifest += "records/flat.txt,wide\n";
    spit(dir_ / "syn/manifest.csv", manifest);

    const auto r = run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out", path("f.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("flat.txt"), std::string::npos);
    const auto rows = read_feature_csv(slurp(path("f.csv")));
    EXPECT_EQ(rows.size(), 60u);

    const auto strict = run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out",
                                 path("g.csv"), "--strict"});
    EXPECT_EQ(strict.code, 3);
    EXPECT_FALSE(fs::exists(path("g.csv")));
}

TEST_F(CliTest, ExtractTwoRecordManifest) {
    spit(dir_ / "r1.txt", "0 0\n4 0\n4 2\n0 2\n");
    spit(dir_ / "r2.txt", "0 0\n1 0\n1 3\n0 3\n");
    spit(dir_ / "m.csv", "r1.txt,a\nr2.txt,b\n");
    const auto r = run_cli({"extract", "--manifest", path("m.csv"), "--out", path("f.csv"),
                            "--trim-mode", "none"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto body = strip_comments(slurp(path("f.csv")));
    EXPECT_EQ(count(body, "\n"), 3u);
    EXPECT_EQ(body.rfind(std::string(kFeatureCsvHeader), 0), 0u);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"extract", "--manifest", path("missing.csv"), "--out", path("x.csv")}).code, 2);
    EXPECT_EQ(run_cli({"extract", "--out", path("x.csv")}).code, 2);
    spit(dir_ / "m.csv", "r.txt,a\n");
    EXPECT_EQ(run_cli({"extract", "--manifest", path("m.csv"), "--out", path("x.csv"), "--trim-quantile", "1.5"}).code, 2);
    EXPECT_EQ(run_cli({"evaluate", "--features-csv", path("x.csv"), "--classifier", "svm", "--out-dir", path("o")}).code, 2);
    spit(dir_ / "bad_spec.txt", "class x a=1 b=2\n");
    EXPECT_EQ(run_cli({"synth", "--spec", path("bad_spec.txt"), "--out-dir", path("s")}).code, 2);
    const auto help = run_cli({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("evaluate"), std::string::npos);
}

TEST_F(CliTest, EvaluateAllClassifiersOnSyntheticSet) {
    synth("syn", "0");
    ASSERT_EQ(run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out", path("f.csv")}).code, 0);
    const auto r = run_cli({"evaluate", "--features-csv", path("f.csv"), "--classifier", "all", "--k", "10",
                            "--seed", "0", "--out-dir", path("rep")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = strip_comments(slurp(path("rep/report.csv")));
    EXPECT_TRUE(fs::exists(path("rep/report.txt")));
    for (const std::string kind : {"tree", "nb", "mlp"}) {
        const auto key = "\n" + kind + ",-1,-1,";
        const auto pos = csv.find(key);
        ASSERT_NE(pos, std::string::npos) << kind;
        const std::string line = csv.substr(pos + 1, csv.find('\n', pos + 1) - pos - 1);
        const auto fields = text::split_on(line, ',');
        ASSERT_EQ(fields.size(), 8u);
        EXPECT_GE(text::parse_double(fields[3]).value(), 0.95) << kind;
    }
}

TEST_F(CliTest, EvaluateUnstratifiableIsDataError) {
    spit(dir_ / "r1.txt", "0 0\n4 0\n4 2\n0 2\n");
    spit(dir_ / "m.csv", "r1.txt,a\n");
    const auto r = run_cli({"evaluate", "--manifest", path("m.csv"), "--classifier", "nb", "--out-dir", path("o"),
                            "--trim-mode", "none"});
    EXPECT_EQ(r.code, 3) << r.err;
}

TEST_F(CliTest, ExtractThenEvaluateEqualsFusedPath) {
    synth("syn", "5");
    ASSERT_EQ(run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out", path("f.csv")}).code, 0);
    const std::vector<std::string> common{"--classifier", "all", "--k", "5", "--seed", "9", "--mlp-epochs", "80"};
    auto a = std::vector<std::string>{"evaluate", "--features-csv", path("f.csv"), "--out-dir", path("a")};
    auto b = std::vector<std::string>{"evaluate", "--manifest", path("syn/manifest.csv"), "--out-dir", path("b")};
    a.insert(a.end(), common.begin(), common.end());
    b.insert(b.end(), common.begin(), common.end());
    ASSERT_EQ(run_cli(a).code, 0);
    ASSERT_EQ(run_cli(b).code, 0);
    EXPECT_EQ(strip_comments(slurp(path("a/report.csv"))), strip_comments(slurp(path("b/report.csv"))));
}

TEST_F(CliTest, TrainThenClassifyTrainingRecords) {
    synth("syn", "2");
    const auto t = run_cli({"train", "--manifest", path("syn/manifest.csv"), "--classifier", "tree",
                            "--tree-min-leaf", "1", "--tree-max-depth", "100000", "--model-out", path("m.model")});
    ASSERT_EQ(t.code, 0) << t.err;
    const auto c = run_cli({"classify", "--model", path("m.model"), "--manifest", path("syn/manifest.csv"),
                            "--out", path("pred.csv")});
    ASSERT_EQ(c.code, 0) << c.err;

    std::map<std::string, std::string> truth;
    const std::string manifest = strip_comments(slurp(path("syn/manifest.csv")));
    for (const auto& line : text::split_lines(manifest)) {
        if (line.empty()) continue;
        const auto f = text::split_on(line, ',');
        truth[std::string(f[0])] = std::string(f[1]);
    }
    const std::string predictions = strip_comments(slurp(path("pred.csv")));
    const auto lines = text::split_lines(predictions);
    ASSERT_GE(lines.size(), 61u);
    EXPECT_EQ(lines[0], "record_id,predicted_label,confidence");
    std::size_t checked = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = text::split_on(lines[i], ',');
        ASSERT_EQ(f.size(), 3u);
        EXPECT_EQ(std::string(f[1]), truth.at(std::string(f[0])));
        const double conf = text::parse_double(f[2]).value();
        EXPECT_GT(conf, 0.0);
        EXPECT_LE(conf, 1.0);
        ++checked;
    }
    EXPECT_EQ(checked, 60u);
}

TEST_F(CliTest, ClassifyFeatureModeMismatch) {
    synth("syn", "2");
    ASSERT_EQ(run_cli({"train", "--manifest", path("syn/manifest.csv"), "--classifier", "nb", "--features",
                       "extended", "--model-out", path("m.model")}).code, 0);
    const auto c = run_cli({"classify", "--model", path("m.model"), "--manifest", path("syn/manifest.csv"),
                            "--out", path("pred.csv")});
    EXPECT_EQ(c.code, 3);
    EXPECT_NE(c.err.find("DimensionMismatch"), std::string::npos);
}

TEST_F(CliTest, PlotRecordAndScatter) {
    synth("syn", "1");
    const auto rec = path("syn/records/wide_00.txt");
    ASSERT_TRUE(fs::exists(rec));
    const auto r = run_cli({"plot", "--record", rec, "--out-dir", path("plots")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto svg = slurp(path("plots/wide_00.svg"));
    EXPECT_EQ(count(svg, "class=\"principal-axis\""), 1u);
    EXPECT_EQ(count(svg, "class=\"bounding-box\""), 1u);
    EXPECT_EQ(svg.find("href"), std::string::npos);  // self-contained

    ASSERT_EQ(run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out", path("f.csv")}).code, 0);
    ASSERT_EQ(run_cli({"plot", "--features-csv", path("f.csv"), "--out-dir", path("plots")}).code, 0);
    const auto scatter = slurp(path("plots/feature_scatter.svg"));
    EXPECT_EQ(count(scatter, "class=\"legend-entry\""), 3u);
    EXPECT_EQ(count(scatter, "class=\"projection\""), 3u);
}

TEST_F(CliTest, PlotEmptyFeatureCsvExitsTwo) {
    spit(dir_ / "empty.csv", std::string(kFeatureCsvHeader) + "\n");
    const auto r = run_cli({"plot", "--features-csv", path("empty.csv"), "--out-dir", path("plots")});
    EXPECT_EQ(r.code, 2);
    EXPECT_FALSE(r.err.empty());
    spit(dir_ / "blank.csv", "");
    EXPECT_EQ(run_cli({"plot", "--features-csv", path("blank.csv"), "--out-dir", path("plots")}).code, 2);
}

TEST_F(CliTest, ArtifactHeadersEchoConfig) {
    synth("syn", "4");
    ASSERT_EQ(run_cli({"extract", "--manifest", path("syn/manifest.csv"), "--out", path("f.csv"),
                       "--trim-quantile", "0.95"}).code, 0);
    const auto body = slurp(path("f.csv"));
    EXPECT_NE(body.find("# command: extract"), std::string::npos);
    EXPECT_NE(body.find("0.95"), std::string::npos);
    EXPECT_NE(body.find("# timestamp: "), std::string::npos);
    EXPECT_EQ(count(body, "# timestamp: "), 1u);
}

}  // namespace
}  // namespace ectshape
