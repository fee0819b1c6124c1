#include "cli.hpp"

#include "ectshape/error.hpp"
#include "ectshape/evaluation.hpp"
#include "ectshape/model_io.hpp"
#include "ectshape/pipeline.hpp"
#include "ectshape/report.hpp"
#include "ectshape/svg_plot.hpp"
#include "ectshape/synthetic.hpp"
#include "ectshape/text.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace ectshape::cli {

namespace {

/// Bad flags, unreadable inputs, unusable configuration: exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    // inputs / outputs
    std::string manifest;
    std::string features_csv;
    std::string record;
    std::string spec;
    std::string model;
    std::string out;
    std::string out_dir;
    std::string model_out;
    // preprocessing
    std::string trim_mode = "both-axes";
    double trim_quantile = 0.98;
    std::string features = "basic";
    double sample_rate = kDefaultSampleRateHz;
    bool strict = false;
    // evaluation
    std::string classifier = "all";
    int k = 10;
    std::uint64_t seed = 0;
    bool per_fold_mean = false;
    // classifier parameters
    int mlp_hidden = 0;  // 0 = auto
    double mlp_lr = 0.3;
    double mlp_momentum = 0.2;
    int mlp_epochs = 500;
    int tree_max_depth = 25;
    int tree_min_leaf = 2;
    bool tree_raw_gain = false;
};

// Shortest round-trip form, for readable headers.
std::string short_num(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text(const std::string& path, std::string_view what) {
    std::ifstream in(path, std::ios::binary);
    if (!in || fs::is_directory(path)) {
        throw UsageError("cannot read " + std::string(what) + ": " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw UsageError("failed writing " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw UsageError("cannot rename into " + path.string() + ": " + ec.message());
}

TrimPolicy trim_policy(const Options& o) {
    TrimPolicy p;
    try {
        p.mode = parse_trim_mode(o.trim_mode);
        p.quantile_q = o.trim_quantile;
        p.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    return p;
}

FeatureMode feature_mode(const Options& o) {
    try {
        return parse_feature_mode(o.features);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

ClassifierConfig classifier_config(const Options& o, ClassifierKind kind) {
    ClassifierConfig c;
    c.kind = kind;
    c.tree.max_depth = o.tree_max_depth;
    c.tree.min_leaf = o.tree_min_leaf;
    c.tree.use_gain_ratio = !o.tree_raw_gain;
    if (o.mlp_hidden > 0) c.mlp.hidden = o.mlp_hidden;
    c.mlp.learning_rate = o.mlp_lr;
    c.mlp.momentum = o.mlp_momentum;
    c.mlp.epochs = o.mlp_epochs;
    c.mlp.seed = o.seed;
    if (c.tree.max_depth < 0 || c.tree.min_leaf < 1 || c.mlp.epochs < 0 ||
        !(c.mlp.learning_rate > 0.0) || c.mlp.momentum < 0.0 || o.mlp_hidden < 0) {
        throw UsageError("invalid classifier parameters");
    }
    return c;
}

std::vector<ClassifierKind> classifier_kinds(const std::string& name, bool allow_all) {
    if (name == "all") {
        if (!allow_all) throw UsageError("--classifier all is only valid for evaluate");
        return {ClassifierKind::Tree, ClassifierKind::NaiveBayes, ClassifierKind::Mlp};
    }
    try {
        return {parse_classifier_kind(name)};
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

// Header text echoed at the top of every artifact. Only the timestamp line
// varies between identical runs.
std::string artifact_header(const std::string& command, const Options& o) {
    std::ostringstream os;
    os << kToolName << " " << kToolVersion << "\n";
    os << "command: " << command << "\n";
    os << "config:";
    auto kv = [&](const char* key, const std::string& value) {
        if (!value.empty()) os << " " << key << "=" << value;
    };
    kv("manifest", o.manifest);
    kv("features_csv", o.features_csv);
    kv("record", o.record);
    kv("spec", o.spec);
    kv("model", o.model);
    os << " trim_mode=" << o.trim_mode << " trim_quantile=" << short_num(o.trim_quantile)
       << " features=" << o.features << " sample_rate=" << short_num(o.sample_rate)
       << " strict=" << (o.strict ? "true" : "false");
    if (command == "evaluate" || command == "train") {
        os << " classifier=" << o.classifier << " k=" << o.k
           << " per_fold_mean=" << (o.per_fold_mean ? "true" : "false")
           << " mlp_hidden=" << (o.mlp_hidden > 0 ? std::to_string(o.mlp_hidden) : "auto")
           << " mlp_lr=" << short_num(o.mlp_lr)
           << " mlp_momentum=" << short_num(o.mlp_momentum)
           << " mlp_epochs=" << o.mlp_epochs << " tree_max_depth=" << o.tree_max_depth
           << " tree_min_leaf=" << o.tree_min_leaf
           << " tree_gain_ratio=" << (o.tree_raw_gain ? "false" : "true");
    }
    os << "\n";
    os << "seed: " << o.seed << "\n";
    os << "timestamp: " << utc_timestamp() << "\n";
    return os.str();
}

DatasetManifest read_manifest(const std::string& path, bool allow_unlabeled) {
    const std::string body = read_text(path, "manifest");
    try {
        return load_manifest(body, allow_unlabeled);
    } catch (const Error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// Reads, parses and featurizes every manifest entry. Failing records are
// reported on `err` and skipped unless strict.
ExtractionResult extract_from_manifest(const Options& o, bool allow_unlabeled, std::ostream& err) {
    const DatasetManifest manifest = read_manifest(o.manifest, allow_unlabeled);
    if (!(o.sample_rate > 0.0)) throw UsageError("--sample-rate must be positive");
    const TrimPolicy policy = trim_policy(o);
    const TextReader reader = filesystem_reader(fs::path(o.manifest).parent_path().string());

    ExtractionResult result;
    for (const auto& entry : manifest.entries) {
        try {
            const auto contents = reader(entry.file_path);
            if (!contents) throw Error(ErrorCode::FileUnreadable, entry.file_path);
            ImpedanceRecord record = parse_record(*contents, entry.file_path, o.sample_rate);
            result.rows.push_back(
                {entry.file_path, entry.label_name, extract_record_features(record, policy)});
        } catch (const Error& e) {
            if (o.strict) throw e.annotated(entry.file_path);
            err << "warning: skipping " << entry.file_path << ": " << e.what() << "\n";
            result.failures.push_back({entry.file_path, e.what()});
        }
    }
    return result;
}

std::vector<FeatureRecord> load_feature_rows(const Options& o, std::ostream& err) {
    if (!o.features_csv.empty() && !o.manifest.empty()) {
        throw UsageError("give either --features-csv or --manifest, not both");
    }
    if (!o.features_csv.empty()) {
        const std::string body = read_text(o.features_csv, "feature CSV");
        try {
            return read_feature_csv(body);
        } catch (const Error& e) {
            throw UsageError(o.features_csv + ": " + e.what());
        }
    }
    if (!o.manifest.empty()) {
        return extract_from_manifest(o, false, err).rows;
    }
    throw UsageError("one of --features-csv or --manifest is required");
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.manifest.empty() || o.out.empty()) throw UsageError("extract needs --manifest and --out");
    feature_mode(o);
    const ExtractionResult result = extract_from_manifest(o, true, err);
    write_atomic(o.out, write_feature_csv(result.rows, artifact_header("extract", o)));
    out << "extracted " << result.rows.size() << " records";
    if (!result.failures.empty()) out << " (" << result.failures.size() << " skipped)";
    out << " -> " << o.out << "\n";
    return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.out_dir.empty()) throw UsageError("evaluate needs --out-dir");
    const auto kinds = classifier_kinds(o.classifier, true);
    const FeatureMode mode = feature_mode(o);
    std::vector<ClassifierConfig> configs;
    for (ClassifierKind kind : kinds) configs.push_back(classifier_config(o, kind));

    const auto rows = load_feature_rows(o, err);
    const LabeledDataset data = to_labeled_dataset(rows, mode);

    std::vector<EvalReport> reports;
    for (const auto& config : configs) {
        try {
            reports.push_back(cross_validate(data, config, o.k, o.seed));
        } catch (const Error& e) {
            throw e.annotated(std::string(to_string(config.kind)));
        }
    }
    const std::string header = artifact_header("evaluate", o);
    const std::string table = format_report_text(reports, data.class_names, o.per_fold_mean, header);
    write_atomic(fs::path(o.out_dir) / "report.txt", table);
    write_atomic(fs::path(o.out_dir) / "report.csv", format_report_csv(reports, header));
    out << format_report_text(reports, data.class_names, o.per_fold_mean);
    return kOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.model_out.empty()) throw UsageError("train needs --model-out");
    const auto kinds = classifier_kinds(o.classifier, false);
    const FeatureMode mode = feature_mode(o);
    const ClassifierConfig config = classifier_config(o, kinds.front());
    const auto rows = load_feature_rows(o, err);
    const LabeledDataset data = to_labeled_dataset(rows, mode);
    const TrainedModel model = train(data, config);
    write_atomic(o.model_out, save_model(model, artifact_header("train", o)));
    out << "trained " << to_string(config.kind) << " on " << data.rows.size() << " rows, "
        << data.num_classes << " classes -> " << o.model_out << "\n";
    return kOk;
}

int cmd_classify(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.model.empty() || o.manifest.empty() || o.out.empty()) {
        throw UsageError("classify needs --model, --manifest and --out");
    }
    const FeatureMode mode = feature_mode(o);
    TrainedModel model;
    try {
        model = load_model(read_text(o.model, "model"));
    } catch (const Error& e) {
        throw UsageError(o.model + ": " + e.what());
    }
    if (model.feature_names != feature_names(mode)) {
        throw Error(ErrorCode::DimensionMismatch,
                    "model was trained on " + std::to_string(model.feature_names.size()) +
                        " features, --features " + o.features + " extracts " +
                        std::to_string(feature_names(mode).size()));
    }
    const ExtractionResult result = extract_from_manifest(o, true, err);

    std::string csv = text::comment_block(artifact_header("classify", o));
    csv += "record_id,predicted_label,confidence\n";
    for (const auto& r : result.rows) {
        const Prediction p = predict(model, select_features(r.features, mode));
        const std::string label = static_cast<std::size_t>(p.label) < model.class_names.size()
                                      ? model.class_names[static_cast<std::size_t>(p.label)]
                                      : std::to_string(p.label);
        csv += r.record_id + "," + label + "," +
               text::format_double(p.posterior[static_cast<std::size_t>(p.label)]) + "\n";
    }
    write_atomic(o.out, csv);
    out << "classified " << result.rows.size() << " records -> " << o.out << "\n";
    return kOk;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
    if (o.spec.empty() || o.out_dir.empty()) throw UsageError("synth needs --spec and --out-dir");
    SynthSpec spec;
    std::vector<SyntheticRecord> records;
    try {
        spec = parse_synth_spec(read_text(o.spec, "synthesis spec"));
        records = generate_synthetic(spec, o.seed);
    } catch (const Error& e) {
        throw UsageError(o.spec + ": " + e.what());
    }
    const std::string header = artifact_header("synth", o);
    DatasetManifest manifest;
    for (const auto& rec : records) {
        const std::string rel = "records/" + rec.record_id + ".txt";
        write_atomic(fs::path(o.out_dir) / rel,
                     format_record(to_impedance_record(rec, spec.sample_rate_hz), header));
        manifest.entries.push_back({rel, rec.label.name});
    }
    write_atomic(fs::path(o.out_dir) / "manifest.csv", format_manifest(manifest, header));
    out << "wrote " << records.size() << " records and manifest.csv to " << o.out_dir << "\n";
    return kOk;
}

int cmd_plot(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.out_dir.empty()) throw UsageError("plot needs --out-dir");
    if (o.record.empty() == o.features_csv.empty()) {
        throw UsageError("plot needs exactly one of --record or --features-csv");
    }
    const std::string header = artifact_header("plot", o);
    if (!o.record.empty()) {
        const TrimPolicy policy = trim_policy(o);
        const std::string body = read_text(o.record, "record");
        ImpedanceRecord record;
        try {
            record = parse_record(body, o.record, o.sample_rate);
        } catch (const Error& e) {
            throw UsageError(o.record + ": " + e.what());
        }
        const PointCloud2D raw = to_point_cloud(record);
        const PointCloud2D trimmed = trim_noise(raw, policy);
        const fs::path target = fs::path(o.out_dir) / (fs::path(o.record).stem().string() + ".svg");
        write_atomic(target, render_record_svg(raw, trimmed, fs::path(o.record).filename().string(),
                                               header));
        out << "wrote " << target.string() << "\n";
        return kOk;
    }
    std::vector<FeatureRecord> rows;
    try {
        rows = read_feature_csv(read_text(o.features_csv, "feature CSV"));
    } catch (const Error& e) {
        throw UsageError(o.features_csv + ": " + e.what());
    }
    if (rows.empty()) throw UsageError(o.features_csv + ": feature CSV has no rows");
    (void)err;
    const fs::path target = fs::path(o.out_dir) / "feature_scatter.svg";
    write_atomic(target, render_feature_scatter_svg(rows, header));
    out << "wrote " << target.string() << "\n";
    return kOk;
}

void add_trim_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--trim-mode", o.trim_mode, "both-axes | radial | none")
        ->check(CLI::IsMember({"both-axes", "radial", "none"}));
    cmd->add_option("--trim-quantile", o.trim_quantile, "quantile q in (0, 1]");
    cmd->add_option("--sample-rate", o.sample_rate, "record sample rate in Hz");
}

void add_feature_option(CLI::App* cmd, Options& o) {
    cmd->add_option("--features", o.features, "basic (L, W, alpha) | extended (all descriptors)")
        ->check(CLI::IsMember({"basic", "extended"}));
}

void add_classifier_params(CLI::App* cmd, Options& o) {
    cmd->add_option("--mlp-hidden", o.mlp_hidden, "hidden units (0 = ceil((d + K) / 2))");
    cmd->add_option("--mlp-lr", o.mlp_lr, "learning rate");
    cmd->add_option("--mlp-momentum", o.mlp_momentum, "momentum");
    cmd->add_option("--mlp-epochs", o.mlp_epochs, "training epochs");
    cmd->add_option("--tree-max-depth", o.tree_max_depth, "maximum tree depth");
    cmd->add_option("--tree-min-leaf", o.tree_min_leaf, "minimum rows per leaf");
    cmd->add_flag("--tree-raw-gain", o.tree_raw_gain, "split on information gain, not gain ratio");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Eddy-current defect classification from impedance-plane shape features",
                 kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);

    auto* extract = app.add_subcommand("extract", "records -> feature CSV");
    extract->add_option("--manifest", o.manifest, "dataset manifest (path,label)")->required();
    extract->add_option("--out", o.out, "feature CSV to write")->required();
    add_trim_options(extract, o);
    add_feature_option(extract, o);
    extract->add_flag("--strict", o.strict, "abort on the first failing record");

    auto* evaluate = app.add_subcommand("evaluate", "stratified k-fold cross-validation");
    evaluate->add_option("--features-csv", o.features_csv, "feature CSV from extract");
    evaluate->add_option("--manifest", o.manifest, "manifest, extracted on the fly");
    evaluate->add_option("--classifier", o.classifier, "tree | nb | mlp | all")
        ->check(CLI::IsMember({"tree", "nb", "mlp", "all"}));
    evaluate->add_option("--k", o.k, "number of folds");
    evaluate->add_option("--seed", o.seed, "random seed");
    evaluate->add_option("--out-dir", o.out_dir, "directory for report.txt / report.csv")->required();
    evaluate->add_flag("--per-fold-mean", o.per_fold_mean, "summarize as mean over folds");
    add_trim_options(evaluate, o);
    add_feature_option(evaluate, o);
    add_classifier_params(evaluate, o);

    auto* train_cmd = app.add_subcommand("train", "train one classifier on all rows");
    train_cmd->add_option("--features-csv", o.features_csv, "feature CSV from extract");
    train_cmd->add_option("--manifest", o.manifest, "manifest, extracted on the fly");
    train_cmd->add_option("--classifier", o.classifier, "tree | nb | mlp")
        ->check(CLI::IsMember({"tree", "nb", "mlp"}))
        ->required();
    train_cmd->add_option("--seed", o.seed, "random seed");
    train_cmd->add_option("--model-out", o.model_out, "model file to write")->required();
    add_trim_options(train_cmd, o);
    add_feature_option(train_cmd, o);
    add_classifier_params(train_cmd, o);

    auto* classify = app.add_subcommand("classify", "predict labels for records");
    classify->add_option("--model", o.model, "model file from train")->required();
    classify->add_option("--manifest", o.manifest, "records to classify")->required();
    classify->add_option("--out", o.out, "predictions CSV")->required();
    add_trim_options(classify, o);
    add_feature_option(classify, o);
    classify->add_flag("--strict", o.strict, "abort on the first failing record");

    auto* synth = app.add_subcommand("synth", "generate synthetic ellipse records");
    synth->add_option("--spec", o.spec, "synthesis spec file")->required();
    synth->add_option("--out-dir", o.out_dir, "output directory")->required();
    synth->add_option("--seed", o.seed, "random seed");

    auto* plot = app.add_subcommand("plot", "SVG plots of a record or a feature CSV");
    plot->add_option("--record", o.record, "record file");
    plot->add_option("--features-csv", o.features_csv, "feature CSV");
    plot->add_option("--out-dir", o.out_dir, "output directory")->required();
    add_trim_options(plot, o);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolName << " " << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (extract->parsed()) return cmd_extract(o, out, err);
        if (evaluate->parsed()) return cmd_evaluate(o, out, err);
        if (train_cmd->parsed()) return cmd_train(o, out, err);
        if (classify->parsed()) return cmd_classify(o, out, err);
        if (synth->parsed()) return cmd_synth(o, out, err);
        if (plot->parsed()) return cmd_plot(o, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    }
    return kUsageError;
}

}  // namespace ectshape::cli
