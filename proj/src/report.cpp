#include "ectshape/report.hpp"

#include "ectshape/text.hpp"

#include <cstdio>
#include <sstream>

namespace ectshape {

namespace {

std::string display_name(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Tree: return "Decision tree";
        case ClassifierKind::NaiveBayes: return "Naive Bayes";
        case ClassifierKind::Mlp: return "Multilayer Perceptron";
    }
    return "";
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void csv_row(std::string& out, ClassifierKind kind, int fold, int cls, const MetricSet& m) {
    out += std::string(to_string(kind)) + "," + std::to_string(fold) + "," + std::to_string(cls);
    for (double v : {m.accuracy, m.sensitivity, m.specificity, m.precision, m.mcc}) {
        out += ',';
        out += text::format_double(v);
    }
    out += '\n';
}

}  // namespace

MetricSet summary_metrics(const EvalReport& report, bool per_fold_mean) {
    return per_fold_mean ? per_fold_mean_metrics(report) : report.macro;
}

std::string format_report_text(const std::vector<EvalReport>& reports,
                               const std::vector<std::string>& class_names, bool per_fold_mean,
                               std::string_view header_comment) {
    std::ostringstream os;
    os << text::comment_block(header_comment);
    os << "Mean values of the " << (reports.empty() ? 0 : reports.front().k)
       << "-fold cross validation results ("
       << (per_fold_mean ? "fold mean of macro metrics" : "macro over pooled confusion matrix")
       << ")\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %9s %11s %11s %9s %9s\n", "Classifier", "Accuracy",
                  "Sensitivity", "Specificity", "Precision", "Matthews");
    os << line;
    for (const auto& r : reports) {
        const MetricSet m = summary_metrics(r, per_fold_mean);
        std::snprintf(line, sizeof line, "%-24s %9s %11s %11s %9s %9s\n",
                      display_name(r.classifier_kind).c_str(), fixed(m.accuracy, 4).c_str(),
                      fixed(m.sensitivity, 4).c_str(), fixed(m.specificity, 4).c_str(),
                      fixed(m.precision, 4).c_str(), fixed(m.mcc, 4).c_str());
        os << line;
    }

    for (const auto& r : reports) {
        os << "\n" << display_name(r.classifier_kind) << " [" << r.params << "]\n";
        os << "pooled confusion matrix (rows = true class, columns = predicted)\n";
        const int K = r.pooled.num_classes();
        for (int t = 0; t < K; ++t) {
            const std::string name = static_cast<std::size_t>(t) < class_names.size()
                                         ? class_names[static_cast<std::size_t>(t)]
                                         : std::to_string(t);
            std::snprintf(line, sizeof line, "  %-16s", name.c_str());
            os << line;
            for (int p = 0; p < K; ++p) {
                std::snprintf(line, sizeof line, " %4lld",
                              r.pooled.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);
                os << line;
            }
            os << "\n";
        }
    }
    return os.str();
}

std::string format_report_csv(const std::vector<EvalReport>& reports,
                              std::string_view header_comment) {
    std::string out = text::comment_block(header_comment);
    out += kReportCsvHeader;
    out += '\n';
    for (const auto& r : reports) {
        for (std::size_t f = 0; f < r.per_fold.size(); ++f) {
            const auto& cm = r.per_fold[f];
            if (cm.total() == 0) continue;
            std::vector<MetricSet> per_class;
            const MetricSet macro = pooled_macro_metrics(cm, &per_class);
            for (std::size_t c = 0; c < per_class.size(); ++c) {
                csv_row(out, r.classifier_kind, static_cast<int>(f), static_cast<int>(c),
                        per_class[c]);
            }
            csv_row(out, r.classifier_kind, static_cast<int>(f), -1, macro);
        }
        for (std::size_t c = 0; c < r.per_class.size(); ++c) {
            csv_row(out, r.classifier_kind, -1, static_cast<int>(c), r.per_class[c]);
        }
        csv_row(out, r.classifier_kind, -1, -1, r.macro);
    }
    return out;
}

}  // namespace ectshape
