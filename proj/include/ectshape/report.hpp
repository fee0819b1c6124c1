#pragma once

#include "ectshape/evaluation.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ectshape {

inline constexpr std::string_view kReportCsvHeader =
    "classifier,fold,class,accuracy,sensitivity,specificity,precision,mcc";

/// Human-readable summary laid out like a classifier-by-metric results
/// table, followed by each pooled confusion matrix. With per_fold_mean the
/// summary rows use the fold-mean convention instead of pooled-macro.
std::string format_report_text(const std::vector<EvalReport>& reports,
                               const std::vector<std::string>& class_names, bool per_fold_mean,
                               std::string_view header_comment = {});

/// Rows per fold and class, fold=-1 for pooled per-class values, class=-1
/// for macro rows.
std::string format_report_csv(const std::vector<EvalReport>& reports,
                              std::string_view header_comment = {});

/// The summary metric set a report contributes under the chosen convention.
MetricSet summary_metrics(const EvalReport& report, bool per_fold_mean);

}  // namespace ectshape
