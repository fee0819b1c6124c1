#pragma once

#include "ectshape/classifiers.hpp"
#include "ectshape/preprocess.hpp"
#include "ectshape/shape_geometry.hpp"
#include "ectshape/signal_ingest.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ectshape {

/// basic = (L, W, alpha_deg); extended = every ShapeFeatures field.
enum class FeatureMode { Basic, Extended };

FeatureMode parse_feature_mode(std::string_view name);
std::string_view to_string(FeatureMode mode);
std::vector<std::string> feature_names(FeatureMode mode);
std::vector<double> select_features(const ShapeFeatures& f, FeatureMode mode);

struct FeatureRecord {
    std::string record_id;
    std::string label;  // empty when unlabeled
    ShapeFeatures features;
};

struct ExtractionFailure {
    std::string record_id;
    std::string message;
};

struct ExtractionResult {
    std::vector<FeatureRecord> rows;  // record order, failures omitted
    std::vector<ExtractionFailure> failures;
};

/// to_point_cloud -> trim_noise -> shape_descriptors for one record.
ShapeFeatures extract_record_features(const ImpedanceRecord& record, const TrimPolicy& policy);

/// Per-record failures are collected; with strict, the first one is rethrown.
ExtractionResult extract_features(const std::vector<ImpedanceRecord>& records,
                                  const TrimPolicy& policy, bool strict = false);

inline constexpr std::string_view kFeatureCsvHeader =
    "record_id,label,L,W,alpha_deg,area,perimeter,compactness,elongation,rectangularity,"
    "eccentricity,convexity";

std::string write_feature_csv(const std::vector<FeatureRecord>& rows,
                              std::string_view header_comment = {});

/// Throws MalformedLine on structural problems.
std::vector<FeatureRecord> read_feature_csv(std::string_view text);

/// Class indices follow the sorted label names. Unlabeled rows are rejected.
LabeledDataset to_labeled_dataset(const std::vector<FeatureRecord>& rows, FeatureMode mode);

}  // namespace ectshape
