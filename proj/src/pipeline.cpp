#include "ectshape/pipeline.hpp"

#include "ectshape/error.hpp"
#include "ectshape/text.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ectshape {

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "basic") return FeatureMode::Basic;
    if (name == "extended") return FeatureMode::Extended;
    throw Error(ErrorCode::InvalidArgument, "unknown feature mode: " + std::string(name));
}

std::string_view to_string(FeatureMode mode) {
    return mode == FeatureMode::Basic ? "basic" : "extended";
}

std::vector<std::string> feature_names(FeatureMode mode) {
    const std::size_t n = mode == FeatureMode::Basic ? 3 : ShapeFeatures::kFieldCount;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(ShapeFeatures::kFieldNames[i]);
    return out;
}

std::vector<double> select_features(const ShapeFeatures& f, FeatureMode mode) {
    const auto all = f.as_array();
    const std::size_t n = mode == FeatureMode::Basic ? 3 : all.size();
    return {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n)};
}

ShapeFeatures extract_record_features(const ImpedanceRecord& record, const TrimPolicy& policy) {
    return shape_descriptors(trim_noise(to_point_cloud(record), policy));
}

ExtractionResult extract_features(const std::vector<ImpedanceRecord>& records,
                                  const TrimPolicy& policy, bool strict) {
    policy.validate();
    ExtractionResult result;
    for (const auto& record : records) {
        try {
            result.rows.push_back({record.record_id, record.label ? record.label->name : "",
                                   extract_record_features(record, policy)});
        } catch (const Error& e) {
            if (strict) throw e.annotated(record.record_id);
            result.failures.push_back({record.record_id, e.what()});
        }
    }
    return result;
}

std::string write_feature_csv(const std::vector<FeatureRecord>& rows,
                              std::string_view header_comment) {
    std::string out = text::comment_block(header_comment);
    out += kFeatureCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
        out += r.record_id;
        out += ',';
        out += r.label;
        for (double v : r.features.as_array()) {
            out += ',';
            out += text::format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<FeatureRecord> read_feature_csv(std::string_view body) {
    std::vector<FeatureRecord> rows;
    bool header_seen = false;
    const auto lines = text::split_lines(body);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (text::is_comment_or_blank(lines[i])) continue;
        const std::string_view line = text::trim(lines[i]);
        if (!header_seen) {
            if (line != kFeatureCsvHeader) {
                throw Error(ErrorCode::MalformedLine, "unexpected feature CSV header", line_no);
            }
            header_seen = true;
            continue;
        }
        const auto fields = text::split_on(line, ',');
        if (fields.size() != 2 + ShapeFeatures::kFieldCount) {
            throw Error(ErrorCode::MalformedLine, "wrong column count", line_no);
        }
        std::array<double, ShapeFeatures::kFieldCount> v{};
        for (std::size_t j = 0; j < v.size(); ++j) {
            const auto parsed = text::parse_double(text::trim(fields[j + 2]));
            if (!parsed || !std::isfinite(*parsed)) {
                throw Error(ErrorCode::MalformedLine, "non-numeric or non-finite feature", line_no);
            }
            v[j] = *parsed;
        }
        FeatureRecord r;
        r.record_id = std::string(text::trim(fields[0]));
        r.label = std::string(text::trim(fields[1]));
        r.features = {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
        rows.push_back(std::move(r));
    }
    if (!header_seen) {
        throw Error(ErrorCode::EmptyRecord, "feature CSV has no header");
    }
    return rows;
}

LabeledDataset to_labeled_dataset(const std::vector<FeatureRecord>& rows, FeatureMode mode) {
    std::set<std::string> names;
    for (const auto& r : rows) {
        if (r.label.empty()) {
            throw Error(ErrorCode::LabelOutOfRange, "unlabeled row " + r.record_id);
        }
        names.insert(r.label);
    }
    LabeledDataset data;
    data.class_names.assign(names.begin(), names.end());
    data.num_classes = static_cast<int>(data.class_names.size());
    data.feature_names = feature_names(mode);
    for (const auto& r : rows) {
        const auto it = std::lower_bound(data.class_names.begin(), data.class_names.end(), r.label);
        data.rows.push_back({select_features(r.features, mode),
                             static_cast<int>(it - data.class_names.begin())});
    }
    return data;
}

}  // namespace ectshape
