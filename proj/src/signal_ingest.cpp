#include "ectshape/signal_ingest.hpp"

#include "ectshape/error.hpp"
#include "ectshape/text.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ectshape {

std::optional<int> DatasetManifest::class_index(std::string_view name) const {
    auto it = std::lower_bound(class_names.begin(), class_names.end(), name);
    if (it == class_names.end() || *it != name) {
        return std::nullopt;
    }
    return static_cast<int>(it - class_names.begin());
}

ImpedanceRecord parse_record(std::string_view text, std::string record_id,
                             double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive and finite");
    }
    ImpedanceRecord record;
    record.record_id = std::move(record_id);
    record.sample_rate_hz = sample_rate_hz;

    const auto lines = text::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (text::is_comment_or_blank(lines[i])) {
            continue;
        }
        const auto fields = text::split_fields(lines[i]);
        if (fields.size() != 2) {
            throw Error(ErrorCode::MalformedLine,
                        "expected 2 fields, found " + std::to_string(fields.size()), line_no);
        }
        const auto re = text::parse_double(fields[0]);
        const auto im = text::parse_double(fields[1]);
        if (!re || !im) {
            throw Error(ErrorCode::MalformedLine, "non-numeric field", line_no);
        }
        if (!std::isfinite(*re) || !std::isfinite(*im)) {
            throw Error(ErrorCode::NonFiniteSample, "NaN or infinite value", line_no);
        }
        record.samples.push_back({*re, *im});
    }
    if (record.samples.empty()) {
        throw Error(ErrorCode::EmptyRecord, "no data lines");
    }
    return record;
}

std::string format_record(const ImpedanceRecord& record, std::string_view header_comment) {
    std::string out = text::comment_block(header_comment);
    out.reserve(out.size() + record.samples.size() * 48);
    for (const Sample& s : record.samples) {
        out += text::format_double(s.re);
        out += ' ';
        out += text::format_double(s.im);
        out += '\n';
    }
    return out;
}

DatasetManifest load_manifest(std::string_view text, bool allow_unlabeled) {
    DatasetManifest manifest;
    std::unordered_set<std::string> seen_paths;
    std::set<std::string> names;

    const auto lines = text::split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (text::is_comment_or_blank(lines[i])) {
            continue;
        }
        const auto fields = text::split_on(text::trim(lines[i]), ',');
        ManifestEntry entry;
        if (fields.size() == 2) {
            entry.file_path = std::string(text::trim(fields[0]));
            entry.label_name = std::string(text::trim(fields[1]));
        } else if (fields.size() == 1 && allow_unlabeled) {
            entry.file_path = std::string(text::trim(fields[0]));
        } else {
            throw Error(ErrorCode::MalformedLine, "expected \"path,label\"", line_no);
        }
        if (entry.file_path.empty() || (entry.label_name.empty() && !allow_unlabeled)) {
            throw Error(ErrorCode::MalformedLine, "empty path or label", line_no);
        }
        if (!seen_paths.insert(entry.file_path).second) {
            throw Error(ErrorCode::DuplicatePath, entry.file_path, line_no);
        }
        if (!entry.label_name.empty()) {
            names.insert(entry.label_name);
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.class_names.assign(names.begin(), names.end());
    return manifest;
}

std::string format_manifest(const DatasetManifest& manifest, std::string_view header_comment) {
    std::string out = text::comment_block(header_comment);
    for (const auto& e : manifest.entries) {
        out += e.file_path;
        if (!e.label_name.empty()) {
            out += ',';
            out += e.label_name;
        }
        out += '\n';
    }
    return out;
}

std::vector<ImpedanceRecord> load_dataset(const DatasetManifest& manifest,
                                          const TextReader& reader, double sample_rate_hz) {
    std::vector<ImpedanceRecord> records;
    records.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        const auto contents = reader(entry.file_path);
        if (!contents) {
            throw Error(ErrorCode::FileUnreadable, entry.file_path);
        }
        ImpedanceRecord record;
        try {
            record = parse_record(*contents, entry.file_path, sample_rate_hz);
        } catch (const Error& e) {
            throw e.annotated(entry.file_path);
        }
        if (!entry.label_name.empty()) {
            const auto index = manifest.class_index(entry.label_name);
            if (!index) {
                throw Error(ErrorCode::InvalidArgument,
                            "label not in manifest classes: " + entry.label_name);
            }
            record.label = ClassLabel{entry.label_name, *index};
        }
        records.push_back(std::move(record));
    }
    return records;
}

TextReader filesystem_reader(std::string base_dir) {
    return [base = std::filesystem::path(std::move(base_dir))](
               const std::string& path) -> std::optional<std::string> {
        std::filesystem::path p(path);
        if (p.is_relative() && !base.empty()) {
            p = base / p;
        }
        std::ifstream in(p, std::ios::binary);
        if (!in) {
            return std::nullopt;
        }
        std::ostringstream ss;
        ss << in.rdbuf();
        if (in.bad()) {
            return std::nullopt;
        }
        return ss.str();
    };
}

}  // namespace ectshape
