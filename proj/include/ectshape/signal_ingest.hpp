#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ectshape {

/// One impedance sample: resistance (real part) and reactance (imaginary part).
struct Sample {
    double re = 0.0;
    double im = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct ClassLabel {
    std::string name;
    int index = 0;

    friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

/// One acquisition. Samples are non-empty and finite; sample_rate_hz > 0.
struct ImpedanceRecord {
    std::string record_id;
    std::vector<Sample> samples;
    double sample_rate_hz = 10000.0;
    std::optional<ClassLabel> label;
};

struct ManifestEntry {
    std::string file_path;
    std::string label_name;  // empty only for unlabeled manifests
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> class_names;  // sorted, unique

    /// Index of `name` in class_names, or nullopt.
    std::optional<int> class_index(std::string_view name) const;
};

/// Returns file contents, or nullopt when the path cannot be read.
using TextReader = std::function<std::optional<std::string>(const std::string& path)>;

inline constexpr double kDefaultSampleRateHz = 10000.0;

/// Parses "re im" / "re,im" lines. '#' comments and blank lines are skipped.
ImpedanceRecord parse_record(std::string_view text, std::string record_id,
                             double sample_rate_hz = kDefaultSampleRateHz);

/// Canonical text form: optional '#' header lines followed by one
/// "re im" pair per line at 17 significant digits.
std::string format_record(const ImpedanceRecord& record,
                          std::string_view header_comment = {});

/// Parses "path,label" lines. With allow_unlabeled, a bare "path" line is
/// accepted and contributes no class name.
DatasetManifest load_manifest(std::string_view text, bool allow_unlabeled = false);

std::string format_manifest(const DatasetManifest& manifest,
                            std::string_view header_comment = {});

/// One record per manifest entry, in manifest order, with labels attached.
/// Record ids are the manifest paths.
std::vector<ImpedanceRecord> load_dataset(const DatasetManifest& manifest,
                                          const TextReader& reader,
                                          double sample_rate_hz = kDefaultSampleRateHz);

/// Reader over the local filesystem; relative paths resolve against base_dir.
TextReader filesystem_reader(std::string base_dir = {});

}  // namespace ectshape
