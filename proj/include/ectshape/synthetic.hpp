#pragma once

#include "ectshape/preprocess.hpp"
#include "ectshape/signal_ingest.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ectshape {

/// One ellipse family: points (a cos t, b sin t), rotated, translated, with
/// isotropic Gaussian noise. Requires a >= b > 0 and n_points >= 16.
struct SynthClassSpec {
    std::string name;
    int n_points = 64;
    Point2 center;
    double axis_a = 1.0;
    double axis_b = 1.0;
    double rotation_deg = 0.0;
    double noise_sigma = 0.0;
    int n_records = 20;
};

struct SynthSpec {
    std::vector<SynthClassSpec> classes;
    double sample_rate_hz = kDefaultSampleRateHz;

    void validate() const;  // throws BadSpec
};

struct SyntheticRecord {
    std::string record_id;
    PointCloud2D cloud;
    ClassLabel label;
};

/// Labels are indexed in the sorted order of class names, matching
/// load_manifest. Output order is spec order, record by record.
std::vector<SyntheticRecord> generate_synthetic(const SynthSpec& spec, std::uint64_t seed);

ImpedanceRecord to_impedance_record(const SyntheticRecord& rec, double sample_rate_hz);

/// Text form, one class per line:
///   class <name> a=<a> b=<b> [rotation=<deg>] [noise=<sigma>] [points=<n>]
///         [records=<n>] [center=<x>,<y>]
///   sample_rate <hz>
/// '#' comments allowed. Throws BadSpec.
SynthSpec parse_synth_spec(std::string_view text);

/// Twelve ellipse families on a 4 x 3 grid of (aspect, rotation), loosely
/// shaped like four notch depths at three notch angles.
SynthSpec twelve_class_grid(double noise_sigma = 0.03, int records_per_class = 20);

}  // namespace ectshape
