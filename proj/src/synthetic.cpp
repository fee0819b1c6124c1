#include "ectshape/synthetic.hpp"

#include "ectshape/error.hpp"
#include "ectshape/rng.hpp"
#include "ectshape/text.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace ectshape {

void SynthSpec::validate() const {
    if (classes.empty()) {
        throw Error(ErrorCode::BadSpec, "no classes");
    }
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
        throw Error(ErrorCode::BadSpec, "sample rate must be positive");
    }
    std::set<std::string> names;
    for (const auto& c : classes) {
        if (c.name.empty() || c.name.find_first_of(", \t/") != std::string::npos) {
            throw Error(ErrorCode::BadSpec, "class name must be non-empty without ',', '/' or blanks");
        }
        if (!names.insert(c.name).second) {
            throw Error(ErrorCode::BadSpec, "duplicate class " + c.name);
        }
        const bool finite = std::isfinite(c.axis_a) && std::isfinite(c.axis_b) &&
                            std::isfinite(c.rotation_deg) && std::isfinite(c.noise_sigma) &&
                            std::isfinite(c.center.x) && std::isfinite(c.center.y);
        if (!finite || !(c.axis_b > 0.0) || c.axis_a < c.axis_b) {
            throw Error(ErrorCode::BadSpec, c.name + ": need a >= b > 0");
        }
        if (c.n_points < 16) {
            throw Error(ErrorCode::BadSpec, c.name + ": need at least 16 points");
        }
        if (c.noise_sigma < 0.0 || c.n_records < 1) {
            throw Error(ErrorCode::BadSpec, c.name + ": noise >= 0 and records >= 1 required");
        }
    }
}

std::vector<SyntheticRecord> generate_synthetic(const SynthSpec& spec, std::uint64_t seed) {
    spec.validate();
    std::vector<std::string> sorted_names;
    for (const auto& c : spec.classes) sorted_names.push_back(c.name);
    std::sort(sorted_names.begin(), sorted_names.end());

    SplitMix64 rng(seed);
    std::vector<SyntheticRecord> out;
    for (const auto& c : spec.classes) {
        const int index = static_cast<int>(
            std::lower_bound(sorted_names.begin(), sorted_names.end(), c.name) -
            sorted_names.begin());
        const double rot = c.rotation_deg * std::numbers::pi / 180.0;
        const double cr = std::cos(rot);
        const double sr = std::sin(rot);
        for (int r = 0; r < c.n_records; ++r) {
            std::vector<Point2> pts;
            pts.reserve(static_cast<std::size_t>(c.n_points));
            for (int i = 0; i < c.n_points; ++i) {
                const double t = 2.0 * std::numbers::pi * i / c.n_points;
                const double ex = c.axis_a * std::cos(t);
                const double ey = c.axis_b * std::sin(t);
                double x = c.center.x + cr * ex - sr * ey;
                double y = c.center.y + sr * ex + cr * ey;
                if (c.noise_sigma > 0.0) {
                    x += c.noise_sigma * rng.normal();
                    y += c.noise_sigma * rng.normal();
                }
                pts.push_back({x, y});
            }
            std::ostringstream id;
            id << c.name << "_" << (r < 10 ? "0" : "") << r;
            out.push_back({id.str(), PointCloud2D(std::move(pts)), ClassLabel{c.name, index}});
        }
    }
    return out;
}

ImpedanceRecord to_impedance_record(const SyntheticRecord& rec, double sample_rate_hz) {
    ImpedanceRecord out;
    out.record_id = rec.record_id;
    out.sample_rate_hz = sample_rate_hz;
    out.label = rec.label;
    for (const Point2& p : rec.cloud.points()) out.samples.push_back({p.x, p.y});
    return out;
}

SynthSpec parse_synth_spec(std::string_view body) {
    SynthSpec spec;
    const auto lines = text::split_lines(body);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (text::is_comment_or_blank(lines[i])) continue;
        const auto tokens = text::split_whitespace(lines[i]);
        auto real = [&](std::string_view tok) {
            auto v = text::parse_double(tok);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorCode::BadSpec, "bad number '" + std::string(tok) + "'", line_no);
            }
            return *v;
        };
        auto integer = [&](std::string_view tok) {
            auto v = text::parse_int(tok);
            if (!v || *v < 0 || *v > 1'000'000) {
                throw Error(ErrorCode::BadSpec, "bad integer '" + std::string(tok) + "'", line_no);
            }
            return static_cast<int>(*v);
        };

        if (tokens[0] == "sample_rate") {
            if (tokens.size() != 2) throw Error(ErrorCode::BadSpec, "sample_rate <hz>", line_no);
            spec.sample_rate_hz = real(tokens[1]);
            continue;
        }
        if (tokens[0] != "class" || tokens.size() < 2) {
            throw Error(ErrorCode::BadSpec, "expected 'class <name> key=value...'", line_no);
        }
        SynthClassSpec c;
        c.name = std::string(tokens[1]);
        bool has_a = false, has_b = false;
        for (std::size_t t = 2; t < tokens.size(); ++t) {
            const auto eq = tokens[t].find('=');
            if (eq == std::string_view::npos) {
                throw Error(ErrorCode::BadSpec, "expected key=value", line_no);
            }
            const auto key = tokens[t].substr(0, eq);
            const auto value = tokens[t].substr(eq + 1);
            if (key == "a") {
                c.axis_a = real(value);
                has_a = true;
            } else if (key == "b") {
                c.axis_b = real(value);
                has_b = true;
            } else if (key == "rotation") {
                c.rotation_deg = real(value);
            } else if (key == "noise") {
                c.noise_sigma = real(value);
            } else if (key == "points") {
                c.n_points = integer(value);
            } else if (key == "records") {
                c.n_records = integer(value);
            } else if (key == "center") {
                const auto parts = text::split_on(value, ',');
                if (parts.size() != 2) throw Error(ErrorCode::BadSpec, "center=x,y", line_no);
                c.center = {real(parts[0]), real(parts[1])};
            } else {
                throw Error(ErrorCode::BadSpec, "unknown key '" + std::string(key) + "'", line_no);
            }
        }
        if (!has_a || !has_b) throw Error(ErrorCode::BadSpec, "a= and b= are required", line_no);
        spec.classes.push_back(std::move(c));
    }
    spec.validate();
    return spec;
}

SynthSpec twelve_class_grid(double noise_sigma, int records_per_class) {
    // Deeper notches give a longer, flatter trace; notch angle turns it.
    const double lengths[] = {2.0, 3.0, 4.0, 5.0};
    const double widths[] = {1.5, 1.6, 1.7, 1.8};
    const double rotations[] = {10.0, 40.0, 70.0};
    const char* depth_tags[] = {"d0.4", "d0.7", "d1.0", "d1.5"};
    const char* angle_tags[] = {"perp", "ang30", "ang60"};

    SynthSpec spec;
    for (int d = 0; d < 4; ++d) {
        for (int r = 0; r < 3; ++r) {
            SynthClassSpec c;
            c.name = std::string(angle_tags[r]) + "_" + depth_tags[d];
            c.axis_a = lengths[d];
            c.axis_b = widths[d];
            c.rotation_deg = rotations[r];
            c.center = {10.0 + d, 5.0 + r};
            c.noise_sigma = noise_sigma;
            c.n_points = 128;
            c.n_records = records_per_class;
            spec.classes.push_back(std::move(c));
        }
    }
    return spec;
}

}  // namespace ectshape
