#include "ectshape/preprocess.hpp"

#include "ectshape/error.hpp"

#include <algorithm>
#include <cmath>

namespace ectshape {

PointCloud2D::PointCloud2D(std::vector<Point2> points) : points_(std::move(points)) {
    for (const Point2& p : points_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw Error(ErrorCode::InvalidArgument, "point cloud coordinates must be finite");
        }
    }
}

void TrimPolicy::validate() const {
    if (!(quantile_q > 0.0 && quantile_q <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "trim quantile must lie in (0, 1]");
    }
}

TrimMode parse_trim_mode(std::string_view name) {
    if (name == "both-axes" || name == "both_axes") return TrimMode::BothAxes;
    if (name == "radial") return TrimMode::Radial;
    if (name == "none") return TrimMode::None;
    throw Error(ErrorCode::InvalidArgument, "unknown trim mode: " + std::string(name));
}

std::string_view to_string(TrimMode mode) {
    switch (mode) {
        case TrimMode::BothAxes: return "both-axes";
        case TrimMode::Radial: return "radial";
        case TrimMode::None: return "none";
    }
    return "none";
}

PointCloud2D to_point_cloud(const ImpedanceRecord& record) {
    if (record.samples.size() < 3) {
        throw Error(ErrorCode::TooFewSamples,
                    record.record_id + " has " + std::to_string(record.samples.size()) +
                        " samples, need at least 3");
    }
    std::vector<Point2> points;
    points.reserve(record.samples.size());
    for (const Sample& s : record.samples) {
        points.push_back({s.re, s.im});
    }
    return PointCloud2D(std::move(points));
}

double quantile_type7(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw Error(ErrorCode::EmptyCloud, "quantile of empty sequence");
    }
    const double h = static_cast<double>(sorted.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) {
        return sorted.back();
    }
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

double sorted_quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return quantile_type7(values, q);
}

}  // namespace

PointCloud2D trim_noise(const PointCloud2D& cloud, const TrimPolicy& policy) {
    policy.validate();
    if (policy.mode == TrimMode::None) {
        return cloud;
    }
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "cannot trim an empty cloud");
    }

    const auto pts = cloud.points();
    std::vector<bool> keep(pts.size(), true);

    if (policy.mode == TrimMode::BothAxes) {
        std::vector<double> xs, ys;
        xs.reserve(pts.size());
        ys.reserve(pts.size());
        for (const Point2& p : pts) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
        const double tx = sorted_quantile(std::move(xs), policy.quantile_q);
        const double ty = sorted_quantile(std::move(ys), policy.quantile_q);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            keep[i] = !(pts[i].x > tx && pts[i].y > ty);
        }
    } else {
        double gx = 0.0, gy = 0.0;
        for (const Point2& p : pts) {
            gx += p.x;
            gy += p.y;
        }
        gx /= static_cast<double>(pts.size());
        gy /= static_cast<double>(pts.size());
        std::vector<double> dist(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            dist[i] = std::hypot(pts[i].x - gx, pts[i].y - gy);
        }
        const double td = sorted_quantile(dist, policy.quantile_q);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            keep[i] = !(dist[i] > td);
        }
    }

    std::vector<Point2> survivors;
    survivors.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (keep[i]) survivors.push_back(pts[i]);
    }
    if (survivors.size() < 3) {
        throw Error(ErrorCode::DegenerateAfterTrim,
                    std::to_string(survivors.size()) + " points survive trimming");
    }
    return PointCloud2D(std::move(survivors));
}

}  // namespace ectshape
