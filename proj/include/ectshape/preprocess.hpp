#pragma once

#include "ectshape/signal_ingest.hpp"

#include <span>
#include <vector>

namespace ectshape {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
    friend auto operator<=>(const Point2&, const Point2&) = default;
};

/// Planar point multiset (resistance, reactance). All coordinates are
/// finite; the constructor enforces it. Order is acquisition order.
class PointCloud2D {
public:
    PointCloud2D() = default;
    explicit PointCloud2D(std::vector<Point2> points);

    std::span<const Point2> points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    bool empty() const noexcept { return points_.empty(); }
    const Point2& operator[](std::size_t i) const noexcept { return points_[i]; }

    friend bool operator==(const PointCloud2D&, const PointCloud2D&) = default;

private:
    std::vector<Point2> points_;
};

enum class TrimMode { BothAxes, Radial, None };

struct TrimPolicy {
    double quantile_q = 0.98;
    TrimMode mode = TrimMode::BothAxes;

    /// Throws InvalidArgument unless quantile_q is in (0, 1].
    void validate() const;
};

TrimMode parse_trim_mode(std::string_view name);  // both-axes | radial | none
std::string_view to_string(TrimMode mode);

/// Point k = (re_k, im_k). Requires at least 3 samples.
PointCloud2D to_point_cloud(const ImpedanceRecord& record);

/// Linear interpolation between order statistics ("type 7").
/// `sorted` must be non-empty and ascending.
double quantile_type7(std::span<const double> sorted, double q);

/// Removes the upper-right noise concentration according to `policy`.
/// Survivors keep their input order and coordinates.
PointCloud2D trim_noise(const PointCloud2D& cloud, const TrimPolicy& policy);

}  // namespace ectshape
