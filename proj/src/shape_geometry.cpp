#include "ectshape/shape_geometry.hpp"

#include "ectshape/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ectshape {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Relative tolerance for the isotropic tie and for L/W ordering.
constexpr double kIsotropyTol = 1e-12;
constexpr double kExtentTol = 1e-9;

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Point2 unit_at(double degrees) {
    const double r = degrees * kDegToRad;
    return {std::cos(r), std::sin(r)};
}

}  // namespace

std::array<double, ShapeFeatures::kFieldCount> ShapeFeatures::as_array() const {
    return {length_L,      width_W,      alpha_deg,        area_A,       perimeter_P,
            compactness_C, elongation_E, rectangularity_R, eccentricity, convexity};
}

double normalize_axis_angle_deg(double degrees) {
    double a = std::fmod(degrees, 180.0);
    if (a > 90.0) a -= 180.0;
    if (a <= -90.0) a += 180.0;
    return a;
}

Point2 centroid(const PointCloud2D& cloud) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "centroid of empty cloud");
    }
    double sx = 0.0, sy = 0.0;
    for (const Point2& p : cloud.points()) {
        sx += p.x;
        sy += p.y;
    }
    const auto n = static_cast<double>(cloud.size());
    return {sx / n, sy / n};
}

CentralMoments2 central_moments(const PointCloud2D& cloud) {
    const Point2 g = centroid(cloud);
    double s20 = 0.0, s02 = 0.0, s11 = 0.0;
    for (const Point2& p : cloud.points()) {
        const double dx = p.x - g.x;
        const double dy = p.y - g.y;
        s20 += dx * dx;
        s02 += dy * dy;
        s11 += dx * dy;
    }
    if (s20 == 0.0 && s02 == 0.0) {
        throw Error(ErrorCode::DegenerateCloud, "all points identical");
    }
    const auto n = static_cast<double>(cloud.size());
    return {s20 / n, s02 / n, s11 / n, g};
}

PrincipalAxes principal_axes(const CentralMoments2& m) {
    if (m.mu20 == 0.0 && m.mu02 == 0.0 && m.mu11 == 0.0) {
        throw Error(ErrorCode::DegenerateMoments, "zero covariance matrix");
    }
    const double half_diff = 0.5 * (m.mu20 - m.mu02);
    const double mean = 0.5 * (m.mu20 + m.mu02);
    const double radius = std::hypot(half_diff, m.mu11);
    const double scale = std::abs(m.mu20) + std::abs(m.mu02);

    PrincipalAxes axes;
    const bool isotropic = std::abs(m.mu20 - m.mu02) <= kIsotropyTol * scale &&
                           std::abs(m.mu11) <= kIsotropyTol * scale;
    axes.alpha_deg =
        isotropic ? 0.0
                  : normalize_axis_angle_deg(0.5 * std::atan2(2.0 * m.mu11, m.mu20 - m.mu02) *
                                             kRadToDeg);
    // Angle from the exact radian value keeps the eigenvector accurate.
    const double alpha_rad =
        isotropic ? 0.0 : 0.5 * std::atan2(2.0 * m.mu11, m.mu20 - m.mu02);
    axes.major = {std::cos(alpha_rad), std::sin(alpha_rad)};
    axes.minor = {-axes.major.y, axes.major.x};
    axes.lambda_major = mean + radius;
    axes.lambda_minor = std::max(0.0, mean - radius);
    return axes;
}

OrientedExtents oriented_extents(const PointCloud2D& cloud, const PrincipalAxes& axes) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "extents of empty cloud");
    }
    OrientedExtents ext;
    ext.major_dir = axes.major;
    ext.minor_dir = axes.minor;
    ext.alpha_deg = axes.alpha_deg;

    auto project = [&](const Point2& dir, double& lo, double& hi) {
        lo = hi = cloud[0].x * dir.x + cloud[0].y * dir.y;
        for (const Point2& p : cloud.points()) {
            const double t = p.x * dir.x + p.y * dir.y;
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    };
    project(ext.major_dir, ext.major_min, ext.major_max);
    project(ext.minor_dir, ext.minor_min, ext.minor_max);
    ext.length = ext.major_max - ext.major_min;
    ext.width = ext.minor_max - ext.minor_min;

    if (ext.width > ext.length) {
        if (ext.width - ext.length > kExtentTol * ext.width) {
            // Wider across the inertia axis than along it: the long side
            // defines the orientation.
            ext.alpha_deg = normalize_axis_angle_deg(ext.alpha_deg + 90.0);
            const Point2 new_major = unit_at(ext.alpha_deg);
            ext.major_dir = new_major;
            ext.minor_dir = {-new_major.y, new_major.x};
            project(ext.major_dir, ext.major_min, ext.major_max);
            project(ext.minor_dir, ext.minor_min, ext.minor_max);
            ext.length = ext.major_max - ext.major_min;
            ext.width = ext.minor_max - ext.minor_min;
        }
        if (ext.width > ext.length) {
            std::swap(ext.width, ext.length);
        }
    }
    return ext;
}

ConvexPolygon convex_hull(const PointCloud2D& cloud) {
    if (cloud.empty()) {
        throw Error(ErrorCode::EmptyCloud, "hull of empty cloud");
    }
    std::vector<Point2> pts(cloud.points().begin(), cloud.points().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) {
        throw Error(ErrorCode::CollinearCloud, "fewer than 3 distinct points");
    }

    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point2& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point repeats the first
    if (hull.size() < 3) {
        throw Error(ErrorCode::CollinearCloud, "all points collinear");
    }
    return ConvexPolygon{std::move(hull)};
}

AreaPerimeter polygon_area_perimeter(const ConvexPolygon& poly) {
    AreaPerimeter out;
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    double twice_area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        twice_area += a.x * b.y - b.x * a.y;
        out.perimeter += std::hypot(b.x - a.x, b.y - a.y);
    }
    out.area = 0.5 * twice_area;
    return out;
}

double closed_polyline_length(const PointCloud2D& cloud) {
    const auto pts = cloud.points();
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2& a = pts[i];
        const Point2& b = pts[(i + 1) % pts.size()];
        total += std::hypot(b.x - a.x, b.y - a.y);
    }
    return total;
}

ShapeFeatures shape_descriptors(const PointCloud2D& cloud) {
    if (cloud.size() < 3) {
        throw Error(ErrorCode::TooFewSamples, "shape descriptors need at least 3 points");
    }
    const CentralMoments2 m = central_moments(cloud);
    const PrincipalAxes axes = principal_axes(m);
    const OrientedExtents ext = oriented_extents(cloud, axes);
    if (ext.width <= 1e-12 * ext.length) {
        throw Error(ErrorCode::ZeroWidth, "collinear cloud, elongation undefined");
    }

    ConvexPolygon hull;
    try {
        hull = convex_hull(cloud);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::CollinearCloud) {
            throw Error(ErrorCode::ZeroWidth, "collinear cloud, elongation undefined");
        }
        throw;
    }
    const AreaPerimeter ap = polygon_area_perimeter(hull);

    ShapeFeatures f;
    f.length_L = ext.length;
    f.width_W = ext.width;
    f.alpha_deg = ext.alpha_deg;
    f.area_A = ap.area;
    f.perimeter_P = ap.perimeter;
    f.compactness_C = 4.0 * std::numbers::pi * ap.area / (ap.perimeter * ap.perimeter);
    f.elongation_E = ext.length / ext.width;
    f.rectangularity_R = ap.area / (ext.length * ext.width);
    f.eccentricity = std::sqrt(axes.lambda_minor / axes.lambda_major);
    f.convexity = ap.perimeter / closed_polyline_length(cloud);
    return f;
}

}  // namespace ectshape
