#pragma once

#include "ectshape/preprocess.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace ectshape {

/// Central second moments (population normalization) and the centroid they
/// are taken about.
struct CentralMoments2 {
    double mu20 = 0.0;
    double mu02 = 0.0;
    double mu11 = 0.0;
    Point2 centroid;
};

/// Principal inertia axes of the covariance [[mu20, mu11], [mu11, mu02]].
/// alpha_deg in (-90, 90] is the angle from +x to `major`.
struct PrincipalAxes {
    double alpha_deg = 0.0;
    Point2 major{1.0, 0.0};
    Point2 minor{0.0, 1.0};
    double lambda_major = 0.0;
    double lambda_minor = 0.0;
};

/// Side lengths of the principal-axis-aligned bounding box. L >= W always;
/// alpha_deg is the direction of the L side.
struct OrientedExtents {
    double length = 0.0;
    double width = 0.0;
    double alpha_deg = 0.0;
    double major_min = 0.0, major_max = 0.0;  // projection ranges, for plotting
    double minor_min = 0.0, minor_max = 0.0;
    Point2 major_dir{1.0, 0.0};
    Point2 minor_dir{0.0, 1.0};
};

/// Counter-clockwise, strictly convex vertex list.
struct ConvexPolygon {
    std::vector<Point2> vertices;
};

struct AreaPerimeter {
    double area = 0.0;
    double perimeter = 0.0;
};

/// The extracted signature of one impedance shape.
struct ShapeFeatures {
    double length_L = 0.0;
    double width_W = 0.0;
    double alpha_deg = 0.0;
    double area_A = 0.0;
    double perimeter_P = 0.0;
    double compactness_C = 0.0;
    double elongation_E = 0.0;
    double rectangularity_R = 0.0;
    double eccentricity = 0.0;
    double convexity = 0.0;

    static constexpr std::size_t kFieldCount = 10;
    static constexpr std::array<std::string_view, kFieldCount> kFieldNames{
        "L",           "W",          "alpha_deg",      "area",         "perimeter",
        "compactness", "elongation", "rectangularity", "eccentricity", "convexity"};

    /// Values in kFieldNames order.
    std::array<double, kFieldCount> as_array() const;
};

/// Normalizes an undirected-axis angle to (-90, 90].
double normalize_axis_angle_deg(double degrees);

Point2 centroid(const PointCloud2D& cloud);

CentralMoments2 central_moments(const PointCloud2D& cloud);

PrincipalAxes principal_axes(const CentralMoments2& moments);

OrientedExtents oriented_extents(const PointCloud2D& cloud, const PrincipalAxes& axes);

/// Andrew's monotone chain. Collinear boundary points are dropped.
ConvexPolygon convex_hull(const PointCloud2D& cloud);

AreaPerimeter polygon_area_perimeter(const ConvexPolygon& poly);

/// Perimeter of the closed polyline through the points in acquisition order.
double closed_polyline_length(const PointCloud2D& cloud);

ShapeFeatures shape_descriptors(const PointCloud2D& cloud);

}  // namespace ectshape
