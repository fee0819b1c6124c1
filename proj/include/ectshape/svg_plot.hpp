#pragma once

#include "ectshape/pipeline.hpp"
#include "ectshape/preprocess.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace ectshape {

/// Impedance-plane scatter of one record: raw points, points removed by the
/// trim in grey, centroid marker, one principal-axis line and one oriented
/// bounding-box polygon. Self-contained SVG.
std::string render_record_svg(const PointCloud2D& raw, const PointCloud2D& trimmed,
                              std::string_view title, std::string_view header_comment = {});

/// (L, W, alpha) scatter as three side-by-side 2D projections (L-W, L-alpha,
/// W-alpha), colored by class, with one legend entry per class.
std::string render_feature_scatter_svg(const std::vector<FeatureRecord>& rows,
                                       std::string_view header_comment = {});

}  // namespace ectshape
