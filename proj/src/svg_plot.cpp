#include "ectshape/svg_plot.hpp"

#include "ectshape/shape_geometry.hpp"
#include "ectshape/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace ectshape {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// "--" is not allowed inside XML comments.
std::string svg_comment(std::string_view body) {
    if (body.empty()) return {};
    std::string safe(body);
    for (std::size_t p = safe.find("--"); p != std::string::npos; p = safe.find("--", p)) {
        safe.replace(p, 2, "- -");
    }
    return "<!--\n" + safe + "\n-->\n";
}

// Maps a data rectangle onto a panel, y axis pointing up.
struct Frame {
    double x0, y0, w, h;          // panel in pixels
    double min_x, max_x, min_y, max_y;

    double px(double x) const { return x0 + (x - min_x) / (max_x - min_x) * w; }
    double py(double y) const { return y0 + h - (y - min_y) / (max_y - min_y) * h; }
};

Frame fit_frame(double x0, double y0, double w, double h, double min_x, double max_x,
                double min_y, double max_y, bool equal_aspect) {
    auto pad = [](double& lo, double& hi) {
        double span = hi - lo;
        if (!(span > 0.0)) span = std::max(1.0, std::abs(lo));
        lo -= 0.05 * span;
        hi += 0.05 * span;
    };
    pad(min_x, max_x);
    pad(min_y, max_y);
    if (equal_aspect) {
        const double sx = (max_x - min_x) / w;
        const double sy = (max_y - min_y) / h;
        const double s = std::max(sx, sy);
        const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);
        min_x = cx - 0.5 * s * w;
        max_x = cx + 0.5 * s * w;
        min_y = cy - 0.5 * s * h;
        max_y = cy + 0.5 * s * h;
    }
    return {x0, y0, w, h, min_x, max_x, min_y, max_y};
}

void axes_box(std::ostringstream& os, const Frame& f, std::string_view xlabel,
              std::string_view ylabel) {
    os << "<rect x=\"" << num(f.x0) << "\" y=\"" << num(f.y0) << "\" width=\"" << num(f.w)
       << "\" height=\"" << num(f.h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    os << "<text x=\"" << num(f.x0 + f.w / 2) << "\" y=\"" << num(f.y0 + f.h + 28)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << escape_xml(xlabel) << "</text>\n";
    os << "<text x=\"" << num(f.x0 - 36) << "\" y=\"" << num(f.y0 + f.h / 2)
       << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 " << num(f.x0 - 36)
       << " " << num(f.y0 + f.h / 2) << ")\">" << escape_xml(ylabel) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double tx = f.min_x + (f.max_x - f.min_x) * i / 4.0;
        const double ty = f.min_y + (f.max_y - f.min_y) * i / 4.0;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", tx);
        os << "<text x=\"" << num(f.px(tx)) << "\" y=\"" << num(f.y0 + f.h + 14)
           << "\" text-anchor=\"middle\" font-size=\"10\">" << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", ty);
        os << "<text x=\"" << num(f.x0 - 4) << "\" y=\"" << num(f.py(ty) + 3)
           << "\" text-anchor=\"end\" font-size=\"10\">" << buf << "</text>\n";
    }
}

std::string palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
                                   "#393b79", "#637939", "#8c6d31", "#843c39", "#7b4173"};
    constexpr std::size_t n = sizeof colors / sizeof colors[0];
    if (i < n) return colors[i];
    // golden-angle hue walk beyond the fixed palette
    std::ostringstream os;
    os << "hsl(" << static_cast<int>(std::fmod(i * 137.508, 360.0)) << ",60%,45%)";
    return os.str();
}

}  // namespace

std::string render_record_svg(const PointCloud2D& raw, const PointCloud2D& trimmed,
                              std::string_view title, std::string_view header_comment) {
    constexpr double W = 640, H = 560;
    double min_x = raw[0].x, max_x = min_x, min_y = raw[0].y, max_y = min_y;
    for (const Point2& p : raw.points()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const Frame f = fit_frame(70, 40, W - 100, H - 100, min_x, max_x, min_y, max_y, true);

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << svg_comment(header_comment);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << escape_xml(title) << "</text>\n";
    axes_box(os, f, "Resistance (real part)", "Reactance (imaginary part)");

    std::multiset<Point2> kept(trimmed.points().begin(), trimmed.points().end());
    os << "<g class=\"samples\">\n";
    for (const Point2& p : raw.points()) {
        auto it = kept.find(p);
        const bool survived = it != kept.end();
        if (survived) kept.erase(it);
        os << "<circle cx=\"" << num(f.px(p.x)) << "\" cy=\"" << num(f.py(p.y))
           << "\" r=\"1.6\" fill=\"" << (survived ? "#1f77b4" : "#bbbbbb") << "\"/>\n";
    }
    os << "</g>\n";

    const CentralMoments2 m = central_moments(trimmed);
    const OrientedExtents ext = oriented_extents(trimmed, principal_axes(m));
    const Point2 g = m.centroid;
    const Point2 u = ext.major_dir, v = ext.minor_dir;
    auto corner = [&](double s, double t) { return Point2{u.x * s + v.x * t, u.y * s + v.y * t}; };

    const Point2 c0 = corner(ext.major_min, ext.minor_min);
    const Point2 c1 = corner(ext.major_max, ext.minor_min);
    const Point2 c2 = corner(ext.major_max, ext.minor_max);
    const Point2 c3 = corner(ext.major_min, ext.minor_max);
    os << "<polygon class=\"bounding-box\" fill=\"none\" stroke=\"#2ca02c\" stroke-width=\"1.5\" "
          "points=\"";
    for (const Point2& c : {c0, c1, c2, c3}) os << num(f.px(c.x)) << "," << num(f.py(c.y)) << " ";
    os << "\"/>\n";

    // axis through the centroid spanning the box length
    const double g_major = g.x * u.x + g.y * u.y;
    const double a0 = ext.major_min - g_major, a1 = ext.major_max - g_major;
    os << "<line class=\"principal-axis\" x1=\"" << num(f.px(g.x + u.x * a0)) << "\" y1=\""
       << num(f.py(g.y + u.y * a0)) << "\" x2=\"" << num(f.px(g.x + u.x * a1)) << "\" y2=\""
       << num(f.py(g.y + u.y * a1))
       << "\" stroke=\"#d62728\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
    os << "<circle class=\"centroid\" cx=\"" << num(f.px(g.x)) << "\" cy=\"" << num(f.py(g.y))
       << "\" r=\"4\" fill=\"#d62728\"/>\n";

    char caption[160];
    std::snprintf(caption, sizeof caption, "L = %.4g   W = %.4g   alpha = %.2f deg", ext.length,
                  ext.width, ext.alpha_deg);
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8
       << "\" text-anchor=\"middle\" font-size=\"12\">" << caption << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::string render_feature_scatter_svg(const std::vector<FeatureRecord>& rows,
                                       std::string_view header_comment) {
    std::map<std::string, std::size_t> class_order;
    for (const auto& r : rows) class_order.emplace(r.label.empty() ? "(unlabeled)" : r.label, 0);
    std::size_t next = 0;
    for (auto& [name, idx] : class_order) idx = next++;

    constexpr double panel = 300, gap = 70;
    const double legend_w = 170;
    const double W = 60 + 3 * panel + 2 * gap + legend_w;
    const double H = std::max(420.0, 80 + 18.0 * static_cast<double>(class_order.size()));

    struct Proj {
        const char* xl;
        const char* yl;
        int xi, yi;
    };
    const Proj projections[] = {{"L", "W", 0, 1}, {"L", "alpha (deg)", 0, 2}, {"W", "alpha (deg)", 1, 2}};

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << svg_comment(header_comment);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2
       << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">Feature vectors (L, W, alpha) by "
          "class</text>\n";

    for (std::size_t p = 0; p < 3; ++p) {
        const Proj& pr = projections[p];
        auto coord = [&](const FeatureRecord& r, int i) { return r.features.as_array()[static_cast<std::size_t>(i)]; };
        double min_x = 0, max_x = 1, min_y = 0, max_y = 1;
        if (!rows.empty()) {
            min_x = max_x = coord(rows[0], pr.xi);
            min_y = max_y = coord(rows[0], pr.yi);
            for (const auto& r : rows) {
                min_x = std::min(min_x, coord(r, pr.xi));
                max_x = std::max(max_x, coord(r, pr.xi));
                min_y = std::min(min_y, coord(r, pr.yi));
                max_y = std::max(max_y, coord(r, pr.yi));
            }
        }
        const Frame f = fit_frame(60 + p * (panel + gap), 50, panel, panel, min_x, max_x, min_y,
                                  max_y, false);
        os << "<g class=\"projection\">\n";
        axes_box(os, f, pr.xl, pr.yl);
        for (const auto& r : rows) {
            const auto idx = class_order.at(r.label.empty() ? "(unlabeled)" : r.label);
            os << "<circle cx=\"" << num(f.px(coord(r, pr.xi))) << "\" cy=\""
               << num(f.py(coord(r, pr.yi))) << "\" r=\"2.8\" fill=\"" << palette(idx)
               << "\" fill-opacity=\"0.8\"/>\n";
        }
        os << "</g>\n";
    }

    const double lx = 60 + 3 * panel + 2 * gap + 10;
    os << "<g class=\"legend\">\n";
    for (const auto& [name, idx] : class_order) {
        const double ly = 60 + 18.0 * static_cast<double>(idx);
        os << "<g class=\"legend-entry\"><circle cx=\"" << num(lx) << "\" cy=\"" << num(ly)
           << "\" r=\"5\" fill=\"" << palette(idx) << "\"/><text x=\"" << num(lx + 10)
           << "\" y=\"" << num(ly + 4) << "\" font-size=\"12\">" << escape_xml(name)
           << "</text></g>\n";
    }
    os << "</g>\n</svg>\n";
    return os.str();
}

}  // namespace ectshape
