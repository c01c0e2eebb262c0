#pragma once

// Resolution-independent chart geometry. A Scene is everything the oracles
// and the SVG renderer ever see; neither goes back to the distributions to
// draw or judge.
//
// Conventions: x is in px from the left edge of the plotting area, y is a
// height in px above the panel baseline (y grows upward).

#include <array>
#include <string>
#include <vector>

#include "croissant/normal.hpp"
#include "croissant/stimulus.hpp"

namespace croissant {

struct Point {
    double x;
    double y;
    friend bool operator==(const Point&, const Point&) = default;
};

/// Affine data-to-px map shared by both panels.
struct XMap {
    double lo;      // data units
    double hi;      // data units
    double scale;   // px per data unit
    double offset;  // px

    double to_px(double x) const noexcept { return x * scale + offset; }
    double to_data(double px) const noexcept { return (px - offset) / scale; }
    friend bool operator==(const XMap&, const XMap&) = default;
};

struct Slice {
    double left_px;           // after padding
    double right_px;          // after padding
    double nominal_left_px;   // quantile boundary (or domain edge) before padding
    double nominal_right_px;
    std::vector<Point> outline;  // baseline-left, curve samples, baseline-right
    double mass_share;
    int index_from_left;      // 1-based
    bool dark_border = true;
    friend bool operator==(const Slice&, const Slice&) = default;
};

struct Dot {
    double center_x_px;
    double center_y_px;
    double radius_px;
    double data_x;  // the quantile value the dot stands for, never the snapped bin
    bool dark_border = false;
    friend bool operator==(const Dot&, const Dot&) = default;
};

struct Panel {
    Normal dist{0.0, 1.0};
    double multiplier = 0.0;      // vertical px·data-unit factor applied to pdf (0 for QDP)
    std::vector<Point> curve;     // Pdf only
    std::vector<Slice> slices;    // Croissant only
    std::vector<Dot> dots;        // Qdp and Croissant
    double baseline_y_px = 0.0;   // panel-local distance from panel top to baseline
    friend bool operator==(const Panel&, const Panel&) = default;
};

struct Scene {
    StimulusSpec spec;
    std::array<Panel, 2> panels;  // [0] = top, [1] = bottom
    double threshold_px = 0.0;
    XMap x_map{};
    std::vector<std::string> warnings;

    const Panel& top() const { return panels[0]; }
    const Panel& bottom() const { return panels[1]; }
};

/// Shared x-domain: mu ± domain_half_width_sigmas · sigma_wide, mapped onto
/// [0, panel_width_px].
XMap make_x_map(const StimulusSpec& spec, const LayoutConfig& layout);

/// Vertical factor s such that s·pdf(d, x) is a px height.
/// EqualArea: s·mass(domain)·px-per-unit == target_area_px2.
/// EqualHeight: s·pdf(d, mu) == target_peak_px.
double scale_curve(const Normal& d, Scaling mode, const LayoutConfig& layout, const XMap& x_map);

Panel build_pdf_panel(const Normal& d, double multiplier, const LayoutConfig& layout, const XMap& x_map);

/// Slices follow the scaled density between equal-probability boundaries,
/// each trimmed by slice_pad_frac of its width on both sides, plus one dot
/// per slice at the slice's mid-mass quantile. Tail slices are clipped to the
/// shared domain; their padding width is measured to the distribution's own
/// ±domain_half_width_sigmas extent so both panels stay geometrically similar.
Panel build_croissant_panel(const Normal& d, int n, double multiplier, const LayoutConfig& layout,
                            const XMap& x_map, std::vector<std::string>* warnings = nullptr);

/// Quantile dots snapped to fixed-width bins and stacked upward in ascending
/// order. EqualArea keeps qdp_dot_radius_px; EqualHeight picks the radius so
/// the tallest stack reaches target_peak_px.
Panel build_qdp_panel(const Normal& d, int n, Scaling mode, const LayoutConfig& layout, const XMap& x_map,
                      std::vector<std::string>* warnings = nullptr);

/// Validates the spec and builds both panels. Throws ConfigError.
Scene build_scene(const StimulusSpec& spec, const LayoutConfig& layout = {});

/// Width of one QDP bin in data units for this map.
double qdp_bin_width(const LayoutConfig& layout, const XMap& x_map);

/// Tallest mark in px (curve peak, slice outline peak, or dot-stack top).
double panel_peak_px(const Panel& p);

/// Pixel area of the marks: trapezoid area under the curve, shoelace area of
/// the slice outlines, or summed dot discs.
double panel_area_px2(const Panel& p);

}  // namespace croissant
