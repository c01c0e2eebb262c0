#include "croissant/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace croissant {

XMap make_x_map(const StimulusSpec& spec, const LayoutConfig& layout) {
    const double half = layout.domain_half_width_sigmas * spec.sigma_wide;
    const double lo = spec.mu - half;
    const double hi = spec.mu + half;
    const double scale = layout.panel_width_px / (hi - lo);
    return {lo, hi, scale, -lo * scale};
}

double scale_curve(const Normal& d, Scaling mode, const LayoutConfig& layout, const XMap& x_map) {
    if (mode == Scaling::EqualHeight) return layout.target_peak_px / pdf(d, d.mu());
    const double mass = cdf(d, x_map.hi) - cdf(d, x_map.lo);
    return layout.target_area_px2 / (mass * x_map.scale);
}

Panel build_pdf_panel(const Normal& d, double multiplier, const LayoutConfig& layout, const XMap& x_map) {
    Panel panel;
    panel.dist = d;
    panel.multiplier = multiplier;

    // Sample symmetrically around the domain centre so the middle sample is exact.
    const int n = layout.curve_samples;
    const int half = (n - 1) / 2;
    const double centre = 0.5 * (x_map.lo + x_map.hi);
    const double step = (x_map.hi - x_map.lo) / (n - 1);
    panel.curve.reserve(static_cast<std::size_t>(n));
    for (int i = -half; i <= half; ++i) {
        const double x = centre + i * step;
        panel.curve.push_back({x_map.to_px(x), multiplier * pdf(d, x)});
    }
    return panel;
}

Panel build_croissant_panel(const Normal& d, int n, double multiplier, const LayoutConfig& layout,
                            const XMap& x_map, std::vector<std::string>* warnings) {
    if (n < 2) throw ConfigError(fmt::format("croissant needs at least 2 slices, got {}", n));
    if (warnings && n != 10 && n != 20)
        warnings->push_back(fmt::format("croissant with {} slices is outside the tested 10/20", n));

    Panel panel;
    panel.dist = d;
    panel.multiplier = multiplier;

    const auto bounds = quantile_boundaries(d, n);
    const double own_lo = d.mu() - layout.domain_half_width_sigmas * d.sigma();
    const double own_hi = d.mu() + layout.domain_half_width_sigmas * d.sigma();
    const auto height = [&](double x) { return multiplier * pdf(d, x); };

    for (int k = 1; k <= n; ++k) {
        const double left = k == 1 ? x_map.lo : std::max(bounds[k - 2], x_map.lo);
        const double right = k == n ? x_map.hi : std::min(bounds[k - 1], x_map.hi);
        if (!(right > left))
            throw ConfigError(fmt::format("slice {} of {} falls outside the chart domain", k, n));

        double pad_basis = right - left;
        if (k == 1) pad_basis = std::min(right, own_hi) - std::max(own_lo, x_map.lo);
        if (k == n) pad_basis = std::min(own_hi, x_map.hi) - std::max(left, own_lo);
        const double pad = layout.slice_pad_frac * std::max(pad_basis, 0.0);

        const double pl = left + pad;
        const double pr = right - pad;
        if (!(pr > pl))
            throw ConfigError(fmt::format("slice padding {} removes slice {} of {} entirely", layout.slice_pad_frac,
                                          k, n));

        Slice slice;
        slice.nominal_left_px = x_map.to_px(left);
        slice.nominal_right_px = x_map.to_px(right);
        slice.left_px = x_map.to_px(pl);
        slice.right_px = x_map.to_px(pr);
        slice.mass_share = 1.0 / n;
        slice.index_from_left = k;

        const double width_px = slice.right_px - slice.left_px;
        const int segments = std::max(8, static_cast<int>(std::ceil(width_px)));
        slice.outline.reserve(static_cast<std::size_t>(segments) + 3);
        slice.outline.push_back({slice.left_px, 0.0});
        for (int i = 0; i <= segments; ++i) {
            const double x = i == segments ? pr : pl + (pr - pl) * i / segments;
            slice.outline.push_back({x_map.to_px(x), height(x)});
        }
        slice.outline.push_back({slice.right_px, 0.0});
        panel.slices.push_back(std::move(slice));

        const double dot_x = inverse_cdf(d, (k - 0.5) / n);
        const double r = layout.croissant_dot_radius_px;
        panel.dots.push_back({x_map.to_px(dot_x), std::max(layout.dot_height_frac * height(dot_x), r), r, dot_x,
                              true});
    }
    return panel;
}

double qdp_bin_width(const LayoutConfig& layout, const XMap& x_map) {
    if (layout.qdp_bin_width_data < 0.0)
        throw ConfigError(fmt::format("qdp bin width must be > 0, got {}", layout.qdp_bin_width_data));
    return layout.qdp_bin_width_data > 0.0 ? layout.qdp_bin_width_data : (x_map.hi - x_map.lo) / 24.0;
}

Panel build_qdp_panel(const Normal& d, int n, Scaling mode, const LayoutConfig& layout, const XMap& x_map,
                      std::vector<std::string>* warnings) {
    const double width = qdp_bin_width(layout, x_map);
    const int bins = std::max(1, static_cast<int>(std::ceil((x_map.hi - x_map.lo) / width - 1e-9)));

    Panel panel;
    panel.dist = d;

    const auto values = quantile_dots(d, n);
    std::vector<int> bin_of;
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    bin_of.reserve(values.size());
    for (double v : values) {
        const int b = std::clamp(static_cast<int>(std::floor((v - x_map.lo) / width)), 0, bins - 1);
        bin_of.push_back(b);
        ++counts[static_cast<std::size_t>(b)];
    }
    const int max_stack = *std::max_element(counts.begin(), counts.end());

    double r = layout.qdp_dot_radius_px;
    if (mode == Scaling::EqualHeight) {
        r = layout.target_peak_px / (2.0 * max_stack);
        if (r < layout.min_dot_radius_px) {
            if (warnings)
                warnings->push_back(fmt::format("equal-height dot radius {:.3f} px clamped to {} px", r,
                                                layout.min_dot_radius_px));
            r = layout.min_dot_radius_px;
        }
    }

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int b = bin_of[i];
        const int level = counts[static_cast<std::size_t>(b)]++;
        const double centre = x_map.lo + (b + 0.5) * width;
        panel.dots.push_back({x_map.to_px(centre), r + 2.0 * r * level, r, values[i], false});
    }
    return panel;
}

double panel_peak_px(const Panel& p) {
    double peak = 0.0;
    for (const auto& pt : p.curve) peak = std::max(peak, pt.y);
    for (const auto& s : p.slices)
        for (const auto& pt : s.outline) peak = std::max(peak, pt.y);
    for (const auto& dot : p.dots) {
        // Croissant dots sit inside their slice; only QDP stacks define the top.
        if (p.slices.empty()) peak = std::max(peak, dot.center_y_px + dot.radius_px);
    }
    return peak;
}

double panel_area_px2(const Panel& p) {
    double area = 0.0;
    for (std::size_t i = 1; i < p.curve.size(); ++i)
        area += 0.5 * (p.curve[i].y + p.curve[i - 1].y) * (p.curve[i].x - p.curve[i - 1].x);
    for (const auto& s : p.slices) {
        double twice = 0.0;
        for (std::size_t i = 0; i < s.outline.size(); ++i) {
            const auto& a = s.outline[i];
            const auto& b = s.outline[(i + 1) % s.outline.size()];
            twice += a.x * b.y - b.x * a.y;
        }
        area += 0.5 * std::abs(twice);
    }
    if (p.slices.empty())
        for (const auto& dot : p.dots) area += std::numbers::pi * dot.radius_px * dot.radius_px;
    return area;
}

Scene build_scene(const StimulusSpec& spec, const LayoutConfig& layout) {
    spec.validate();
    layout.validate();

    Scene scene;
    scene.spec = spec;
    scene.x_map = make_x_map(spec, layout);
    scene.threshold_px = scene.x_map.to_px(spec.threshold);
    if (spec.threshold > scene.x_map.hi)
        scene.warnings.push_back(fmt::format("threshold {} lies beyond the chart domain", spec.threshold));

    const std::array<Normal, 2> dists{spec.top(), spec.bottom()};
    for (std::size_t i = 0; i < 2; ++i) {
        const Normal& d = dists[i];
        switch (spec.vis) {
            case VisKind::Pdf:
                scene.panels[i] = build_pdf_panel(d, scale_curve(d, spec.scaling, layout, scene.x_map), layout,
                                                  scene.x_map);
                break;
            case VisKind::Croissant:
                scene.panels[i] = build_croissant_panel(d, spec.quantiles,
                                                        scale_curve(d, spec.scaling, layout, scene.x_map), layout,
                                                        scene.x_map, &scene.warnings);
                break;
            case VisKind::Qdp:
                scene.panels[i] = build_qdp_panel(d, spec.quantiles, spec.scaling, layout, scene.x_map,
                                                  &scene.warnings);
                break;
        }
    }

    const double frame = std::max({panel_peak_px(scene.panels[0]), panel_peak_px(scene.panels[1]),
                                   layout.target_peak_px}) +
                         layout.headroom_px;
    for (auto& p : scene.panels) p.baseline_y_px = frame;

    std::sort(scene.warnings.begin(), scene.warnings.end());
    scene.warnings.erase(std::unique(scene.warnings.begin(), scene.warnings.end()), scene.warnings.end());
    return scene;
}

}  // namespace croissant
