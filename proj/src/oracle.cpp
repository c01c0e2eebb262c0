#include "croissant/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

namespace croissant {

const char* to_string(Strategy s) noexcept {
    switch (s) {
        case Strategy::HeightAtMean: return "height-at-mean";
        case Strategy::HeightAtThreshold: return "height-at-threshold";
        case Strategy::AreaLeftOfThreshold: return "area";
        case Strategy::SpreadComparison: return "spread";
        case Strategy::SlopeComparison: return "slope";
        case Strategy::DotCounting: return "counting";
        case Strategy::InterEdgeInterpolation: return "inter-edge";
        case Strategy::DirectlyOverTick: return "directly-over-tick";
    }
    return "?";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
    for (Strategy st : kAllStrategies)
        if (s == to_string(st)) return st;
    return std::nullopt;
}

bool afforded(Strategy s, VisKind vis) noexcept {
    switch (vis) {
        case VisKind::Pdf: return s != Strategy::DotCounting && s != Strategy::InterEdgeInterpolation;
        case VisKind::Qdp: return s != Strategy::SlopeComparison;
        case VisKind::Croissant: return true;
    }
    return false;
}

Answer decide(double evidence_top, double evidence_bottom, double tie_fraction) noexcept {
    const double scale = std::max(std::abs(evidence_top), std::abs(evidence_bottom));
    if (evidence_top == evidence_bottom || std::abs(evidence_top - evidence_bottom) < tie_fraction * scale)
        return Answer::Neither;
    return evidence_top > evidence_bottom ? Answer::Top : Answer::Bottom;
}

namespace {

// Linear interpolation through x-sorted points; 0 outside their span.
double interpolate(std::span<const Point> pts, double x) {
    if (pts.empty() || x < pts.front().x || x > pts.back().x) return 0.0;
    auto it = std::lower_bound(pts.begin(), pts.end(), x, [](const Point& p, double v) { return p.x < v; });
    if (it == pts.begin()) return it->y;
    const Point& b = *it;
    const Point& a = *(it - 1);
    if (b.x == a.x) return std::max(a.y, b.y);
    return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x);
}

// Trapezoid area under x-sorted points up to x.
double area_left(std::span<const Point> pts, double x) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const Point& a = pts[i - 1];
        if (a.x >= x) break;
        const Point& b = pts[i];
        const double bx = std::min(b.x, x);
        const double by = b.x > x ? a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x) : b.y;
        area += 0.5 * (a.y + by) * (bx - a.x);
    }
    return area;
}

// Top edge of a slice outline (drops the two baseline corners).
std::span<const Point> slice_top(const Slice& s) {
    return std::span<const Point>(s.outline).subspan(1, s.outline.size() - 2);
}

// Croissant envelope: every slice's top edge joined, bridging gaps linearly.
std::vector<Point> envelope(const Panel& p) {
    std::vector<Point> out;
    for (const auto& s : p.slices) {
        const auto top = slice_top(s);
        out.insert(out.end(), top.begin(), top.end());
    }
    return out;
}

struct Column {
    double x;
    double top;
    double radius;
};

std::vector<Column> columns(const Panel& p) {
    std::vector<Column> out;
    for (const auto& d : p.dots) {
        auto it = std::find_if(out.begin(), out.end(), [&](const Column& c) { return c.x == d.center_x_px; });
        if (it == out.end())
            out.push_back({d.center_x_px, d.center_y_px + d.radius_px, d.radius_px});
        else
            it->top = std::max(it->top, d.center_y_px + d.radius_px);
    }
    std::sort(out.begin(), out.end(), [](const Column& a, const Column& b) { return a.x < b.x; });
    return out;
}

double nearest_column_height(const Panel& p, double x) {
    double best = std::numeric_limits<double>::infinity();
    double height = 0.0;
    for (const auto& c : columns(p)) {
        const double dist = std::abs(c.x - x);
        if (dist < best) {
            best = dist;
            height = c.top;
        }
    }
    return height;
}

// Disc area left of the vertical line at x.
double disc_area_left(const Dot& d, double x) {
    const double r = d.radius_px;
    const double t = std::clamp(x - d.center_x_px, -r, r);
    return r * r * std::acos(-t / r) + t * std::sqrt(r * r - t * t);
}

double height_at(const Panel& p, VisKind vis, double x) {
    switch (vis) {
        case VisKind::Pdf: return interpolate(p.curve, x);
        case VisKind::Croissant: return interpolate(envelope(p), x);
        case VisKind::Qdp: return nearest_column_height(p, x);
    }
    return 0.0;
}

double spread(const Panel& p, VisKind vis) {
    if (vis == VisKind::Qdp) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& d : p.dots) {
            lo = std::min(lo, d.center_x_px - d.radius_px);
            hi = std::max(hi, d.center_x_px + d.radius_px);
        }
        return p.dots.empty() ? 0.0 : hi - lo;
    }
    const std::vector<Point> pts = vis == VisKind::Pdf ? p.curve : envelope(p);
    double peak = 0.0;
    for (const auto& pt : pts) peak = std::max(peak, pt.y);
    const double cut = 0.02 * peak;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& pt : pts) {
        if (pt.y > cut) {
            lo = std::min(lo, pt.x);
            hi = std::max(hi, pt.x);
        }
    }
    return hi > lo ? hi - lo : 0.0;
}

double max_slope(std::span<const Point> pts) {
    double m = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dx = pts[i].x - pts[i - 1].x;
        if (dx > 0.0) m = std::max(m, std::abs(pts[i].y - pts[i - 1].y) / dx);
    }
    return m;
}

double inter_edge(const Scene& scene, const Panel& p, const OracleOptions& opts) {
    const double t = scene.threshold_px;
    if (scene.spec.vis == VisKind::Qdp) {
        double units = 0.0;
        for (const auto& d : p.dots) {
            const double left = d.center_x_px - d.radius_px;
            units += std::clamp((t - left) / (2.0 * d.radius_px), 0.0, 1.0);
        }
        return units;
    }
    double units = 0.0;
    for (const auto& s : p.slices) {
        if (s.nominal_right_px <= t) {
            units += 1.0;
        } else if (s.nominal_left_px < t) {
            if (opts.exact_mass_interpolation) {
                const double lo = scene.x_map.to_data(s.nominal_left_px);
                const double mass = cdf(p.dist, scene.spec.threshold) - cdf(p.dist, lo);
                units += mass / s.mass_share;
            } else {
                units += (t - s.nominal_left_px) / (s.nominal_right_px - s.nominal_left_px);
            }
        }
    }
    return units;
}

}  // namespace

double panel_evidence(Strategy s, const Scene& scene, const Panel& p, const OracleOptions& opts) {
    const VisKind vis = scene.spec.vis;
    if (!afforded(s, vis))
        throw NotAfforded(fmt::format("strategy '{}' has nothing to read on a {} chart", to_string(s), to_string(vis)));

    const double t = scene.threshold_px;
    switch (s) {
        case Strategy::HeightAtMean: return height_at(p, vis, scene.x_map.to_px(p.dist.mu()));
        case Strategy::HeightAtThreshold: return height_at(p, vis, t);
        case Strategy::AreaLeftOfThreshold: {
            if (vis == VisKind::Pdf) return area_left(p.curve, t);
            double area = 0.0;
            if (vis == VisKind::Croissant) {
                for (const auto& sl : p.slices) area += area_left(slice_top(sl), t);
            } else {
                for (const auto& d : p.dots) area += disc_area_left(d, t);
            }
            return area;
        }
        case Strategy::SpreadComparison: return spread(p, vis);
        case Strategy::SlopeComparison: {
            if (vis == VisKind::Pdf) return -max_slope(p.curve);
            double m = 0.0;
            for (const auto& sl : p.slices) m = std::max(m, max_slope(slice_top(sl)));
            return -m;
        }
        case Strategy::DotCounting:
            return static_cast<double>(std::count_if(p.dots.begin(), p.dots.end(),
                                                     [&](const Dot& d) { return d.data_x <= scene.spec.threshold; }));
        case Strategy::InterEdgeInterpolation: return inter_edge(scene, p, opts);
        case Strategy::DirectlyOverTick: {
            if (vis == VisKind::Pdf) return interpolate(p.curve, t);
            if (vis == VisKind::Croissant) {
                for (const auto& sl : p.slices)
                    if (sl.left_px <= t && t <= sl.right_px) return interpolate(slice_top(sl), t);
                return 0.0;
            }
            for (const auto& c : columns(p))
                if (std::abs(c.x - t) <= c.radius) return c.top;
            return 0.0;
        }
    }
    return 0.0;
}

OracleVerdict evaluate(Strategy s, const Scene& scene, const ComparisonTask& task, const OracleOptions& opts) {
    const double top = panel_evidence(s, scene, scene.top(), opts);
    const double bottom = panel_evidence(s, scene, scene.bottom(), opts);
    const Answer choice = decide(top, bottom, opts.tie_fraction);
    return {choice, top, bottom, choice == ground_truth(task).answer};
}

OracleVerdict evaluate(Strategy s, const Scene& scene, const OracleOptions& opts) {
    return evaluate(s, scene, scene.spec.task(), opts);
}

std::vector<MatrixRow> correctness_matrix(std::span<const Strategy> strategies, std::span<const StimulusSpec> specs,
                                          const OracleOptions& opts, const LayoutConfig& layout) {
    std::vector<Scene> scenes;
    scenes.reserve(specs.size());
    for (const auto& spec : specs) scenes.push_back(build_scene(spec, layout));

    std::vector<MatrixRow> rows;
    rows.reserve(strategies.size() * specs.size());
    for (Strategy s : strategies) {
        for (const auto& scene : scenes) {
            MatrixRow row{s, scene.spec, std::nullopt};
            if (afforded(s, scene.spec.vis)) row.verdict = evaluate(s, scene, opts);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string matrix_csv(std::span<const MatrixRow> rows) {
    std::string out = "strategy,vis,scaling,sdPair,position,verdict,correct,evidenceTop,evidenceBottom\n";
    for (const auto& r : rows) {
        out += fmt::format("{},{},{},{},{},", to_string(r.strategy), r.spec.vis_label(), to_string(r.spec.scaling),
                           r.spec.sd_pair_label(), to_string(r.spec.position));
        if (r.verdict) {
            const auto& v = *r.verdict;
            out += fmt::format("{},{},{:.6f},{:.6f}\n", to_string(v.choice), v.correct ? "true" : "false",
                               v.evidence_top, v.evidence_bottom);
        } else {
            out += "not-afforded,na,,\n";
        }
    }
    return out;
}

}  // namespace croissant
