#include "croissant/svg.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

namespace croissant::svg {

std::string fmt3(double v) {
    std::string s = fmt::format("{:.3f}", v);
    if (s == "-0.000") s = "0.000";
    return s;
}

StyleConfig style_from_keys(const std::map<std::string, std::string>& kv, StyleConfig base) {
    constexpr std::string_view prefix = "style.";
    const std::map<std::string, double*> reals{
        {"margin_left_px", &base.margin_left_px},       {"margin_right_px", &base.margin_right_px},
        {"margin_top_px", &base.margin_top_px},         {"margin_bottom_px", &base.margin_bottom_px},
        {"gutter_px", &base.gutter_px},                 {"slice_stroke_px", &base.slice_stroke_px},
        {"curve_stroke_px", &base.curve_stroke_px},     {"axis_stroke_px", &base.axis_stroke_px},
        {"threshold_stroke_px", &base.threshold_stroke_px}, {"font_size_px", &base.font_size_px},
        {"tick_step_data", &base.tick_step_data},
    };
    const std::map<std::string, std::string*> strings{
        {"top_fill", &base.top_fill},       {"top_stroke", &base.top_stroke},
        {"bottom_fill", &base.bottom_fill}, {"bottom_stroke", &base.bottom_stroke},
        {"ink", &base.ink},                 {"font_family", &base.font_family},
    };
    for (const auto& [full_key, value] : kv) {
        if (!full_key.starts_with(prefix)) continue;
        const std::string key = full_key.substr(prefix.size());
        if (auto it = reals.find(key); it != reals.end()) {
            try {
                std::size_t used = 0;
                *it->second = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::exception&) {
                throw ConfigError(fmt::format("config key '{}': '{}' is not a number", full_key, value));
            }
        } else if (auto st = strings.find(key); st != strings.end()) {
            *st->second = value;
        } else if (key == "legend") {
            if (value != "true" && value != "false")
                throw ConfigError(fmt::format("config key '{}' must be true or false", full_key));
            base.legend = value == "true";
        } else {
            throw ConfigError(fmt::format("unknown style key '{}'", full_key));
        }
    }
    return base;
}

namespace {

Element make(std::string tag) { return Element{std::move(tag), {}, {}, {}}; }

Element line(double x1, double y1, double x2, double y2, const std::string& cls, const std::string& stroke,
             double width) {
    Element e = make("line");
    e.attr("class", cls)
        .attr("x1", fmt3(x1))
        .attr("y1", fmt3(y1))
        .attr("x2", fmt3(x2))
        .attr("y2", fmt3(y2))
        .attr("stroke", stroke)
        .attr("stroke-width", fmt3(width));
    return e;
}

Element text(double x, double y, const std::string& cls, const std::string& anchor, std::string body,
             const StyleConfig& style) {
    Element e = make("text");
    e.attr("class", cls)
        .attr("x", fmt3(x))
        .attr("y", fmt3(y))
        .attr("text-anchor", anchor)
        .attr("font-family", style.font_family)
        .attr("font-size", fmt3(style.font_size_px))
        .attr("fill", style.ink);
    e.text = std::move(body);
    return e;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

void serialize(const Element& e, int depth, std::string& out) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '<';
    out += e.tag;
    for (const auto& [k, v] : e.attrs) out += fmt::format(" {}=\"{}\"", k, escape(v));
    if (e.children.empty() && e.text.empty()) {
        out += "/>\n";
        return;
    }
    out += '>';
    if (!e.children.empty()) {
        out += '\n';
        for (const auto& c : e.children) serialize(c, depth + 1, out);
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
    } else {
        out += escape(e.text);
    }
    out += fmt::format("</{}>\n", e.tag);
}

}  // namespace

Document render(const Scene& scene, const StyleConfig& style) {
    const XMap& xm = scene.x_map;
    const double plot_w = (xm.hi - xm.lo) * xm.scale;
    const double frame = scene.panels[0].baseline_y_px;

    Document doc;
    doc.width = style.margin_left_px + plot_w + style.margin_right_px;
    doc.height = style.margin_top_px + 2.0 * frame + style.gutter_px + style.margin_bottom_px;

    const auto px = [&](double x) { return style.margin_left_px + x; };
    const auto panel_top = [&](std::size_t i) { return style.margin_top_px + i * (frame + style.gutter_px); };

    Element bg = make("rect");
    bg.attr("class", "background")
        .attr("x", "0")
        .attr("y", "0")
        .attr("width", fmt3(doc.width))
        .attr("height", fmt3(doc.height))
        .attr("fill", "#ffffff");
    doc.body.push_back(std::move(bg));

    for (std::size_t i = 0; i < 2; ++i) {
        const Panel& p = scene.panels[i];
        const double base = panel_top(i) + p.baseline_y_px;
        const auto py = [&](double y) { return base - y; };
        const std::string& fill = i == 0 ? style.top_fill : style.bottom_fill;
        const std::string& stroke = i == 0 ? style.top_stroke : style.bottom_stroke;

        Element g = make("g");
        g.attr("class", "panel").attr("data-panel", i == 0 ? "top" : "bottom");
        g.children.push_back(text(px(0.0), panel_top(i) + style.font_size_px, "panel-label", "start",
                                  i == 0 ? "Solute A" : "Solute B", style));

        if (!p.curve.empty()) {
            std::string d = fmt::format("M{},{}", fmt3(px(p.curve.front().x)), fmt3(py(0.0)));
            for (const auto& pt : p.curve) d += fmt::format(" L{},{}", fmt3(px(pt.x)), fmt3(py(pt.y)));
            d += fmt::format(" L{},{} Z", fmt3(px(p.curve.back().x)), fmt3(py(0.0)));
            Element path = make("path");
            path.attr("class", "curve")
                .attr("d", d)
                .attr("fill", fill)
                .attr("stroke", stroke)
                .attr("stroke-width", fmt3(style.curve_stroke_px));
            g.children.push_back(std::move(path));
        }
        for (const auto& s : p.slices) {
            std::string d;
            for (std::size_t k = 0; k < s.outline.size(); ++k)
                d += fmt::format("{}{},{} ", k == 0 ? "M" : "L", fmt3(px(s.outline[k].x)), fmt3(py(s.outline[k].y)));
            d += "Z";
            Element path = make("path");
            path.attr("class", "slice")
                .attr("data-index", std::to_string(s.index_from_left))
                .attr("d", d)
                .attr("fill", fill)
                .attr("stroke", s.dark_border ? stroke : "none")
                .attr("stroke-width", fmt3(style.slice_stroke_px));
            g.children.push_back(std::move(path));
        }
        for (const auto& dot : p.dots) {
            Element c = make("circle");
            c.attr("class", "dot")
                .attr("cx", fmt3(px(dot.center_x_px)))
                .attr("cy", fmt3(py(dot.center_y_px)))
                .attr("r", fmt3(dot.radius_px));
            if (p.slices.empty()) {
                c.attr("fill", fill).attr("stroke", dot.dark_border ? stroke : "none");
            } else {
                // Croissant dots sit on their slice fill, so they take the border colour.
                c.attr("fill", stroke).attr("stroke", dot.dark_border ? style.ink : "none");
            }
            c.attr("stroke-width", fmt3(dot.dark_border ? style.slice_stroke_px : 0.0));
            g.children.push_back(std::move(c));
        }
        g.children.push_back(line(px(0.0), base, px(plot_w), base, "baseline", style.ink, style.axis_stroke_px));
        doc.body.push_back(std::move(g));
    }

    const double axis_y = panel_top(1) + scene.panels[1].baseline_y_px;
    doc.body.push_back(line(px(scene.threshold_px), panel_top(0), px(scene.threshold_px), axis_y + 6.0, "threshold",
                            style.ink, style.threshold_stroke_px));

    Element axis = make("g");
    axis.attr("class", "x-axis");
    if (style.tick_step_data > 0.0) {
        const double step = style.tick_step_data;
        for (long k = static_cast<long>(std::ceil(xm.lo / step - 1e-9)); k * step <= xm.hi + 1e-9; ++k) {
            const double v = k * step;
            const double x = px(xm.to_px(v));
            axis.children.push_back(line(x, axis_y, x, axis_y + 4.0, "tick", style.ink, style.axis_stroke_px));
            if (std::abs(v - scene.spec.threshold) > 1e-9 && std::abs(xm.to_px(v) - scene.threshold_px) > 14.0)
                axis.children.push_back(
                    text(x, axis_y + 6.0 + style.font_size_px, "tick-label", "middle", format_number(v), style));
        }
    }
    Element tl = text(px(scene.threshold_px), axis_y + 6.0 + style.font_size_px, "threshold-label", "middle",
                      format_number(scene.spec.threshold), style);
    tl.attr("font-weight", "bold");
    axis.children.push_back(std::move(tl));
    doc.body.push_back(std::move(axis));

    if (style.legend && scene.spec.vis != VisKind::Pdf) {
        const int n = scene.spec.quantiles;
        const double y = doc.height - style.margin_bottom_px / 3.0;
        Element g = make("g");
        g.attr("class", "legend");
        Element c = make("circle");
        c.attr("class", "legend-dot")
            .attr("cx", fmt3(px(5.0)))
            .attr("cy", fmt3(y - style.font_size_px / 3.0))
            .attr("r", fmt3(4.0))
            .attr("fill", style.ink);
        g.children.push_back(std::move(c));
        g.children.push_back(text(px(14.0), y, "legend-text", "start",
                                  fmt::format("= 1 in {} chance ({}%)", n, format_number(100.0 / n)), style));
        doc.body.push_back(std::move(g));
    }
    return doc;
}

std::string to_string(const Document& doc) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\">\n",
        fmt3(doc.width), fmt3(doc.height));
    for (const auto& e : doc.body) serialize(e, 1, out);
    out += "</svg>\n";
    return out;
}

void write_text(const std::string& text, const std::filesystem::path& path, bool overwrite) {
    std::error_code ec;
    if (!overwrite && std::filesystem::exists(path, ec))
        throw WriteError(fmt::format("refusing to overwrite existing file '{}'", path.string()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw WriteError(fmt::format("failed writing '{}'", path.string()));
}

void write_svg(const Document& doc, const std::filesystem::path& path, bool overwrite) {
    write_text(to_string(doc), path, overwrite);
}

}  // namespace croissant::svg
