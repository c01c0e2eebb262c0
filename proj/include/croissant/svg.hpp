#pragma once

// Scene -> standalone SVG 1.1. Output is a pure function of (Scene, StyleConfig):
// fixed element order and every coordinate printed with three decimals.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "croissant/scene.hpp"

namespace croissant::svg {

struct Element {
    std::string tag;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::string text;
    std::vector<Element> children;

    Element& attr(std::string key, std::string value) {
        attrs.emplace_back(std::move(key), std::move(value));
        return *this;
    }
};

struct Document {
    double width = 0.0;
    double height = 0.0;
    std::vector<Element> body;
};

struct StyleConfig {
    double margin_left_px = 48.0;
    double margin_right_px = 48.0;
    double margin_top_px = 28.0;
    double margin_bottom_px = 56.0;
    double gutter_px = 36.0;
    double slice_stroke_px = 1.5;
    double curve_stroke_px = 1.5;
    double axis_stroke_px = 1.0;
    double threshold_stroke_px = 1.5;
    double font_size_px = 12.0;
    double tick_step_data = 5.0;  // <= 0 disables ticks other than the threshold
    std::string top_fill = "#f2c14e";
    std::string top_stroke = "#8a6508";
    std::string bottom_fill = "#5b8fc9";
    std::string bottom_stroke = "#1f4670";
    std::string ink = "#222222";
    std::string font_family = "sans-serif";
    bool legend = true;
};

/// Recognised "style.<name>" keys from a key-value config.
StyleConfig style_from_keys(const std::map<std::string, std::string>& kv, StyleConfig base = {});

/// Fixed three-decimal formatting; "-0.000" is printed as "0.000".
std::string fmt3(double v);

Document render(const Scene& scene, const StyleConfig& style = {});

std::string to_string(const Document& doc);

class WriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes UTF-8 SVG text. Refuses to replace an existing file unless
/// overwrite is set. Errors carry the path.
void write_svg(const Document& doc, const std::filesystem::path& path, bool overwrite = false);

/// Writes arbitrary text with the same overwrite/error contract.
void write_text(const std::string& text, const std::filesystem::path& path, bool overwrite = false);

}  // namespace croissant::svg
