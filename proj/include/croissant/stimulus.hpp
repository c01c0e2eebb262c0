#pragma once

// Experimental-cell description and the chart layout constants.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "croissant/normal.hpp"

namespace croissant {

/// Raised for any invalid combination of spec fields or layout keys.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class VisKind { Pdf, Qdp, Croissant };
enum class Scaling { EqualArea, EqualHeight };
enum class Position { NarrowOnTop, NarrowOnBottom };

const char* to_string(VisKind v) noexcept;
const char* to_string(Scaling s) noexcept;
const char* to_string(Position p) noexcept;

std::optional<VisKind> parse_vis(std::string_view s);
std::optional<Scaling> parse_scaling(std::string_view s);
std::optional<Position> parse_position(std::string_view s);

/// One cell of the experiment. quantiles is 0 for Pdf, 20 for Qdp and
/// 10 or 20 for Croissant in the tested design.
struct StimulusSpec {
    VisKind vis = VisKind::Pdf;
    int quantiles = 0;
    Scaling scaling = Scaling::EqualArea;
    double sigma_narrow = 2.0;
    double sigma_wide = 5.0;
    Position position = Position::NarrowOnTop;
    double mu = 50.0;
    double threshold = 54.0;

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    Normal narrow() const { return {mu, sigma_narrow}; }
    Normal wide() const { return {mu, sigma_wide}; }
    Normal top() const { return position == Position::NarrowOnTop ? narrow() : wide(); }
    Normal bottom() const { return position == Position::NarrowOnTop ? wide() : narrow(); }
    ComparisonTask task() const { return {top(), bottom(), threshold}; }

    /// "pdf", "qdp-20", "croissant-10", ...
    std::string vis_label() const;
    /// "2v5", "4.5v5"
    std::string sd_pair_label() const;

    friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

/// Pixel-space constants for building scenes. All lengths in px unless
/// suffixed _data.
struct LayoutConfig {
    double panel_width_px = 480.0;
    double target_peak_px = 120.0;
    double target_area_px2 = 12000.0;
    double qdp_dot_radius_px = 7.0;
    double croissant_dot_radius_px = 4.0;
    double dot_height_frac = 0.4;
    double slice_pad_frac = 0.04;
    double qdp_bin_width_data = 0.0;  // 0 selects (domain span) / 24
    double domain_half_width_sigmas = 3.5;
    double min_dot_radius_px = 1.0;
    double headroom_px = 12.0;
    int curve_samples = 401;  // odd, so the mean is sampled exactly

    void validate() const;

    /// Canonical "key = value" text, one key per line, sorted by key.
    std::string canonical() const;
    /// 16-hex-digit FNV-1a hash of canonical().
    std::string hash() const;
};

/// Parse "key = value" lines; lines starting with '#' are comments.
/// Duplicate keys keep the last value.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Apply recognised "layout.<name>" keys onto a config.
/// Unknown keys under the "layout." prefix throw ConfigError.
LayoutConfig layout_from_keys(const std::map<std::string, std::string>& kv, LayoutConfig base = {});

/// Shortest round-trip decimal for sigma labels ("2", "4.5").
std::string format_number(double v);

}  // namespace croissant
