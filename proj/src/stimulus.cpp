#include "croissant/stimulus.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <fmt/format.h>

namespace croissant {

const char* to_string(VisKind v) noexcept {
    switch (v) {
        case VisKind::Pdf: return "pdf";
        case VisKind::Qdp: return "qdp";
        case VisKind::Croissant: return "croissant";
    }
    return "?";
}

const char* to_string(Scaling s) noexcept {
    return s == Scaling::EqualArea ? "equal-area" : "equal-height";
}

const char* to_string(Position p) noexcept {
    return p == Position::NarrowOnTop ? "narrow-top" : "narrow-bottom";
}

std::optional<VisKind> parse_vis(std::string_view s) {
    if (s == "pdf") return VisKind::Pdf;
    if (s == "qdp") return VisKind::Qdp;
    if (s == "croissant") return VisKind::Croissant;
    return std::nullopt;
}

std::optional<Scaling> parse_scaling(std::string_view s) {
    if (s == "equal-area") return Scaling::EqualArea;
    if (s == "equal-height") return Scaling::EqualHeight;
    return std::nullopt;
}

std::optional<Position> parse_position(std::string_view s) {
    if (s == "narrow-top") return Position::NarrowOnTop;
    if (s == "narrow-bottom") return Position::NarrowOnBottom;
    return std::nullopt;
}

std::string format_number(double v) { return fmt::format("{}", v); }

void StimulusSpec::validate() const {
    if (!(sigma_narrow > 0.0) || !std::isfinite(sigma_wide))
        throw ConfigError(fmt::format("sigmas must be positive and finite, got {},{}", sigma_narrow, sigma_wide));
    if (!(sigma_narrow < sigma_wide))
        throw ConfigError(fmt::format("narrow sigma {} must be smaller than wide sigma {}", sigma_narrow, sigma_wide));
    if (!std::isfinite(mu)) throw ConfigError("mean must be finite");
    if (!(threshold > mu)) throw ConfigError(fmt::format("threshold {} must exceed the mean {}", threshold, mu));
    switch (vis) {
        case VisKind::Pdf:
            if (quantiles != 0) throw ConfigError("quantiles are not meaningful for a pdf chart");
            break;
        case VisKind::Qdp:
            if (quantiles < 1) throw ConfigError(fmt::format("qdp needs quantiles >= 1, got {}", quantiles));
            break;
        case VisKind::Croissant:
            if (quantiles < 2) throw ConfigError(fmt::format("croissant needs quantiles >= 2, got {}", quantiles));
            break;
    }
}

std::string StimulusSpec::vis_label() const {
    if (vis == VisKind::Pdf) return "pdf";
    return fmt::format("{}-{}", to_string(vis), quantiles);
}

std::string StimulusSpec::sd_pair_label() const {
    return format_number(sigma_narrow) + "v" + format_number(sigma_wide);
}

namespace {

struct LayoutKey {
    const char* name;
    std::function<double&(LayoutConfig&)> real;
};

// curve_samples is the only integer key and is handled separately.
const std::vector<LayoutKey>& real_keys() {
    static const std::vector<LayoutKey> keys{
        {"croissant_dot_radius_px", [](LayoutConfig& c) -> double& { return c.croissant_dot_radius_px; }},
        {"domain_half_width_sigmas", [](LayoutConfig& c) -> double& { return c.domain_half_width_sigmas; }},
        {"dot_height_frac", [](LayoutConfig& c) -> double& { return c.dot_height_frac; }},
        {"headroom_px", [](LayoutConfig& c) -> double& { return c.headroom_px; }},
        {"min_dot_radius_px", [](LayoutConfig& c) -> double& { return c.min_dot_radius_px; }},
        {"panel_width_px", [](LayoutConfig& c) -> double& { return c.panel_width_px; }},
        {"qdp_bin_width_data", [](LayoutConfig& c) -> double& { return c.qdp_bin_width_data; }},
        {"qdp_dot_radius_px", [](LayoutConfig& c) -> double& { return c.qdp_dot_radius_px; }},
        {"slice_pad_frac", [](LayoutConfig& c) -> double& { return c.slice_pad_frac; }},
        {"target_area_px2", [](LayoutConfig& c) -> double& { return c.target_area_px2; }},
        {"target_peak_px", [](LayoutConfig& c) -> double& { return c.target_peak_px; }},
    };
    return keys;
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end || !std::isfinite(out))
        throw ConfigError(fmt::format("config key '{}': '{}' is not a number", key, value));
    return out;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void LayoutConfig::validate() const {
    auto positive = [](const char* key, double v) {
        if (!(v > 0.0)) throw ConfigError(fmt::format("layout.{} must be > 0, got {}", key, v));
    };
    positive("panel_width_px", panel_width_px);
    positive("target_peak_px", target_peak_px);
    positive("target_area_px2", target_area_px2);
    positive("qdp_dot_radius_px", qdp_dot_radius_px);
    positive("croissant_dot_radius_px", croissant_dot_radius_px);
    positive("domain_half_width_sigmas", domain_half_width_sigmas);
    positive("min_dot_radius_px", min_dot_radius_px);
    if (qdp_bin_width_data < 0.0)
        throw ConfigError(fmt::format("layout.qdp_bin_width_data must be > 0 (or 0 for auto), got {}",
                                      qdp_bin_width_data));
    if (!(dot_height_frac > 0.0 && dot_height_frac <= 1.0))
        throw ConfigError(fmt::format("layout.dot_height_frac must lie in (0, 1], got {}", dot_height_frac));
    if (!(slice_pad_frac >= 0.0 && slice_pad_frac < 0.5))
        throw ConfigError(fmt::format("layout.slice_pad_frac {} leaves no visible slice", slice_pad_frac));
    if (headroom_px < 0.0) throw ConfigError("layout.headroom_px must be >= 0");
    if (curve_samples < 257 || curve_samples % 2 == 0)
        throw ConfigError(fmt::format("layout.curve_samples must be odd and >= 257, got {}", curve_samples));
}

std::string LayoutConfig::canonical() const {
    LayoutConfig copy = *this;
    std::map<std::string, std::string> sorted{{"curve_samples", std::to_string(curve_samples)}};
    for (const auto& key : real_keys()) sorted[key.name] = fmt::format("{}", key.real(copy));
    std::string out;
    for (const auto& [k, v] : sorted) out += fmt::format("{} = {}\n", k, v);
    return out;
}

std::string LayoutConfig::hash() const {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return fmt::format("{:016x}", h);
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError(fmt::format("config line {}: empty key", line_no));
        out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
    }
    return out;
}

LayoutConfig layout_from_keys(const std::map<std::string, std::string>& kv, LayoutConfig base) {
    constexpr std::string_view prefix = "layout.";
    for (const auto& [full_key, value] : kv) {
        if (!full_key.starts_with(prefix)) continue;
        const std::string key = full_key.substr(prefix.size());
        if (key == "curve_samples") {
            const double v = parse_real(full_key, value);
            if (v != std::floor(v)) throw ConfigError("layout.curve_samples must be an integer");
            base.curve_samples = static_cast<int>(v);
            continue;
        }
        bool found = false;
        for (const auto& k : real_keys()) {
            if (key == k.name) {
                k.real(base) = parse_real(full_key, value);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError(fmt::format("unknown layout key '{}'", full_key));
    }
    base.validate();
    return base;
}

}  // namespace croissant
