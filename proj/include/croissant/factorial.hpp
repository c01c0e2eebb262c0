#pragma once

// The 4 (chart) x 2 (scaling) x 4 (SD pair) x 2 (position) stimulus set and
// its manifest.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "croissant/normal.hpp"
#include "croissant/stimulus.hpp"
#include "croissant/svg.hpp"

namespace croissant {

inline constexpr const char* kGeneratorVersion = "croissant-charts 1.0.0";

/// A chart kind as tested: pdf, qdp-20, croissant-10, croissant-20.
struct ChartKind {
    VisKind vis;
    int quantiles;
    friend bool operator==(const ChartKind&, const ChartKind&) = default;
};

std::vector<ChartKind> tested_chart_kinds();

struct FactorialConfig {
    double mu = 50.0;
    double threshold_offset = 4.0;  // threshold = mu + offset
    std::vector<std::pair<double, double>> sd_pairs{{2.0, 5.0}, {3.0, 5.0}, {4.0, 5.0}, {4.5, 5.0}};
    std::vector<ChartKind> charts = tested_chart_kinds();
    std::optional<VisKind> only_vis;  // filter
};

/// Ordered chart kind, scaling, SD pair, position.
std::vector<StimulusSpec> factorial_specs(const FactorialConfig& config = {});

/// "{vis}-{quantiles}-{scaling}-{narrow}v{wide}-{position}.svg"
std::string stimulus_file_name(const StimulusSpec& spec);

struct ManifestEntry {
    std::string file;
    StimulusSpec spec;
    GroundTruth truth;
    std::string generator_version;
    std::string layout_hash;
};

std::string manifest_json(const std::vector<ManifestEntry>& entries);

/// Parses manifest.json back; throws ConfigError on malformed input.
std::vector<ManifestEntry> parse_manifest(const std::string& text);

struct GenerateOptions {
    LayoutConfig layout{};
    svg::StyleConfig style{};
    bool overwrite = false;
    unsigned threads = 0;  // 0 = hardware concurrency
};

/// Renders every spec into out_dir plus manifest.json. All SVGs are first
/// written to a staging directory; on any failure the staging directory is
/// removed and nothing in out_dir changes. Without overwrite, an existing
/// target file aborts the batch before anything is written.
std::vector<ManifestEntry> generate_factorial(const std::filesystem::path& out_dir,
                                              const std::vector<StimulusSpec>& specs,
                                              const GenerateOptions& options = {});

}  // namespace croissant
