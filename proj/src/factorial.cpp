#include "croissant/factorial.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include "croissant/parallel.hpp"
#include "croissant/scene.hpp"

namespace croissant {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::vector<ChartKind> tested_chart_kinds() {
    return {{VisKind::Pdf, 0}, {VisKind::Qdp, 20}, {VisKind::Croissant, 10}, {VisKind::Croissant, 20}};
}

std::vector<StimulusSpec> factorial_specs(const FactorialConfig& config) {
    std::vector<StimulusSpec> out;
    for (const auto& chart : config.charts) {
        if (config.only_vis && chart.vis != *config.only_vis) continue;
        for (Scaling scaling : {Scaling::EqualArea, Scaling::EqualHeight}) {
            for (const auto& [narrow, wide] : config.sd_pairs) {
                for (Position pos : {Position::NarrowOnTop, Position::NarrowOnBottom}) {
                    StimulusSpec spec{chart.vis, chart.quantiles, scaling, narrow, wide, pos, config.mu,
                                      config.mu + config.threshold_offset};
                    spec.validate();
                    out.push_back(spec);
                }
            }
        }
    }
    return out;
}

std::string stimulus_file_name(const StimulusSpec& spec) {
    return fmt::format("{}-{}-{}-{}-{}.svg", to_string(spec.vis), spec.quantiles, to_string(spec.scaling),
                       spec.sd_pair_label(), to_string(spec.position));
}

std::string manifest_json(const std::vector<ManifestEntry>& entries) {
    ojson arr = ojson::array();
    for (const auto& e : entries) {
        const auto& s = e.spec;
        ojson j;
        j["file"] = e.file;
        j["vis"] = to_string(s.vis);
        j["quantiles"] = s.quantiles;
        j["scaling"] = to_string(s.scaling);
        j["sigmaNarrow"] = s.sigma_narrow;
        j["sigmaWide"] = s.sigma_wide;
        j["position"] = to_string(s.position);
        j["narrowPanel"] = s.position == Position::NarrowOnTop ? "top" : "bottom";
        // "narrow" always means the lower-SD distribution.
        j["narrowMeans"] = "lower-sd";
        j["mu"] = s.mu;
        j["threshold"] = s.threshold;
        j["groundTruth"] = to_string(e.truth.answer);
        j["pTop"] = e.truth.p_top;
        j["pBottom"] = e.truth.p_bottom;
        j["generatorVersion"] = e.generator_version;
        j["layoutHash"] = e.layout_hash;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    std::vector<ManifestEntry> out;
    try {
        const auto arr = nlohmann::json::parse(text);
        if (!arr.is_array()) throw ConfigError("manifest: top level must be an array");
        for (const auto& j : arr) {
            ManifestEntry e;
            e.file = j.at("file").get<std::string>();
            auto vis = parse_vis(j.at("vis").get<std::string>());
            auto scaling = parse_scaling(j.at("scaling").get<std::string>());
            auto pos = parse_position(j.at("position").get<std::string>());
            if (!vis || !scaling || !pos) throw ConfigError(fmt::format("manifest: bad enum in entry '{}'", e.file));
            e.spec = StimulusSpec{*vis,
                                  j.at("quantiles").get<int>(),
                                  *scaling,
                                  j.at("sigmaNarrow").get<double>(),
                                  j.at("sigmaWide").get<double>(),
                                  *pos,
                                  j.at("mu").get<double>(),
                                  j.at("threshold").get<double>()};
            const auto truth = j.at("groundTruth").get<std::string>();
            e.truth.answer = truth == "top" ? Answer::Top : truth == "bottom" ? Answer::Bottom : Answer::Neither;
            e.truth.p_top = j.at("pTop").get<double>();
            e.truth.p_bottom = j.at("pBottom").get<double>();
            e.generator_version = j.at("generatorVersion").get<std::string>();
            e.layout_hash = j.at("layoutHash").get<std::string>();
            out.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(fmt::format("manifest: {}", ex.what()));
    }
    return out;
}

std::vector<ManifestEntry> generate_factorial(const fs::path& out_dir, const std::vector<StimulusSpec>& specs,
                                              const GenerateOptions& options) {
    options.layout.validate();
    std::vector<ManifestEntry> entries;
    entries.reserve(specs.size());
    const std::string layout_hash = options.layout.hash();
    for (const auto& spec : specs) {
        spec.validate();
        entries.push_back({stimulus_file_name(spec), spec, ground_truth(spec.task()), kGeneratorVersion, layout_hash});
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw svg::WriteError(fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    const fs::path manifest_path = out_dir / "manifest.json";
    if (!options.overwrite) {
        if (fs::exists(manifest_path))
            throw svg::WriteError(fmt::format("refusing to overwrite existing file '{}'", manifest_path.string()));
        for (const auto& e : entries)
            if (fs::exists(out_dir / e.file))
                throw svg::WriteError(
                    fmt::format("refusing to overwrite existing file '{}'", (out_dir / e.file).string()));
    }

    const fs::path staging = out_dir / ".staging";
    fs::remove_all(staging, ec);
    fs::create_directory(staging, ec);
    if (ec) throw svg::WriteError(fmt::format("cannot create '{}': {}", staging.string(), ec.message()));

    try {
        parallel_for(
            entries.size(),
            [&](std::size_t i) {
                const Scene scene = build_scene(entries[i].spec, options.layout);
                svg::write_svg(svg::render(scene, options.style), staging / entries[i].file, false);
            },
            options.threads);
        svg::write_text(manifest_json(entries), staging / "manifest.json", false);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }

    for (const auto& e : entries) fs::rename(staging / e.file, out_dir / e.file);
    fs::rename(staging / "manifest.json", manifest_path);
    fs::remove_all(staging, ec);
    return entries;
}

}  // namespace croissant
