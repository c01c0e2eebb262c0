#include "croissant/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "croissant/factorial.hpp"
#include "croissant/logistic.hpp"
#include "croissant/oracle.hpp"
#include "croissant/scene.hpp"
#include "croissant/simulate.hpp"
#include "croissant/svg.hpp"

namespace croissant::cli {

namespace {

namespace fs = std::filesystem;

/// Usage-level failure: bad flag values or combinations.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Settings {
    LayoutConfig layout;
    svg::StyleConfig style;
    StrategyMixture mixture = StrategyMixture::defaults();
    FactorialConfig design;
    OracleOptions oracle;
};

double real_value(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used == it->second.size()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("config key '{}': '{}' is not a number", key, it->second));
}

Settings load_settings(const std::string& config_path) {
    Settings s;
    if (config_path.empty()) return s;
    const auto kv = parse_key_values(read_file(config_path));
    for (const auto& [key, value] : kv) {
        const bool known = key.starts_with("layout.") || key.starts_with("style.") || key.starts_with("mixture.") ||
                           key == "design.mu" || key == "design.threshold_offset" || key == "oracle.tie_fraction";
        if (!known) throw ConfigError(fmt::format("unknown config key '{}'", key));
    }
    s.layout = layout_from_keys(kv);
    s.style = svg::style_from_keys(kv);
    s.mixture = StrategyMixture::from_keys(kv);
    s.design.mu = real_value(kv, "design.mu", s.design.mu);
    s.design.threshold_offset = real_value(kv, "design.threshold_offset", s.design.threshold_offset);
    s.oracle.tie_fraction = real_value(kv, "oracle.tie_fraction", s.oracle.tie_fraction);
    if (!(s.design.threshold_offset > 0.0)) throw ConfigError("design.threshold_offset must be > 0");
    if (!(s.oracle.tie_fraction >= 0.0)) throw ConfigError("oracle.tie_fraction must be >= 0");
    return s;
}

void emit(const std::string& text, const std::string& path, bool overwrite, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        svg::write_text(text, path, overwrite);
}

std::vector<StimulusSpec> design_specs(const Settings& s, const std::string& vis_filter) {
    FactorialConfig design = s.design;
    if (!vis_filter.empty()) {
        design.only_vis = parse_vis(vis_filter);
        if (!design.only_vis) throw UsageError(fmt::format("unknown --vis '{}'", vis_filter));
    }
    return factorial_specs(design);
}

std::string spec_json_line(const StimulusSpec& spec, const std::string& file) {
    nlohmann::ordered_json j;
    j["file"] = file;
    j["vis"] = to_string(spec.vis);
    j["quantiles"] = spec.quantiles;
    j["scaling"] = to_string(spec.scaling);
    j["sigmaNarrow"] = spec.sigma_narrow;
    j["sigmaWide"] = spec.sigma_wide;
    j["position"] = to_string(spec.position);
    j["mu"] = spec.mu;
    j["threshold"] = spec.threshold;
    j["groundTruth"] = to_string(ground_truth(spec.task()).answer);
    return j.dump();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Normal-distribution chart stimuli, reader-strategy oracles and simulated experiments", "croissant"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key = value config file (layout.*, style.*, mixture.*, ...)")
        ->check(CLI::ExistingFile);

    // generate
    auto* gen = app.add_subcommand("generate", "Write the full factorial stimulus set and manifest.json");
    std::string gen_out;
    std::string gen_vis;
    bool gen_force = false;
    unsigned gen_threads = 0;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--vis", gen_vis, "Only this chart family: pdf, qdp, croissant");
    gen->add_flag("--force", gen_force, "Replace existing files");
    gen->add_option("--threads", gen_threads, "Worker threads (0 = all cores)");

    // chart
    auto* chart = app.add_subcommand("chart", "Render a single stimulus");
    std::string ch_vis = "pdf";
    std::optional<int> ch_quantiles;
    std::string ch_scaling = "equal-area";
    std::string ch_sigmas = "2,5";
    std::string ch_position = "narrow-top";
    double ch_mu = 50.0;
    std::optional<double> ch_threshold;
    std::string ch_out;
    bool ch_force = false;
    chart->add_option("--vis", ch_vis, "pdf, qdp or croissant");
    chart->add_option("--quantiles", ch_quantiles, "Quantile count (qdp, croissant only)");
    chart->add_option("--scaling", ch_scaling, "equal-area or equal-height");
    chart->add_option("--sigmas", ch_sigmas, "narrow,wide standard deviations");
    chart->add_option("--position", ch_position, "narrow-top or narrow-bottom");
    chart->add_option("--mu", ch_mu, "Shared mean");
    chart->add_option("--threshold", ch_threshold, "Threshold (default mean + 4)");
    chart->add_option("--out", ch_out, "Output SVG path")->required();
    chart->add_flag("--force", ch_force, "Replace an existing file");

    // matrix
    auto* matrix = app.add_subcommand("matrix", "Strategy x stimulus correctness matrix as CSV");
    std::string mx_strategies;
    std::string mx_out;
    std::string mx_vis;
    std::optional<double> mx_epsilon;
    bool mx_exact = false;
    bool mx_force = false;
    matrix->add_option("--strategies", mx_strategies, "Comma-separated strategy names (default: all)");
    matrix->add_option("--vis", mx_vis, "Only this chart family");
    matrix->add_option("--epsilon", mx_epsilon, "Perceptual tie fraction (default 0.01)");
    matrix->add_flag("--exact-mass", mx_exact, "Inter-edge interpolation reads probability, not width");
    matrix->add_option("--out", mx_out, "CSV path (default stdout)");
    matrix->add_flag("--force", mx_force, "Replace an existing file");

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate participants and write one CSV row per trial");
    int sim_n = 101;
    std::uint64_t sim_seed = SimulationConfig{}.seed;
    double sim_lapse = SimulationConfig{}.lapse_rate;
    std::string sim_out;
    unsigned sim_threads = 0;
    bool sim_force = false;
    sim->add_option("--n-per-cell", sim_n, "Participants per chart x scaling cell")->check(CLI::PositiveNumber);
    sim->add_option("--seed", sim_seed, "Random seed");
    sim->add_option("--lapse", sim_lapse, "Probability of a uniform guess per trial")->check(CLI::Range(0.0, 1.0));
    sim->add_option("--out", sim_out, "CSV path (default stdout)");
    sim->add_option("--threads", sim_threads, "Worker threads (0 = all cores)");
    sim->add_flag("--force", sim_force, "Replace an existing file");

    // fit
    auto* fit = app.add_subcommand("fit", "Fixed-effects logistic regression on a trial CSV");
    std::string fit_trials;
    std::string fit_formula;
    Referents refs;
    std::string fit_out;
    bool fit_force = false;
    fit->add_option("--trials", fit_trials, "Trial CSV from `simulate`")->required()->check(CLI::ExistingFile);
    fit->add_option("--formula", fit_formula, "Terms, e.g. \"vis + scaling + vis:scaling + sd + vis:sd + position\"");
    fit->add_option("--referent-vis", refs.vis, "Reference chart (default pdf)");
    fit->add_option("--referent-scaling", refs.scaling, "Reference scaling (default equal-height)");
    fit->add_option("--referent-sd", refs.sd_pair, "Reference SD pair (default 2v5)");
    fit->add_option("--referent-position", refs.position, "Reference position (default narrow-top)");
    fit->add_option("--out", fit_out, "JSON path (default stdout)");
    fit->add_flag("--force", fit_force, "Replace an existing file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Settings settings = load_settings(config_path);

        if (*gen) {
            GenerateOptions opts{settings.layout, settings.style, gen_force, gen_threads};
            const auto entries = generate_factorial(gen_out, design_specs(settings, gen_vis), opts);
            out << fmt::format("wrote {} stimuli and manifest.json to {}\n", entries.size(), gen_out);
        } else if (*chart) {
            StimulusSpec spec;
            const auto vis = parse_vis(ch_vis);
            const auto scaling = parse_scaling(ch_scaling);
            const auto pos = parse_position(ch_position);
            if (!vis) throw UsageError(fmt::format("unknown --vis '{}'", ch_vis));
            if (!scaling) throw UsageError(fmt::format("unknown --scaling '{}'", ch_scaling));
            if (!pos) throw UsageError(fmt::format("unknown --position '{}'", ch_position));
            spec.vis = *vis;
            spec.scaling = *scaling;
            spec.position = *pos;
            if (*vis == VisKind::Pdf) {
                if (ch_quantiles) throw UsageError("--quantiles is not valid for --vis pdf");
                spec.quantiles = 0;
            } else {
                spec.quantiles = ch_quantiles.value_or(*vis == VisKind::Qdp ? 20 : 10);
            }
            const auto comma = ch_sigmas.find(',');
            if (comma == std::string::npos) throw UsageError("--sigmas expects narrow,wide");
            try {
                spec.sigma_narrow = std::stod(ch_sigmas.substr(0, comma));
                spec.sigma_wide = std::stod(ch_sigmas.substr(comma + 1));
            } catch (const std::exception&) {
                throw UsageError(fmt::format("--sigmas '{}' is not two numbers", ch_sigmas));
            }
            spec.mu = ch_mu;
            spec.threshold = ch_threshold.value_or(ch_mu + settings.design.threshold_offset);
            try {
                spec.validate();
            } catch (const ConfigError& e) {
                throw UsageError(e.what());
            }
            const Scene scene = build_scene(spec, settings.layout);
            for (const auto& w : scene.warnings) err << "warning: " << w << '\n';
            svg::write_svg(svg::render(scene, settings.style), ch_out, ch_force);
            out << spec_json_line(spec, ch_out) << '\n';
        } else if (*matrix) {
            std::vector<Strategy> strategies;
            if (mx_strategies.empty()) {
                strategies.assign(kAllStrategies.begin(), kAllStrategies.end());
            } else {
                std::stringstream ss(mx_strategies);
                for (std::string name; std::getline(ss, name, ',');) {
                    const auto s = parse_strategy(name);
                    if (!s) throw UsageError(fmt::format("unknown strategy '{}'", name));
                    strategies.push_back(*s);
                }
            }
            OracleOptions opts = settings.oracle;
            if (mx_epsilon) opts.tie_fraction = *mx_epsilon;
            opts.exact_mass_interpolation = mx_exact;
            const auto specs = design_specs(settings, mx_vis);
            const auto rows = correctness_matrix(strategies, specs, opts, settings.layout);
            emit(matrix_csv(rows), mx_out, mx_force, out);
        } else if (*sim) {
            SimulationConfig cfg;
            cfg.mixture = settings.mixture;
            cfg.n_per_cell = sim_n;
            cfg.seed = sim_seed;
            cfg.lapse_rate = sim_lapse;
            cfg.design = settings.design;
            cfg.oracle = settings.oracle;
            cfg.layout = settings.layout;
            cfg.threads = sim_threads;
            emit(trials_csv(simulate(cfg)), sim_out, sim_force, out);
        } else if (*fit) {
            const auto records = parse_trials_csv(read_file(fit_trials), settings.design);
            const Formula formula = fit_formula.empty()
                                        ? Formula{Formula::standard().terms, refs}
                                        : Formula::parse(fit_formula, refs);
            const LogisticFit result = fit_logistic(records, formula);
            if (!result.converged) err << "warning: " << result.diagnostic << '\n';
            emit(fit_json(result, refs), fit_out, fit_force, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace croissant::cli
