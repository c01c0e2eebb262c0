#include "croissant/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "croissant/parallel.hpp"

namespace croissant {

std::string chart_label(ChartKind chart) {
    if (chart.vis == VisKind::Pdf) return "pdf";
    return fmt::format("{}-{}", to_string(chart.vis), chart.quantiles);
}

std::optional<ChartKind> parse_chart_label(std::string_view s) {
    if (s == "pdf") return ChartKind{VisKind::Pdf, 0};
    const auto dash = s.rfind('-');
    if (dash == std::string_view::npos) return std::nullopt;
    const auto vis = parse_vis(s.substr(0, dash));
    if (!vis || *vis == VisKind::Pdf) return std::nullopt;
    int q = 0;
    const auto digits = s.substr(dash + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), q);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || q < 1) return std::nullopt;
    return ChartKind{*vis, q};
}

void StrategyMixture::set(ChartKind chart, Weights weights) {
    for (auto& [c, w] : entries_) {
        if (c == chart) {
            w = std::move(weights);
            return;
        }
    }
    entries_.emplace_back(chart, std::move(weights));
}

bool StrategyMixture::has(ChartKind chart) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == chart; });
}

const StrategyMixture::Weights& StrategyMixture::weights(ChartKind chart) const {
    for (const auto& [c, w] : entries_)
        if (c == chart) return w;
    throw ConfigError(fmt::format("mixture has no weights for '{}'", chart_label(chart)));
}

void StrategyMixture::validate() const {
    for (const auto& [chart, weights] : entries_) {
        double sum = 0.0;
        for (const auto& [s, w] : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw ConfigError(fmt::format("mixture {}: weight for '{}' must be >= 0, got {}", chart_label(chart),
                                              to_string(s), w));
            if (w > 0.0 && !afforded(s, chart.vis))
                throw ConfigError(fmt::format("mixture {}: strategy '{}' is not afforded by this chart",
                                              chart_label(chart), to_string(s)));
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ConfigError(fmt::format("mixture {}: weights sum to {}, expected 1", chart_label(chart), sum));
    }
}

StrategyMixture StrategyMixture::defaults() {
    StrategyMixture m;
    m.set({VisKind::Pdf, 0}, {{Strategy::HeightAtMean, 0.45},
                              {Strategy::AreaLeftOfThreshold, 0.35},
                              {Strategy::SpreadComparison, 0.20}});
    m.set({VisKind::Qdp, 20}, {{Strategy::DotCounting, 0.68},
                               {Strategy::DirectlyOverTick, 0.16},
                               {Strategy::SpreadComparison, 0.16}});
    m.set({VisKind::Croissant, 10}, {{Strategy::DotCounting, 0.23}, {Strategy::InterEdgeInterpolation, 0.77}});
    m.set({VisKind::Croissant, 20}, {{Strategy::DotCounting, 0.33}, {Strategy::InterEdgeInterpolation, 0.67}});
    return m;
}

StrategyMixture StrategyMixture::from_keys(const std::map<std::string, std::string>& kv, StrategyMixture base) {
    constexpr std::string_view prefix = "mixture.";
    std::vector<std::pair<ChartKind, Weights>> replaced;
    for (const auto& [key, value] : kv) {
        if (!key.starts_with(prefix)) continue;
        const std::string_view rest = std::string_view(key).substr(prefix.size());
        const auto dot = rest.find('.');
        if (dot == std::string_view::npos) throw ConfigError(fmt::format("mixture key '{}' needs chart.strategy", key));
        const auto chart = parse_chart_label(rest.substr(0, dot));
        const auto strategy = parse_strategy(rest.substr(dot + 1));
        if (!chart) throw ConfigError(fmt::format("mixture key '{}': unknown chart", key));
        if (!strategy) throw ConfigError(fmt::format("mixture key '{}': unknown strategy", key));
        double w = 0.0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), w);
        if (ec != std::errc{} || ptr != value.data() + value.size())
            throw ConfigError(fmt::format("mixture key '{}': '{}' is not a number", key, value));

        auto it = std::find_if(replaced.begin(), replaced.end(), [&](const auto& e) { return e.first == *chart; });
        if (it == replaced.end()) {
            replaced.emplace_back(*chart, Weights{});
            it = replaced.end() - 1;
        }
        it->second.emplace_back(*strategy, w);
    }
    for (auto& [chart, weights] : replaced) base.set(chart, std::move(weights));
    base.validate();
    return base;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

namespace {

struct Cell {
    ChartKind chart;
    Scaling scaling;
    std::vector<std::size_t> stimuli;  // indices into the spec list
};

std::vector<Cell> between_cells(const std::vector<StimulusSpec>& specs) {
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const ChartKind chart{specs[i].vis, specs[i].quantiles};
        auto it = std::find_if(cells.begin(), cells.end(),
                               [&](const Cell& c) { return c.chart == chart && c.scaling == specs[i].scaling; });
        if (it == cells.end()) {
            cells.push_back({chart, specs[i].scaling, {}});
            it = cells.end() - 1;
        }
        it->stimuli.push_back(i);
    }
    return cells;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// verdicts[spec][strategy]; empty where not afforded.
std::vector<std::vector<std::optional<OracleVerdict>>> verdict_table(const std::vector<StimulusSpec>& specs,
                                                                     const SimulationConfig& config) {
    std::vector<std::vector<std::optional<OracleVerdict>>> table(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const Scene scene = build_scene(specs[i], config.layout);
        table[i].resize(kAllStrategies.size());
        for (std::size_t s = 0; s < kAllStrategies.size(); ++s)
            if (afforded(kAllStrategies[s], specs[i].vis)) table[i][s] = evaluate(kAllStrategies[s], scene, config.oracle);
    }
    return table;
}

std::size_t strategy_index(Strategy s) {
    return static_cast<std::size_t>(std::find(kAllStrategies.begin(), kAllStrategies.end(), s) - kAllStrategies.begin());
}

void check_config(const SimulationConfig& config, const std::vector<StimulusSpec>& specs) {
    if (config.n_per_cell < 1) throw ConfigError(fmt::format("n_per_cell must be >= 1, got {}", config.n_per_cell));
    if (!(config.lapse_rate >= 0.0 && config.lapse_rate <= 1.0))
        throw ConfigError(fmt::format("lapse rate must lie in [0, 1], got {}", config.lapse_rate));
    config.mixture.validate();
    for (const auto& spec : specs) (void)config.mixture.weights({spec.vis, spec.quantiles});
}

}  // namespace

double expected_accuracy(const StimulusSpec& spec, const SimulationConfig& config) {
    const Scene scene = build_scene(spec, config.layout);
    double read = 0.0;
    for (const auto& [s, w] : config.mixture.weights({spec.vis, spec.quantiles}))
        if (w > 0.0 && evaluate(s, scene, config.oracle).correct) read += w;
    // A guess picks one of three options, exactly one of which is right.
    return (1.0 - config.lapse_rate) * read + config.lapse_rate / 3.0;
}

std::vector<TrialRecord> simulate(const SimulationConfig& config) {
    const auto specs = factorial_specs(config.design);
    check_config(config, specs);
    const auto cells = between_cells(specs);
    const auto table = verdict_table(specs, config);

    std::vector<Answer> truths;
    truths.reserve(specs.size());
    for (const auto& s : specs) truths.push_back(ground_truth(s.task()).answer);

    const std::size_t n = static_cast<std::size_t>(config.n_per_cell);
    std::vector<std::size_t> offsets;
    std::size_t total = 0;
    for (const auto& c : cells) {
        offsets.push_back(total);
        total += n * c.stimuli.size();
    }
    std::vector<TrialRecord> records(total);

    parallel_for(
        cells.size() * n,
        [&](std::size_t job) {
            const std::size_t ci = job / n;
            const std::size_t p = job % n;
            const Cell& cell = cells[ci];
            const auto& weights = config.mixture.weights(cell.chart);
            std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(job)));
            const int pid = static_cast<int>(job) + 1;

            for (std::size_t k = 0; k < cell.stimuli.size(); ++k) {
                const std::size_t si = cell.stimuli[k];
                TrialRecord rec{pid, specs[si], std::nullopt, Answer::Neither, false};
                if (uniform01(rng) < config.lapse_rate) {
                    const int pick = std::min(2, static_cast<int>(uniform01(rng) * 3.0));
                    rec.choice = pick == 0 ? Answer::Top : pick == 1 ? Answer::Bottom : Answer::Neither;
                } else {
                    const double u = uniform01(rng);
                    double cum = 0.0;
                    Strategy chosen = weights.back().first;
                    for (const auto& [s, w] : weights) {
                        cum += w;
                        if (u < cum) {
                            chosen = s;
                            break;
                        }
                    }
                    rec.strategy = chosen;
                    rec.choice = table[si][strategy_index(chosen)]->choice;
                }
                rec.correct = rec.choice == truths[si];
                records[offsets[ci] + p * cell.stimuli.size() + k] = rec;
            }
        },
        config.threads);
    return records;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
    std::string out = "participantId,vis,scaling,sdPair,position,strategy,choice,correct\n";
    for (const auto& r : records) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", r.participant_id, r.spec.vis_label(), to_string(r.spec.scaling),
                           r.spec.sd_pair_label(), to_string(r.spec.position),
                           r.strategy ? to_string(*r.strategy) : "guess", to_string(r.choice), r.correct ? 1 : 0);
    }
    return out;
}

std::vector<TrialRecord> parse_trials_csv(const std::string& text, const FactorialConfig& design) {
    std::vector<TrialRecord> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw ConfigError(fmt::format("trials csv line {}: {}", line_no, why));
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "participantId,vis,scaling,sdPair,position,strategy,choice,correct") fail("unexpected header");
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
        if (f.size() != 8) fail(fmt::format("expected 8 fields, got {}", f.size()));

        TrialRecord r{};
        try {
            r.participant_id = std::stoi(f[0]);
        } catch (const std::exception&) {
            fail("bad participantId");
        }
        const auto chart = parse_chart_label(f[1]);
        const auto scaling = parse_scaling(f[2]);
        const auto pos = parse_position(f[4]);
        if (!chart || !scaling || !pos) fail("unknown factor level");
        const auto v = f[3].find('v');
        if (v == std::string::npos) fail("bad sdPair");
        double narrow = 0.0;
        double wide = 0.0;
        try {
            narrow = std::stod(f[3].substr(0, v));
            wide = std::stod(f[3].substr(v + 1));
        } catch (const std::exception&) {
            fail("bad sdPair");
        }
        r.spec = StimulusSpec{chart->vis, chart->quantiles, *scaling, narrow, wide, *pos, design.mu,
                              design.mu + design.threshold_offset};
        if (f[5] != "guess") {
            r.strategy = parse_strategy(f[5]);
            if (!r.strategy) fail("unknown strategy");
        }
        if (f[6] == "top") r.choice = Answer::Top;
        else if (f[6] == "bottom") r.choice = Answer::Bottom;
        else if (f[6] == "neither") r.choice = Answer::Neither;
        else fail("unknown choice");
        if (f[7] != "0" && f[7] != "1") fail("correct must be 0 or 1");
        r.correct = f[7] == "1";
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace croissant
