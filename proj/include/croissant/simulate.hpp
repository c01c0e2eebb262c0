#pragma once

// Synthetic participants answering the factorial task through the strategy
// oracles.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "croissant/factorial.hpp"
#include "croissant/oracle.hpp"

namespace croissant {

/// Per chart kind, the probability of reaching for each strategy.
class StrategyMixture {
public:
    using Weights = std::vector<std::pair<Strategy, double>>;

    void set(ChartKind chart, Weights weights);
    /// Throws ConfigError when the chart has no weights.
    const Weights& weights(ChartKind chart) const;
    bool has(ChartKind chart) const;

    /// Non-negative weights summing to 1 (within 1e-9) over afforded
    /// strategies only. Throws ConfigError.
    void validate() const;

    /// Counting shares of 0.68 (qdp-20), 0.33 (croissant-20) and 0.23
    /// (croissant-10); the remaining mass is a reconstruction:
    /// pdf = height-at-mean 0.45, area 0.35, spread 0.20;
    /// qdp-20 = directly-over-tick 0.16, spread 0.16;
    /// croissants = inter-edge for the rest.
    static StrategyMixture defaults();

    /// Overrides from "mixture.<chart>.<strategy> = weight" keys; a chart
    /// mentioned in kv has its weights replaced wholesale.
    static StrategyMixture from_keys(const std::map<std::string, std::string>& kv, StrategyMixture base = defaults());

private:
    std::vector<std::pair<ChartKind, Weights>> entries_;
};

/// "pdf", "qdp-20", "croissant-10" <-> ChartKind
std::string chart_label(ChartKind chart);
std::optional<ChartKind> parse_chart_label(std::string_view s);

struct SimulationConfig {
    StrategyMixture mixture = StrategyMixture::defaults();
    int n_per_cell = 101;
    std::uint64_t seed = 20251019;
    /// Probability that a trial is a uniform guess among the three options
    /// instead of a strategy read.
    double lapse_rate = 0.1;
    FactorialConfig design{};
    OracleOptions oracle{};
    LayoutConfig layout{};
    unsigned threads = 0;
};

struct TrialRecord {
    int participant_id;
    StimulusSpec spec;
    std::optional<Strategy> strategy;  // empty for a lapse guess
    Answer choice;
    bool correct;
};

/// Every between-subject cell (chart kind x scaling) gets n_per_cell
/// participants, each answering every SD-pair x position stimulus once.
/// Records come out ordered by participant, then stimulus. Fully determined
/// by (config, seed).
std::vector<TrialRecord> simulate(const SimulationConfig& config);

/// Probability of a correct answer for one stimulus under the config:
/// (1 - lapse) * sum_s w_s * correct_s + lapse * P(guess correct).
double expected_accuracy(const StimulusSpec& spec, const SimulationConfig& config);

/// Header: participantId,vis,scaling,sdPair,position,strategy,choice,correct
std::string trials_csv(const std::vector<TrialRecord>& records);

/// Inverse of trials_csv; mu and threshold come from the design config.
std::vector<TrialRecord> parse_trials_csv(const std::string& text, const FactorialConfig& design = {});

/// SplitMix64 step, used to derive independent per-participant seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace croissant
