#pragma once

// Reader strategies as deterministic procedures over Scene geometry. Each one
// reduces a panel to a single scalar; the panel with the clearly larger
// scalar is the strategy's answer.

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "croissant/normal.hpp"
#include "croissant/scene.hpp"

namespace croissant {

enum class Strategy {
    HeightAtMean,
    HeightAtThreshold,
    AreaLeftOfThreshold,
    SpreadComparison,
    SlopeComparison,
    DotCounting,
    InterEdgeInterpolation,
    DirectlyOverTick,
};

inline constexpr std::array<Strategy, 8> kAllStrategies{
    Strategy::HeightAtMean,     Strategy::HeightAtThreshold, Strategy::AreaLeftOfThreshold,
    Strategy::SpreadComparison, Strategy::SlopeComparison,   Strategy::DotCounting,
    Strategy::InterEdgeInterpolation, Strategy::DirectlyOverTick,
};

/// CLI / CSV name: "height-at-mean", "counting", "inter-edge", ...
const char* to_string(Strategy s) noexcept;
std::optional<Strategy> parse_strategy(std::string_view s);

/// The strategy has nothing to read on this chart kind (e.g. counting dots on a pdf).
class NotAfforded : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

bool afforded(Strategy s, VisKind vis) noexcept;

struct OracleOptions {
    double tie_fraction = 0.01;          // relative difference below which marks look equal
    bool exact_mass_interpolation = false;  // inter-edge reads probability instead of width
};

struct OracleVerdict {
    Answer choice;
    double evidence_top;
    double evidence_bottom;
    bool correct;
};

/// Tie rule: Neither when |a - b| < tie_fraction · max(|a|, |b|) (or both zero).
Answer decide(double evidence_top, double evidence_bottom, double tie_fraction) noexcept;

/// The scalar one panel yields under a strategy. Throws NotAfforded.
double panel_evidence(Strategy s, const Scene& scene, const Panel& panel, const OracleOptions& opts = {});

OracleVerdict evaluate(Strategy s, const Scene& scene, const ComparisonTask& task, const OracleOptions& opts = {});

/// Convenience: task taken from scene.spec.
OracleVerdict evaluate(Strategy s, const Scene& scene, const OracleOptions& opts = {});

struct MatrixRow {
    Strategy strategy;
    StimulusSpec spec;
    std::optional<OracleVerdict> verdict;  // empty when not afforded
};

/// Every strategy against every spec, strategy-major. NotAfforded pairings
/// become rows with an empty verdict.
std::vector<MatrixRow> correctness_matrix(std::span<const Strategy> strategies, std::span<const StimulusSpec> specs,
                                          const OracleOptions& opts = {}, const LayoutConfig& layout = {});

/// Header: strategy,vis,scaling,sdPair,position,verdict,correct,evidenceTop,evidenceBottom
std::string matrix_csv(std::span<const MatrixRow> rows);

}  // namespace croissant
