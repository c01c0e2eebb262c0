#pragma once

// Fixed-effects logistic regression of trial correctness on the design
// factors, fit by Newton-Raphson on the Bernoulli log-likelihood.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "croissant/simulate.hpp"

namespace croissant {

enum class Factor { Vis, Scaling, SdPair, Position };

const char* to_string(Factor f) noexcept;

/// A main effect (one factor) or an interaction (several). No factors means
/// the intercept.
struct Term {
    std::vector<Factor> factors;
};

/// Reference level per factor, in the labels used by the trial CSV
/// ("pdf", "equal-height", "2v5", "narrow-top").
struct Referents {
    std::string vis = "pdf";
    std::string scaling = "equal-height";
    std::string sd_pair = "2v5";
    std::string position = "narrow-top";
};

struct Formula {
    std::vector<Term> terms;
    Referents referents{};

    /// intercept + vis + scaling + vis:scaling + sd + vis:sd + position
    static Formula standard();
    /// Parses "vis + scaling + vis:scaling + sd + position" (intercept implied).
    static Formula parse(std::string_view text, Referents referents = {});
};

struct Design {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::vector<std::string> names;
};

/// Treatment-coded design matrix. Non-referent levels are sorted by label;
/// columns are named like "vis[qdp-20]:scaling[equal-area]". Throws
/// ConfigError when a referent is absent from the data or a column has no
/// supporting rows.
Design build_design(std::span<const TrialRecord> records, const Formula& formula);

struct Coefficient {
    std::string term;
    double estimate;
    double std_error;
};

struct LogisticFit {
    std::vector<Coefficient> coefficients;
    bool converged = false;
    bool separation = false;
    int iterations = 0;
    double log_likelihood = 0.0;
    double gradient_max_norm = 0.0;
    std::string diagnostic;

    /// Throws std::out_of_range for an unknown term.
    const Coefficient& at(std::string_view term) const;
    Eigen::VectorXd estimates() const;
};

struct FitOptions {
    int max_iterations = 100;
    double loglik_tolerance = 1e-10;
    double gradient_tolerance = 1e-8;
    double separation_bound = 15.0;
};

/// Newton-Raphson with step halving. Separation (a coefficient beyond
/// separation_bound while the likelihood is still rising) and singular
/// information matrices produce a non-converged fit with a diagnostic, never
/// an exception.
LogisticFit fit_logistic(const Design& design, const FitOptions& options = {});
LogisticFit fit_logistic(std::span<const TrialRecord> records, const Formula& formula,
                         const FitOptions& options = {});

/// Bernoulli draws with p = logistic(x * beta); deterministic in seed.
Eigen::VectorXd sample_responses(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, std::uint64_t seed);

/// JSON report: converged, iterations, logLikelihood, gradientMaxNorm,
/// separation, diagnostic, referents, coefficients[{term, estimate, stderr}].
std::string fit_json(const LogisticFit& fit, const Referents& referents);

}  // namespace croissant
