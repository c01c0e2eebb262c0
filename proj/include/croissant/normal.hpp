#pragma once

// Normal-distribution arithmetic used by every chart, oracle and simulation.

#include <vector>

namespace croissant {

/// A normal distribution in data units. sigma is always strictly positive.
class Normal {
public:
    /// Throws std::invalid_argument when sigma is not a finite positive number
    /// or mu is not finite.
    Normal(double mu, double sigma);

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }

    friend bool operator==(const Normal&, const Normal&) = default;

private:
    double mu_;
    double sigma_;
};

double pdf(const Normal& d, double x) noexcept;
double cdf(const Normal& d, double x) noexcept;

/// Quantile function. Requires 0 < p < 1; otherwise throws std::domain_error
/// naming p. A rational starting point is polished by at most three Newton
/// steps, giving |cdf(d, x) - p| <= 1e-9.
double inverse_cdf(const Normal& d, double p);

/// Standard-normal quantile (mu = 0, sigma = 1).
double standard_quantile(double p);

/// The n-1 interior boundaries splitting d into n equal-probability slices.
/// Throws std::domain_error when n < 2.
std::vector<double> quantile_boundaries(const Normal& d, int n);

/// Mid-mass positions (k - 0.5)/n for k = 1..n, as used by quantile dot plots.
/// Throws std::domain_error when n < 1.
std::vector<double> quantile_dots(const Normal& d, int n);

enum class Answer { Top, Bottom, Neither };

const char* to_string(Answer a) noexcept;

/// "Which of two same-mean distributions is more likely to be at or below
/// the threshold?"  Construction enforces a shared mean and threshold > mean.
class ComparisonTask {
public:
    ComparisonTask(Normal top, Normal bottom, double threshold);

    const Normal& top() const noexcept { return top_; }
    const Normal& bottom() const noexcept { return bottom_; }
    double threshold() const noexcept { return threshold_; }

private:
    Normal top_;
    Normal bottom_;
    double threshold_;
};

struct GroundTruth {
    Answer answer;
    double p_top;
    double p_bottom;
};

/// Exact answer from the two cumulative probabilities. Ties closer than 1e-12
/// resolve to Neither.
GroundTruth ground_truth(const ComparisonTask& task);

}  // namespace croissant
