#include "croissant/normal.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace croissant {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

double standard_pdf(double z) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double standard_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Acklam's piecewise rational approximation, relative error ~1.15e-9.
double acklam(double p) noexcept {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    auto tail = [&](double q) {
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    };
    if (p < p_low) return tail(std::sqrt(-2.0 * std::log(p)));
    if (p > 1.0 - p_low) return -tail(std::sqrt(-2.0 * std::log1p(-p)));

    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

Normal::Normal(double mu, double sigma) : mu_(mu), sigma_(sigma) {
    if (!std::isfinite(mu)) throw std::invalid_argument(fmt::format("Normal: mean must be finite, got {}", mu));
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument(fmt::format("Normal: sigma must be finite and > 0, got {}", sigma));
}

double pdf(const Normal& d, double x) noexcept {
    return standard_pdf((x - d.mu()) / d.sigma()) / d.sigma();
}

double cdf(const Normal& d, double x) noexcept { return standard_cdf((x - d.mu()) / d.sigma()); }

double standard_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error(fmt::format("inverse_cdf: probability must lie in (0, 1), got {}", p));
    if (p == 0.5) return 0.0;

    double z = acklam(p);
    for (int step = 0; step < 3; ++step) {
        const double err = standard_cdf(z) - p;
        if (err == 0.0) break;
        z -= err / standard_pdf(z);
    }
    return z;
}

double inverse_cdf(const Normal& d, double p) { return d.mu() + d.sigma() * standard_quantile(p); }

std::vector<double> quantile_boundaries(const Normal& d, int n) {
    if (n < 2) throw std::domain_error(fmt::format("quantile_boundaries: need n >= 2, got {}", n));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        // Exact median for even n keeps the middle boundary on the mean.
        out.push_back(2 * k == n ? d.mu() : inverse_cdf(d, static_cast<double>(k) / n));
    }
    return out;
}

std::vector<double> quantile_dots(const Normal& d, int n) {
    if (n < 1) throw std::domain_error(fmt::format("quantile_dots: need n >= 1, got {}", n));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) out.push_back(inverse_cdf(d, (k - 0.5) / n));
    return out;
}

const char* to_string(Answer a) noexcept {
    switch (a) {
        case Answer::Top: return "top";
        case Answer::Bottom: return "bottom";
        case Answer::Neither: return "neither";
    }
    return "?";
}

ComparisonTask::ComparisonTask(Normal top, Normal bottom, double threshold)
    : top_(top), bottom_(bottom), threshold_(threshold) {
    if (top.mu() != bottom.mu())
        throw std::invalid_argument(
            fmt::format("ComparisonTask: distributions must share a mean ({} vs {})", top.mu(), bottom.mu()));
    if (!(threshold > top.mu()))
        throw std::invalid_argument(
            fmt::format("ComparisonTask: threshold {} must exceed the mean {}", threshold, top.mu()));
}

GroundTruth ground_truth(const ComparisonTask& task) {
    const double p_top = cdf(task.top(), task.threshold());
    const double p_bottom = cdf(task.bottom(), task.threshold());

    Answer answer = Answer::Neither;
    if (std::abs(p_top - p_bottom) >= 1e-12) answer = p_top > p_bottom ? Answer::Top : Answer::Bottom;

    // Shared mean + threshold above it: the lower-sigma distribution must win.
    const double s_top = task.top().sigma();
    const double s_bottom = task.bottom().sigma();
    const Answer by_sigma = s_top < s_bottom ? Answer::Top : s_bottom < s_top ? Answer::Bottom : Answer::Neither;
    if (answer != Answer::Neither && answer != by_sigma)
        throw std::logic_error("ground_truth: cumulative comparison disagrees with the lower-sigma rule");

    return {answer, p_top, p_bottom};
}

}  // namespace croissant
