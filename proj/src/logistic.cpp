#include "croissant/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace croissant {

const char* to_string(Factor f) noexcept {
    switch (f) {
        case Factor::Vis: return "vis";
        case Factor::Scaling: return "scaling";
        case Factor::SdPair: return "sd";
        case Factor::Position: return "position";
    }
    return "?";
}

Formula Formula::standard() {
    return {{{},
             {{Factor::Vis}},
             {{Factor::Scaling}},
             {{Factor::Vis, Factor::Scaling}},
             {{Factor::SdPair}},
             {{Factor::Vis, Factor::SdPair}},
             {{Factor::Position}}},
            {}};
}

Formula Formula::parse(std::string_view text, Referents referents) {
    Formula f{{Term{}}, std::move(referents)};
    auto trim = [](std::string_view s) {
        const auto a = s.find_first_not_of(' ');
        if (a == std::string_view::npos) return std::string_view{};
        return s.substr(a, s.find_last_not_of(' ') - a + 1);
    };
    auto factor = [](std::string_view s) -> Factor {
        for (Factor f : {Factor::Vis, Factor::Scaling, Factor::SdPair, Factor::Position})
            if (s == to_string(f)) return f;
        throw ConfigError(fmt::format("formula: unknown factor '{}'", s));
    };
    while (!text.empty()) {
        const auto plus = text.find('+');
        const auto term_text = trim(text.substr(0, plus));
        text = plus == std::string_view::npos ? std::string_view{} : text.substr(plus + 1);
        if (term_text.empty()) throw ConfigError("formula: empty term");
        Term t;
        std::string_view rest = term_text;
        while (!rest.empty()) {
            const auto colon = rest.find(':');
            t.factors.push_back(factor(trim(rest.substr(0, colon))));
            rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
        }
        f.terms.push_back(std::move(t));
    }
    return f;
}

namespace {

std::string level_of(const TrialRecord& r, Factor f) {
    switch (f) {
        case Factor::Vis: return r.spec.vis_label();
        case Factor::Scaling: return to_string(r.spec.scaling);
        case Factor::SdPair: return r.spec.sd_pair_label();
        case Factor::Position: return to_string(r.spec.position);
    }
    return {};
}

const std::string& referent_of(const Referents& ref, Factor f) {
    switch (f) {
        case Factor::Vis: return ref.vis;
        case Factor::Scaling: return ref.scaling;
        case Factor::SdPair: return ref.sd_pair;
        case Factor::Position: return ref.position;
    }
    throw std::logic_error("unreachable");
}

double softplus(double eta) { return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta))); }

double log_likelihood(const Design& d, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = d.x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i) ll += d.y[i] * eta[i] - softplus(eta[i]);
    return ll;
}

Eigen::VectorXd probabilities(const Design& d, const Eigen::VectorXd& beta) {
    return (d.x * beta).unaryExpr([](double eta) { return 1.0 / (1.0 + std::exp(-eta)); });
}

}  // namespace

Design build_design(std::span<const TrialRecord> records, const Formula& formula) {
    if (records.empty()) throw ConfigError("fit: no records");

    std::map<Factor, std::vector<std::string>> levels;
    for (Factor f : {Factor::Vis, Factor::Scaling, Factor::SdPair, Factor::Position}) {
        std::set<std::string> seen;
        for (const auto& r : records) seen.insert(level_of(r, f));
        const auto& ref = referent_of(formula.referents, f);
        const bool used = std::any_of(formula.terms.begin(), formula.terms.end(), [&](const Term& t) {
            return std::find(t.factors.begin(), t.factors.end(), f) != t.factors.end();
        });
        if (used && !seen.contains(ref))
            throw ConfigError(fmt::format("fit: referent '{}' for {} does not occur in the data", ref, to_string(f)));
        seen.erase(ref);
        levels[f] = {seen.begin(), seen.end()};
    }

    // Each column = one combination of non-referent levels across the term's factors.
    struct Column {
        std::string name;
        std::vector<std::pair<Factor, std::string>> conditions;
    };
    std::vector<Column> columns;
    for (const auto& term : formula.terms) {
        std::vector<Column> partial{{"", {}}};
        for (Factor f : term.factors) {
            std::vector<Column> next;
            for (const auto& c : partial)
                for (const auto& lvl : levels[f]) {
                    Column n = c;
                    n.name += (n.name.empty() ? "" : ":") + fmt::format("{}[{}]", to_string(f), lvl);
                    n.conditions.emplace_back(f, lvl);
                    next.push_back(std::move(n));
                }
            partial = std::move(next);
        }
        for (auto& c : partial) {
            if (c.name.empty()) c.name = "(Intercept)";
            columns.push_back(std::move(c));
        }
    }

    Design d;
    const auto rows = static_cast<Eigen::Index>(records.size());
    d.x = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(columns.size()));
    d.y.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        d.y[i] = r.correct ? 1.0 : 0.0;
        for (std::size_t j = 0; j < columns.size(); ++j) {
            const bool on = std::all_of(columns[j].conditions.begin(), columns[j].conditions.end(),
                                        [&](const auto& cond) { return level_of(r, cond.first) == cond.second; });
            d.x(i, static_cast<Eigen::Index>(j)) = on ? 1.0 : 0.0;
        }
    }
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (d.x.col(static_cast<Eigen::Index>(j)).sum() == 0.0)
            throw ConfigError(fmt::format("fit: no records support column '{}'", columns[j].name));
        d.names.push_back(columns[j].name);
    }
    return d;
}

const Coefficient& LogisticFit::at(std::string_view term) const {
    for (const auto& c : coefficients)
        if (c.term == term) return c;
    throw std::out_of_range(fmt::format("no coefficient named '{}'", term));
}

Eigen::VectorXd LogisticFit::estimates() const {
    Eigen::VectorXd out(static_cast<Eigen::Index>(coefficients.size()));
    for (std::size_t i = 0; i < coefficients.size(); ++i) out[static_cast<Eigen::Index>(i)] = coefficients[i].estimate;
    return out;
}

LogisticFit fit_logistic(const Design& d, const FitOptions& options) {
    const Eigen::Index k = d.x.cols();
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(k);
    double ll = log_likelihood(d, beta);

    LogisticFit fit;
    auto gradient = [&](const Eigen::VectorXd& b) -> Eigen::VectorXd {
        return d.x.transpose() * (d.y - probabilities(d, b));
    };
    auto information = [&](const Eigen::VectorXd& b) -> Eigen::MatrixXd {
        const Eigen::VectorXd p = probabilities(d, b);
        const Eigen::VectorXd w = p.array() * (1.0 - p.array());
        return d.x.transpose() * (d.x.array().colwise() * w.array()).matrix();
    };

    for (int iter = 1; iter <= options.max_iterations; ++iter) {
        fit.iterations = iter;
        const Eigen::VectorXd g = gradient(beta);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(information(beta));
        if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
            ldlt.vectorD().minCoeff() <= 1e-12 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
            fit.diagnostic = "information matrix is singular; the design may be rank deficient or separated";
            break;
        }
        const Eigen::VectorXd delta = ldlt.solve(g);
        if (!delta.allFinite()) {
            fit.diagnostic = "Newton step is not finite";
            break;
        }

        // Near the optimum the gain drops below summation round-off; a full
        // step that loses no more than that is still accepted.
        const double slack = 1e-10 * std::max(1.0, std::abs(ll));
        double step = 1.0;
        Eigen::VectorXd next = beta + delta;
        double ll_next = log_likelihood(d, next);
        for (int h = 0; h < 30 && !(ll_next >= ll - slack); ++h) {
            step *= 0.5;
            next = beta + step * delta;
            ll_next = log_likelihood(d, next);
        }
        const double change = ll_next - ll;
        beta = next;
        ll = ll_next;

        if (beta.cwiseAbs().maxCoeff() > options.separation_bound && change > options.loglik_tolerance) {
            Eigen::Index worst = 0;
            beta.cwiseAbs().maxCoeff(&worst);
            fit.separation = true;
            fit.diagnostic = fmt::format(
                "complete separation: coefficient '{}' reached {:.3f} and the likelihood is still rising",
                d.names[static_cast<std::size_t>(worst)], beta[worst]);
            break;
        }
        if (std::abs(change) < options.loglik_tolerance &&
            gradient(beta).cwiseAbs().maxCoeff() < options.gradient_tolerance) {
            fit.converged = true;
            break;
        }
    }

    fit.log_likelihood = ll;
    fit.gradient_max_norm = gradient(beta).cwiseAbs().maxCoeff();
    if (fit.converged && fit.gradient_max_norm >= options.gradient_tolerance) fit.converged = false;
    if (!fit.converged && fit.diagnostic.empty())
        fit.diagnostic = fmt::format("no convergence after {} iterations", fit.iterations);

    Eigen::VectorXd se = Eigen::VectorXd::Constant(k, std::numeric_limits<double>::quiet_NaN());
    const Eigen::MatrixXd info = information(beta);
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
        const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(k, k));
        for (Eigen::Index j = 0; j < k; ++j)
            if (cov(j, j) > 0.0) se[j] = std::sqrt(cov(j, j));
    }
    for (Eigen::Index j = 0; j < k; ++j)
        fit.coefficients.push_back({d.names[static_cast<std::size_t>(j)], beta[j], se[j]});
    return fit;
}

LogisticFit fit_logistic(std::span<const TrialRecord> records, const Formula& formula, const FitOptions& options) {
    return fit_logistic(build_design(records, formula), options);
}

Eigen::VectorXd sample_responses(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, std::uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed));
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd y(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double p = 1.0 / (1.0 + std::exp(-eta[i]));
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        y[i] = u < p ? 1.0 : 0.0;
    }
    return y;
}

std::string fit_json(const LogisticFit& fit, const Referents& referents) {
    nlohmann::ordered_json j;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["logLikelihood"] = fit.log_likelihood;
    j["gradientMaxNorm"] = fit.gradient_max_norm;
    j["separation"] = fit.separation;
    j["diagnostic"] = fit.diagnostic;
    j["referents"] = {{"vis", referents.vis},
                      {"scaling", referents.scaling},
                      {"sd", referents.sd_pair},
                      {"position", referents.position}};
    auto coefs = nlohmann::ordered_json::array();
    for (const auto& c : fit.coefficients) {
        nlohmann::ordered_json e;
        e["term"] = c.term;
        e["estimate"] = c.estimate;
        if (std::isfinite(c.std_error)) e["stderr"] = c.std_error;
        else e["stderr"] = nullptr;
        coefs.push_back(std::move(e));
    }
    j["coefficients"] = std::move(coefs);
    return j.dump(2) + "\n";
}

}  // namespace croissant
