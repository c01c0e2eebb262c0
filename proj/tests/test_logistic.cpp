#include <doctest.h>

#include <cmath>
#include <random>

#include "croissant/logistic.hpp"

using namespace croissant;

namespace {

double logit(double p) { return std::log(p / (1 - p)); }

std::vector<TrialRecord> layout_records(int n_per_cell) {
    SimulationConfig cfg;
    cfg.n_per_cell = n_per_cell;
    return simulate(cfg);
}

}  // namespace

TEST_SUITE("logistic") {

TEST_CASE("two-group fit matches closed-form log odds") {
    // 300 of 1000 successes in group 0, 700 of 1000 in group 1.
    Design d;
    d.x = Eigen::MatrixXd::Zero(2000, 2);
    d.y = Eigen::VectorXd::Zero(2000);
    d.names = {"(Intercept)", "g"};
    for (int i = 0; i < 2000; ++i) {
        d.x(i, 0) = 1;
        d.x(i, 1) = i >= 1000;
        d.y(i) = (i < 1000) ? (i < 300) : (i < 1700);
    }
    const auto fit = fit_logistic(d);
    CHECK(fit.converged);
    CHECK(fit.at("(Intercept)").estimate == doctest::Approx(logit(0.3)).epsilon(1e-9));
    CHECK(fit.at("g").estimate == doctest::Approx(logit(0.7) - logit(0.3)).epsilon(1e-9));
    // Wald SE of a log odds ratio: sqrt(1/a + 1/b + 1/c + 1/d).
    CHECK(fit.at("g").std_error == doctest::Approx(std::sqrt(1.0 / 300 + 1.0 / 700 + 1.0 / 700 + 1.0 / 300)).epsilon(1e-6));
    CHECK(fit.gradient_max_norm < 1e-8);
    CHECK_THROWS_AS(fit.at("nope"), std::out_of_range);
}

TEST_CASE("formula parsing and design columns") {
    const auto f = Formula::parse("vis + scaling + vis:scaling");
    REQUIRE(f.terms.size() == 4);
    CHECK(f.terms[0].factors.empty());
    CHECK(f.terms[3].factors.size() == 2);
    CHECK_THROWS_AS(Formula::parse("vis + colour"), ConfigError);
    CHECK_THROWS_AS(Formula::parse("vis + "), ConfigError);

    const auto records = layout_records(2);
    const auto d = build_design(records, f);
    CHECK(d.names.front() == "(Intercept)");
    CHECK(d.names.size() == 1 + 3 + 1 + 3);
    CHECK(std::find(d.names.begin(), d.names.end(), "scaling[equal-area]") != d.names.end());
    CHECK(std::find(d.names.begin(), d.names.end(), "vis[qdp-20]:scaling[equal-area]") != d.names.end());
    CHECK(d.x.rows() == static_cast<Eigen::Index>(records.size()));

    const auto standard = build_design(records, Formula::standard());
    CHECK(standard.names.size() == 1 + 3 + 1 + 3 + 3 + 9 + 1);

    Referents bad;
    bad.vis = "bar-chart";
    CHECK_THROWS_AS(build_design(records, Formula::parse("vis", bad)), ConfigError);
}

TEST_CASE("planted coefficients are recovered on 1e5 rows") {
    const auto records = layout_records(1563);
    const auto d = build_design(records, Formula::standard());
    REQUIRE(d.x.rows() >= 100000);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::VectorXd beta(d.x.cols());
    for (Eigen::Index j = 0; j < beta.size(); ++j) beta[j] = u(rng);

    Design planted = d;
    planted.y = sample_responses(d.x, beta, 99);
    const auto fit = fit_logistic(planted);
    REQUIRE(fit.converged);
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const auto& c = fit.coefficients[static_cast<std::size_t>(j)];
        CHECK(std::abs(c.estimate - beta[j]) <= 3 * c.std_error);
    }
}

TEST_CASE("bootstrap closure on the simulated experiment") {
    const auto records = layout_records(101);
    const auto fit = fit_logistic(records, Formula::standard());
    REQUIRE(fit.converged);
    Design d = build_design(records, Formula::standard());
    d.y = sample_responses(d.x, fit.estimates(), 5);
    const auto refit = fit_logistic(d);
    REQUIRE(refit.converged);
    for (std::size_t j = 0; j < fit.coefficients.size(); ++j)
        CHECK(std::abs(refit.coefficients[j].estimate - fit.coefficients[j].estimate) <= 3 * refit.coefficients[j].std_error);
}

TEST_CASE("complete separation is flagged, not thrown") {
    auto records = layout_records(2);
    for (auto& r : records) r.correct = true;
    LogisticFit fit;
    CHECK_NOTHROW(fit = fit_logistic(records, Formula::parse("vis")));
    CHECK_FALSE(fit.converged);
    CHECK(fit.separation);
    CHECK_FALSE(fit.diagnostic.empty());

    auto split = layout_records(2);
    for (auto& r : split) r.correct = r.spec.scaling == Scaling::EqualArea;
    const auto s = fit_logistic(split, Formula::parse("scaling"));
    CHECK_FALSE(s.converged);
    CHECK(s.separation);
}

TEST_CASE("rank-deficient design is reported") {
    Design d;
    d.x = Eigen::MatrixXd::Ones(50, 2);
    d.y = Eigen::VectorXd::Zero(50);
    for (int i = 0; i < 25; ++i) d.y(i) = 1;
    d.names = {"a", "b"};
    LogisticFit fit;
    CHECK_NOTHROW(fit = fit_logistic(d));
    CHECK_FALSE(fit.converged);
    CHECK_FALSE(fit.diagnostic.empty());
}

TEST_CASE("default experiment: equal area helps pdf readers") {
    const auto fit = fit_logistic(layout_records(101), Formula::standard());
    REQUIRE(fit.converged);
    CHECK(fit.at("scaling[equal-area]").estimate > 0);
    const auto json = fit_json(fit, Referents{});
    CHECK(json.find("\"term\": \"scaling[equal-area]\"") != std::string::npos);
    CHECK(json.find("\"converged\": true") != std::string::npos);
}

}
