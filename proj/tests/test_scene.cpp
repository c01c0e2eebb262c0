#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "croissant/factorial.hpp"
#include "croissant/scene.hpp"
#include "oracles.hpp"

using namespace croissant;

namespace {

StimulusSpec spec_of(VisKind vis, int q, Scaling sc, double narrow, Position pos = Position::NarrowOnTop) {
    StimulusSpec s;
    s.vis = vis;
    s.quantiles = q;
    s.scaling = sc;
    s.sigma_narrow = narrow;
    s.position = pos;
    return s;
}

std::vector<double> data_xs(const Panel& p) {
    std::vector<double> xs;
    for (const auto& d : p.dots) xs.push_back(d.data_x);
    std::sort(xs.begin(), xs.end());
    return xs;
}

double curve_height_at(const Panel& p, double x_px) {
    for (std::size_t i = 1; i < p.curve.size(); ++i)
        if (p.curve[i].x >= x_px) {
            const auto& a = p.curve[i - 1];
            const auto& b = p.curve[i];
            return a.y + (b.y - a.y) * (x_px - a.x) / (b.x - a.x);
        }
    return 0.0;
}

}  // namespace

TEST_SUITE("scene") {

TEST_CASE("shared x map spans mu +/- 3.5 wide sigmas") {
    const LayoutConfig layout;
    const auto m = make_x_map(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 2), layout);
    CHECK(m.lo == doctest::Approx(50 - 17.5));
    CHECK(m.hi == doctest::Approx(50 + 17.5));
    CHECK(m.to_px(m.lo) == doctest::Approx(0.0));
    CHECK(m.to_px(m.hi) == doctest::Approx(480.0));
    CHECK(m.to_data(m.to_px(53.3)) == doctest::Approx(53.3));
}

TEST_CASE("scale_curve multipliers agree with an integration oracle") {
    const LayoutConfig layout;
    const auto m = make_x_map(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 2), layout);
    for (double s : {2.0, 3.0, 4.0, 4.5, 5.0}) {
        const double area_mult = scale_curve(Normal(50, s), Scaling::EqualArea, layout, m);
        const double mass = oracle::simpson([&](double x) { return oracle::density(50, s, x); }, m.lo, m.hi);
        CHECK(area_mult * mass * m.scale == doctest::Approx(layout.target_area_px2).epsilon(1e-9));
        const double height_mult = scale_curve(Normal(50, s), Scaling::EqualHeight, layout, m);
        CHECK(std::abs(height_mult * oracle::density(50, s, 50) - layout.target_peak_px) < 1e-9);
    }
}

TEST_CASE("pdf panels: equal area, equal height and the peak ratio") {
    for (double narrow : {2.0, 3.0, 4.0, 4.5}) {
        const auto area = build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, narrow));
        const double a_top = panel_area_px2(area.top()), a_bot = panel_area_px2(area.bottom());
        CHECK(std::abs(a_top - a_bot) / std::max(a_top, a_bot) < 0.005);
        CHECK(panel_peak_px(area.top()) > panel_peak_px(area.bottom()));

        const auto height = build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualHeight, narrow));
        CHECK(std::abs(panel_peak_px(height.top()) - panel_peak_px(height.bottom())) < 1e-9);
        CHECK(std::abs(panel_peak_px(height.top()) - 120.0) < 1e-9);
    }
    const auto s = build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 2));
    CHECK(panel_peak_px(s.top()) / panel_peak_px(s.bottom()) == doctest::Approx(2.5).epsilon(0.01));
}

TEST_CASE("pdf curve is densely sampled and peaks at the mean") {
    const auto s = build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 3));
    for (const auto& p : s.panels) {
        REQUIRE(p.curve.size() >= 256);
        const auto top = std::max_element(p.curve.begin(), p.curve.end(),
                                          [](const Point& a, const Point& b) { return a.y < b.y; });
        CHECK(top->x == doctest::Approx(s.x_map.to_px(50)));
    }
}

TEST_CASE("equal-area pdf: the wide curve is taller at the threshold") {
    const auto s = build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 2));
    CHECK(curve_height_at(s.bottom(), s.threshold_px) > curve_height_at(s.top(), s.threshold_px));
    CHECK(s.bottom().multiplier * oracle::density(50, 5, 54) > s.top().multiplier * oracle::density(50, 2, 54));
}

TEST_CASE("croissant construction counts and slice masses") {
    const auto s = build_scene(spec_of(VisKind::Croissant, 10, Scaling::EqualArea, 4.5));
    for (const auto& p : s.panels) {
        CHECK(p.slices.size() == 10);
        CHECK(p.dots.size() == 10);
        for (std::size_t k = 0; k < p.slices.size(); ++k) {
            const auto& sl = p.slices[k];
            CHECK(sl.dark_border);
            CHECK(p.dots[k].dark_border);
            CHECK(sl.index_from_left == static_cast<int>(k) + 1);
            CHECK(sl.left_px < sl.right_px);
            CHECK(sl.left_px > sl.nominal_left_px);
            CHECK(sl.right_px < sl.nominal_right_px);
            if (k > 0 && k < 9) CHECK(std::abs(sl.mass_share - 0.1) < 1e-9);
            else CHECK(std::abs(sl.mass_share - 0.1) < 2e-4);
            CHECK(p.dots[k].center_x_px > sl.left_px);
            CHECK(p.dots[k].center_x_px < sl.right_px);
        }
        const double r = p.dots.front().radius_px;
        for (const auto& d : p.dots) CHECK(d.radius_px == r);
    }
}

TEST_CASE("croissant middle slices meet at the mean") {
    const auto s = build_scene(spec_of(VisKind::Croissant, 10, Scaling::EqualHeight, 4.5));
    for (const auto& p : s.panels) {
        CHECK(p.slices[4].nominal_right_px == doctest::Approx(s.x_map.to_px(50)));
        CHECK(p.slices[5].nominal_left_px == doctest::Approx(s.x_map.to_px(50)));
    }
}

TEST_CASE("croissant dots sit at slice mass midpoints and 40% of the curve") {
    const auto s = build_scene(spec_of(VisKind::Croissant, 10, Scaling::EqualArea, 3));
    const auto& p = s.top();
    for (int k = 1; k <= 10; ++k) {
        const auto& d = p.dots[static_cast<std::size_t>(k - 1)];
        CHECK(std::abs(d.data_x - oracle::quantile(50, 3, (k - 0.5) / 10)) < 1e-7);
        const double h = p.multiplier * oracle::density(50, 3, d.data_x);
        CHECK(d.center_y_px == doctest::Approx(std::max(0.4 * h, d.radius_px)).epsilon(1e-3));
    }
}

TEST_CASE("threshold bisects slice nine for sigma 4.5") {
    const auto s = build_scene(spec_of(VisKind::Croissant, 10, Scaling::EqualHeight, 4.5));
    const auto& sl = s.top().slices[8];
    CHECK(s.x_map.to_data(sl.nominal_left_px) == doctest::Approx(53.79).epsilon(1e-3));
    CHECK(s.x_map.to_data(sl.nominal_right_px) == doctest::Approx(55.77).epsilon(1e-3));
    CHECK(sl.nominal_left_px < s.threshold_px);
    CHECK(s.threshold_px < sl.nominal_right_px);
}

TEST_CASE("qdp dot counts left of the threshold") {
    const LayoutConfig layout;
    StimulusSpec sp = spec_of(VisKind::Qdp, 20, Scaling::EqualArea, 4.5);
    const auto m = make_x_map(sp, layout);
    auto count = [&](double sigma) {
        const auto p = build_qdp_panel(Normal(50, sigma), 20, Scaling::EqualArea, layout, m);
        return std::count_if(p.dots.begin(), p.dots.end(), [](const Dot& d) { return d.data_x <= 54.0; });
    };
    auto oracle_count = [](double sigma) {
        int n = 0;
        for (int k = 1; k <= 20; ++k) n += oracle::quantile(50, sigma, (k - 0.5) / 20) <= 54.0;
        return n;
    };
    for (double sigma : {2.0, 3.0, 4.0, 4.5, 5.0}) CHECK(count(sigma) == oracle_count(sigma));
    CHECK(count(5.0) == 16);
    CHECK(count(4.5) == 16);
}

TEST_CASE("qdp scaling contracts") {
    for (double narrow : {2.0, 3.0, 4.0, 4.5}) {
        const auto area = build_scene(spec_of(VisKind::Qdp, 20, Scaling::EqualArea, narrow));
        CHECK(area.top().dots.front().radius_px == 7.0);
        CHECK(area.bottom().dots.front().radius_px == 7.0);
        CHECK(panel_area_px2(area.top()) == doctest::Approx(panel_area_px2(area.bottom())));

        const auto height = build_scene(spec_of(VisKind::Qdp, 20, Scaling::EqualHeight, narrow));
        CHECK(std::abs(panel_peak_px(height.top()) - panel_peak_px(height.bottom())) < 1e-6);
        CHECK(height.top().dots.front().radius_px < height.bottom().dots.front().radius_px);
        for (const auto& p : height.panels)
            for (const auto& d : p.dots) {
                CHECK(d.radius_px == p.dots.front().radius_px);
                CHECK_FALSE(d.dark_border);
            }
    }
}

TEST_CASE("qdp dots are stacked in ascending order inside their bins") {
    const auto s = build_scene(spec_of(VisKind::Qdp, 20, Scaling::EqualArea, 3));
    const auto& dots = s.top().dots;
    const double bin_px = qdp_bin_width(LayoutConfig{}, s.x_map) * s.x_map.scale;
    for (std::size_t i = 0; i < dots.size(); ++i) {
        CHECK(std::abs(dots[i].center_x_px - s.x_map.to_px(dots[i].data_x)) <= bin_px / 2 + 1e-9);
        if (i > 0) {
            CHECK(dots[i].data_x > dots[i - 1].data_x);
            if (dots[i].center_x_px == dots[i - 1].center_x_px)
                CHECK(dots[i].center_y_px == doctest::Approx(dots[i - 1].center_y_px + 2 * dots[i].radius_px));
        }
    }
}

TEST_CASE("counting invariance across scalings") {
    for (const auto& spec : factorial_specs()) {
        if (spec.vis == VisKind::Pdf || spec.scaling != Scaling::EqualArea) continue;
        auto other = spec;
        other.scaling = Scaling::EqualHeight;
        const auto a = build_scene(spec), b = build_scene(other);
        for (int i = 0; i < 2; ++i) CHECK(data_xs(a.panels[i]) == data_xs(b.panels[i]));
    }
}

TEST_CASE("position swap exchanges otherwise identical panels") {
    for (const auto& spec : factorial_specs()) {
        if (spec.position != Position::NarrowOnTop) continue;
        auto swapped = spec;
        swapped.position = Position::NarrowOnBottom;
        const auto a = build_scene(spec), b = build_scene(swapped);
        CHECK(a.panels[0] == b.panels[1]);
        CHECK(a.panels[1] == b.panels[0]);
        CHECK(a.threshold_px == b.threshold_px);
    }
}

TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(build_scene(spec_of(VisKind::Pdf, 20, Scaling::EqualArea, 2)), ConfigError);
    CHECK_THROWS_AS(build_scene(spec_of(VisKind::Pdf, 0, Scaling::EqualArea, 5)), ConfigError);
    CHECK_THROWS_AS(build_scene(spec_of(VisKind::Croissant, 0, Scaling::EqualArea, 2)), ConfigError);

    LayoutConfig pad;
    pad.slice_pad_frac = 0.5;
    CHECK_THROWS_AS(build_scene(spec_of(VisKind::Croissant, 10, Scaling::EqualArea, 2), pad), ConfigError);

    LayoutConfig bins;
    bins.qdp_bin_width_data = -1;
    const auto m = make_x_map(spec_of(VisKind::Qdp, 20, Scaling::EqualArea, 2), LayoutConfig{});
    CHECK_THROWS_AS(build_qdp_panel(Normal(50, 2), 20, Scaling::EqualArea, bins, m), ConfigError);
}

TEST_CASE("tiny equal-height qdp dots are clamped with a warning") {
    LayoutConfig layout;
    layout.target_peak_px = 4;
    const auto s = build_scene(spec_of(VisKind::Qdp, 20, Scaling::EqualHeight, 2), layout);
    CHECK_FALSE(s.warnings.empty());
    for (const auto& p : s.panels)
        for (const auto& d : p.dots) CHECK(d.radius_px >= 1.0);
}

TEST_CASE("layout keys and hash") {
    const auto kv = parse_key_values("# comment\nlayout.target_peak_px = 150\nlayout.slice_pad_frac=0.05\n");
    const auto layout = layout_from_keys(kv);
    CHECK(layout.target_peak_px == 150.0);
    CHECK(layout.slice_pad_frac == 0.05);
    CHECK(layout.hash() != LayoutConfig{}.hash());
    CHECK(LayoutConfig{}.hash() == LayoutConfig{}.hash());
    CHECK(LayoutConfig{}.hash().size() == 16);
    CHECK_THROWS_AS(layout_from_keys(parse_key_values("layout.nope = 1")), ConfigError);
    CHECK_THROWS_AS(layout_from_keys(parse_key_values("layout.target_peak_px = abc")), ConfigError);
}

}
