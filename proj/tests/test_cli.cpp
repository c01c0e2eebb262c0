#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "croissant/cli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "croissant");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = croissant::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::size_t lines(const std::string& s) { return oracle::count_occurrences(s, "\n"); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("chart writes one file and echoes the spec") {
    const auto dir = oracle::scratch_dir("cli-chart");
    const auto path = (dir / "c.svg").string();
    const auto r = cli({"chart", "--vis", "croissant", "--quantiles", "10", "--scaling", "equal-height", "--sigmas",
                        "4.5,5", "--out", path});
    CHECK(r.code == croissant::cli::kExitOk);
    CHECK(fs::exists(path));
    CHECK(lines(r.out) == 1);
    CHECK(r.out.front() == '{');
    CHECK(r.out.find("\"sigmaNarrow\":4.5") != std::string::npos);

    CHECK(cli({"chart", "--vis", "croissant", "--quantiles", "10", "--out", path}).code == croissant::cli::kExitRuntime);
    CHECK(cli({"chart", "--vis", "croissant", "--quantiles", "10", "--out", path, "--force"}).code == croissant::cli::kExitOk);
    fs::remove_all(dir);
}

TEST_CASE("usage errors exit with 2") {
    const auto dir = oracle::scratch_dir("cli-usage");
    const auto path = (dir / "c.svg").string();
    CHECK(cli({"chart", "--vis", "pdf", "--quantiles", "20", "--out", path}).code == croissant::cli::kExitUsage);
    CHECK(cli({"chart", "--sigmas", "5,5", "--out", path}).code == croissant::cli::kExitUsage);
    CHECK(cli({"chart", "--vis", "violin", "--out", path}).code == croissant::cli::kExitUsage);
    CHECK(cli({"chart", "--sigmas", "two", "--out", path}).code == croissant::cli::kExitUsage);
    CHECK(cli({"chart"}).code == croissant::cli::kExitUsage);
    CHECK(cli({}).code == croissant::cli::kExitUsage);
    CHECK(cli({"matrix", "--strategies", "telepathy"}).code == croissant::cli::kExitUsage);
    CHECK(cli({"simulate", "--n-per-cell", "0"}).code == croissant::cli::kExitUsage);
    CHECK(cli({"--config", (dir / "missing.cfg").string(), "matrix"}).code == croissant::cli::kExitUsage);
    CHECK_FALSE(fs::exists(path));
    fs::remove_all(dir);
}

TEST_CASE("matrix row counts") {
    CHECK(lines(cli({"matrix"}).out) == 1 + 8 * 64);
    const auto counting = cli({"matrix", "--strategies", "counting"});
    CHECK(counting.code == 0);
    CHECK(lines(counting.out) == 1 + 64);
    CHECK(lines(cli({"matrix", "--strategies", "counting", "--vis", "qdp"}).out) == 1 + 16);
}

TEST_CASE("generate filtered to pdf") {
    const auto dir = oracle::scratch_dir("cli-generate");
    CHECK(cli({"generate", "--out", dir.string(), "--vis", "pdf"}).code == 0);
    std::size_t svgs = 0;
    for (const auto& e : fs::directory_iterator(dir)) svgs += e.path().extension() == ".svg";
    CHECK(svgs == 16);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(cli({"generate", "--out", dir.string(), "--vis", "pdf"}).code == croissant::cli::kExitRuntime);
    fs::remove_all(dir);
}

TEST_CASE("config file feeds layout, mixture and design keys") {
    const auto dir = oracle::scratch_dir("cli-config");
    const auto cfg = dir / "run.cfg";
    { std::ofstream(cfg) << "layout.target_peak_px = 150\nmixture.qdp-20.counting = 1\noracle.tie_fraction = 0.01\n"; }
    const auto r = cli({"--config", cfg.string(), "simulate", "--n-per-cell", "2", "--lapse", "0"});
    CHECK(r.code == 0);
    CHECK(r.out.find(",qdp-20,") != std::string::npos);
    CHECK(r.out.find("spread") != std::string::npos);

    { std::ofstream(cfg) << "layout.bogus = 1\n"; }
    CHECK(cli({"--config", cfg.string(), "matrix"}).code == croissant::cli::kExitUsage);
    { std::ofstream(cfg) << "colour = red\n"; }
    CHECK(cli({"--config", cfg.string(), "matrix"}).code == croissant::cli::kExitUsage);
    fs::remove_all(dir);
}

TEST_CASE("simulate then fit") {
    const auto dir = oracle::scratch_dir("cli-fit");
    const auto trials = (dir / "t.csv").string();
    const auto report = (dir / "fit.json").string();
    CHECK(cli({"simulate", "--n-per-cell", "101", "--out", trials}).code == 0);
    const auto r = cli({"fit", "--trials", trials, "--out", report});
    CHECK(r.code == 0);
    const auto json = oracle::slurp(report);
    CHECK(json.find("\"converged\": true") != std::string::npos);
    CHECK(json.find("scaling[equal-area]") != std::string::npos);

    CHECK(cli({"fit", "--trials", trials, "--referent-vis", "bar"}).code == croissant::cli::kExitUsage);
    CHECK(cli({"fit", "--trials", (dir / "none.csv").string()}).code == croissant::cli::kExitUsage);
    fs::remove_all(dir);
}

}
