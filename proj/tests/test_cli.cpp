#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "smr/common.hpp"

namespace fs = std::filesystem;
using smr::app::run;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("smr_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const fs::path& p) {
    const std::string text = slurp(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

int smr_run(std::vector<std::string> args) {
    args.insert(args.begin(), "smr");
    return run(args);
}

// Synthetic panel shared by the command tests.
fs::path fixture(const fs::path& dir, const std::string& kind, std::size_t n, std::size_t m) {
    const fs::path out = dir / ("synth_" + kind);
    REQUIRE(smr_run({"synth", "--kind", kind, "--n", std::to_string(n), "--m", std::to_string(m), "--seed", "7",
                     "--out", out.string()}) == 0);
    return out / "panel.csv";
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("synth kinds and the seed requirement") {
    const fs::path dir = scratch("synth");
    for (const std::string kind : {"var", "var2", "spread", "block", "coint", "ar1", "walk"}) {
        const fs::path panel = fixture(dir, kind, 5, 200);
        CHECK(fs::exists(panel));
        CHECK(fs::exists(panel.parent_path() / "truth.json"));
        CHECK(fs::exists(panel.parent_path() / "manifest.json"));
    }
    CHECK(smr_run({"synth", "--kind", "var", "--out", (dir / "noseed").string()}) == 2);
    CHECK(smr_run({"synth", "--kind", "nope", "--seed", "1", "--out", (dir / "bad").string()}) == 2);
}

TEST_CASE("decompose emits one track per portfolio and a summary") {
    const fs::path dir = scratch("decompose");
    const fs::path panel = fixture(dir, "var", 8, 300);
    const fs::path out = dir / "bt";
    REQUIRE(smr_run({"decompose", "--input", panel.string(), "--out", out.string()}) == 0);
    for (int j = 1; j <= 8; ++j) CHECK(fs::exists(out / "tracks" / ("p" + std::to_string(j) + ".csv")));
    CHECK(line_count(out / "summary.csv") == 9);
    CHECK(fs::exists(out / "weights.csv"));
    CHECK(fs::exists(out / "basis.json"));

    const fs::path jo = dir / "jo";
    REQUIRE(smr_run({"decompose", "--input", panel.string(), "--flavor", "johansen", "--out", jo.string()}) == 0);
    CHECK(slurp(jo / "basis.json").find("johansen") != std::string::npos);

    CHECK(smr_run({"decompose", "--input", (dir / "missing.csv").string(), "--out", (dir / "x").string()}) == 2);
    CHECK(smr_run({"decompose", "--input", panel.string(), "--flavor", "other", "--out", (dir / "y").string()}) == 2);
}

TEST_CASE("sparse emits the per-cardinality table and plot data") {
    const fs::path dir = scratch("sparse");
    const fs::path panel = fixture(dir, "spread", 6, 500);
    const fs::path out = dir / "greedy";
    REQUIRE(smr_run({"sparse", "--input", panel.string(), "--k", "1:4", "--out", out.string(), "--compare-sdp"}) == 0);
    CHECK(line_count(out / "sparse_portfolios.csv") == 5);
    CHECK(line_count(out / "curve.csv") == 5);
    CHECK(fs::exists(out / "compare_sdp.csv"));
    CHECK(fs::exists(out / "portfolios.json"));

    const fs::path oracle = dir / "oracle";
    REQUIRE(smr_run({"sparse", "--input", panel.string(), "--k", "2", "--method", "oracle", "--out", oracle.string()}) == 0);
    CHECK(line_count(oracle / "sparse_portfolios.csv") == 3);

    const fs::path lasso = dir / "lasso";
    CHECK(smr_run({"sparse", "--input", panel.string(), "--k", "3", "--estimation", "lasso", "--zero-fraction", "0.2",
                   "--out", lasso.string()}) == 0);
    // cardinalities above n are clamped to n
    REQUIRE(smr_run({"sparse", "--input", panel.string(), "--k", "9", "--out", (dir / "big").string()}) == 0);
    CHECK(line_count(dir / "big" / "sparse_portfolios.csv") == 7);
    CHECK(smr_run({"sparse", "--input", panel.string(), "--k", "3:1", "--out", (dir / "bad").string()}) == 2);
    CHECK(smr_run({"sparse", "--input", panel.string(), "--method", "magic", "--out", (dir / "bad2").string()}) == 2);
}

TEST_CASE("covsel emits graph, clusters and a sweep") {
    const fs::path dir = scratch("covsel");
    const fs::path panel = fixture(dir, "block", 8, 500);
    const fs::path out = dir / "cs";
    REQUIRE(smr_run({"covsel", "--input", panel.string(), "--rho", "0.1", "--rho-sweep", "0.01,0.1,1", "--out",
                     out.string()}) == 0);
    for (const char* f : {"edges.csv", "clusters.csv", "chordality.json", "precision.json", "rho_sweep.csv"})
        CHECK(fs::exists(out / f));
    CHECK(line_count(out / "rho_sweep.csv") == 4);
    CHECK(smr_run({"covsel", "--input", panel.string(), "--rho", "0", "--out", (dir / "zero").string()}) == 2);
}

TEST_CASE("backtest emits Sharpe versus cardinality") {
    const fs::path dir = scratch("backtest");
    const fs::path panel = fixture(dir, "spread", 5, 600);
    const fs::path out = dir / "bt";
    REQUIRE(smr_run({"backtest", "--input", panel.string(), "--window", "150", "--step", "100", "--k", "1:3",
                     "--bid-ask", "0.001", "--out", out.string()}) == 0);
    CHECK(line_count(out / "sharpe_vs_k.csv") == 4);
    CHECK(fs::exists(out / "windows.csv"));
    CHECK(smr_run({"backtest", "--input", panel.string(), "--out", (dir / "nowin").string()}) == 2);
}

TEST_CASE("numerical failures exit 3") {
    const fs::path dir = scratch("numerical");
    std::ofstream csv(dir / "flat.csv");
    csv << "date,a,b\n";
    for (int t = 0; t < 30; ++t) csv << t << ",1,1\n";
    csv.close();
    CHECK(smr_run({"decompose", "--input", (dir / "flat.csv").string(), "--out", (dir / "o").string()}) == 3);
    CHECK(smr_run({"sparse", "--input", (dir / "flat.csv").string(), "--out", (dir / "p").string()}) == 3);
}

TEST_CASE("usage errors exit 2") {
    CHECK(smr_run({}) == 2);
    CHECK(smr_run({"frobnicate"}) == 2);
    CHECK(smr_run({"sparse", "--no-such-flag"}) == 2);
    CHECK(smr_run({"--help"}) == 0);
}

TEST_CASE("saved config reproduces the outputs and flags override it") {
    const fs::path dir = scratch("config");
    const fs::path panel = fixture(dir, "var", 5, 400);
    const fs::path first = dir / "first";
    REQUIRE(smr_run({"sparse", "--input", panel.string(), "--k", "1:3", "--rho", "0.05", "--estimation", "covsel",
                     "--out", first.string()}) == 0);
    const fs::path second = dir / "second";
    REQUIRE(smr_run({"sparse", "--config", (first / "run_config.json").string(), "--out", second.string()}) == 0);
    for (const char* f : {"sparse_portfolios.csv", "curve.csv", "tracks.csv", "portfolios.json"})
        CHECK(slurp(first / f) == slurp(second / f));
    const auto cfg = nlohmann::ordered_json::parse(slurp(second / "run_config.json"));
    CHECK(cfg["k_max"] == 3);
    CHECK(cfg["estimation"] == "covsel");
    CHECK(cfg["out"] == second.string());

    const auto round = smr::app::config_from_json(smr::app::to_json(smr::app::config_from_json(cfg)));
    CHECK(smr::app::to_json(round) == cfg);
    CHECK_THROWS_AS(smr::app::config_from_json(nlohmann::ordered_json{{"bogus", 1}}), smr::DataError);

    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(smr_run({"sparse", "--config", (dir / "broken.json").string(), "--out", (dir / "z").string()}) == 2);
}
}
