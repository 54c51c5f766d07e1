#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace smr::app {

/// Everything needed to re-run a command. Saved as run_config.json next to
/// the outputs; passing it back through --config reproduces them.
struct RunConfig {
    std::string command;
    std::string input;
    std::string out = "out";
    std::size_t window = 0;  // 0: whole panel
    std::size_t step = 0;    // 0: same as window
    std::size_t horizon = 0; // backtest out-of-sample rows, 0: window
    std::size_t k_min = 1;
    std::size_t k_max = 0;   // 0: all assets
    std::string method = "greedy";
    std::string sense = "min";
    std::string estimation = "ols";
    double gamma = 0.0;
    std::optional<double> zero_fraction;
    double rho = 0.1;
    std::vector<double> rho_sweep;
    double sigma = 0.0;
    std::string flavor = "box_tiao";
    bool difference = false;
    bool center = true;
    double dt = 1.0 / 252.0;
    double bid_ask = 0.0;
    double r = 0.0;
    double f = 0.0;
    double w0 = 1.0;
    double alpha_conf = 0.95;
    bool swap_refine = false;
    bool compare_sdp = false;
    bool timing = false;
    bool serial = false;
    bool report = false;
    std::optional<std::uint64_t> seed;
    std::string kind = "var";
    std::size_t m = 1000;
    std::size_t n = 8;
};

nlohmann::ordered_json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::ordered_json& json);

/// Runs one invocation (argv[0] is the program name). Returns the process
/// exit code: 0 success, 2 data or usage errors, 3 numerical errors.
int run(const std::vector<std::string>& args);

int cmd_decompose(const RunConfig& config);
int cmd_sparse(const RunConfig& config);
int cmd_covsel(const RunConfig& config);
int cmd_backtest(const RunConfig& config);
int cmd_synth(const RunConfig& config);

}  // namespace smr::app
