#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smr/common.hpp"

namespace smr {

enum class OuFlag {
    Ok,
    NotMeanReverting,  // autocorrelation ratio outside (0, 1)
    Unresolved,        // half-life shorter than one sampling interval
};

/// dP = lambda (mu - P) dt + sigma dZ, fitted on a sampled track.
struct OuParams {
    double mu = 0.0;
    double lambda = 0.0;   // 1/years
    double sigma = 0.0;    // price units / sqrt(year)
    double dt = 1.0 / 252.0;
    std::size_t n_obs = 0;
    double ar_coefficient = 0.0;  // lag-one autocorrelation ratio e^{-lambda dt}
    double lambda_stderr = 0.0;   // delta-method standard error
    double p_value = 1.0;         // two-sided normal test of lambda = 0
    OuFlag flag = OuFlag::Ok;
};

/// Closed-form estimators:
///   mu     = mean(P)
///   lambda = -log( sum (P_t - mu)(P_{t-1} - mu) / sum (P_t - mu)^2 ) / dt
///   sigma  = sqrt( 2 lambda / ((1 - e^{-2 lambda dt})(N - 2))
///                  * sum ((P_t - mu) - e^{-lambda dt}(P_{t-1} - mu))^2 )
/// A nonpositive ratio is clamped to 1e-6 and flagged NotMeanReverting.
OuParams estimate_ou(const Vector& series, double dt);

/// log(2) / lambda, in years.
double half_life(double lambda);
double half_life(const OuParams& params);

struct TradeConfig {
    double r = 0.0;          // riskless rate, 1/years
    double f = 0.0;          // fund-flow parameter
    double bid_ask = 0.0;    // spread per unit; half is charged per trade
    double w0 = 1.0;
    double alpha_conf = 0.95;
};

void validate(const TradeConfig& config);

/// Log-utility allocation with fund flows:
///   N = (lambda (mu - P) - r P) / sigma^2 * W / (1 + f)
double log_utility_shares(const OuParams& params, double price, double wealth, const TradeConfig& config);

/// Leverage bound M = alpha (lambda + r) / ((1 + f) sigma sqrt(2 lambda)),
/// alpha the standard normal quantile at config.alpha_conf.
double leverage_bound(const OuParams& params, const TradeConfig& config);

enum class BacktestStatus { Completed, Bankrupt };

struct BacktestResult {
    std::vector<double> wealth;
    std::vector<double> shares;  // N_t held over [t, t+1)
    double sharpe = 0.0;
    bool zero_variance = false;
    double turnover = 0.0;
    double cost_paid = 0.0;
    double max_leverage = 0.0;
    BacktestStatus status = BacktestStatus::Completed;
};

/// Re-estimate OU parameters every `every` steps on the trailing
/// `lookback` observations (the fixed params are used until enough
/// history exists).
struct RefitSchedule {
    std::size_t lookback = 100;
    std::size_t every = 1;
};

/// Discrete-time convergence trading on a single portfolio track:
///   W_{t+1} = W_t (1 + r dt) + N_t (P_{t+1} - P_t - P_t r dt) - bid_ask/2 |N_t - N_{t-1}|
/// Sharpe is the mean/std of per-step excess returns times sqrt(1/dt).
BacktestResult backtest(const Vector& track, const OuParams& params, const TradeConfig& config,
                        std::optional<RefitSchedule> refit = std::nullopt);

/// Sum |N_t - N_{t-1}| with N_{-1} = 0.
double turnover_of(const std::vector<double>& shares);

/// Exact OU discretization P_{t+1} = mu + e^{-lambda dt}(P_t - mu) + sigma sqrt((1 - e^{-2 lambda dt}) / (2 lambda)) eps.
template <class Rng>
Vector simulate_ou(std::size_t n, double lambda, double sigma, double mu, double dt, double p0, Rng& rng);

double standard_normal_quantile(double p);

}  // namespace smr

#include <cmath>
#include <random>

template <class Rng>
smr::Vector smr::simulate_ou(std::size_t n, double lambda, double sigma, double mu, double dt, double p0, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double decay = std::exp(-lambda * dt);
    const double scale = sigma * std::sqrt((1.0 - decay * decay) / (2.0 * lambda));
    Vector p(static_cast<Index>(n));
    if (n == 0) return p;
    p(0) = p0;
    for (Index t = 1; t < p.size(); ++t) p(t) = mu + decay * (p(t - 1) - mu) + scale * normal(rng);
    return p;
}
