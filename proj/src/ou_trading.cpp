#include "smr/ou_trading.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

namespace smr {

namespace {

constexpr double kRatioClamp = 1e-6;

// 2 lambda / (1 - e^{-2 lambda dt}), continuous at lambda = 0.
double variance_factor(double lambda, double dt) {
    const double x = 2.0 * lambda * dt;
    if (std::abs(x) < 1e-12) return 1.0 / dt;
    return 2.0 * lambda / -std::expm1(-x);
}

}  // namespace

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0, 1)");
    return boost::math::quantile(boost::math::normal(), p);
}

OuParams estimate_ou(const Vector& series, double dt) {
    const Index n = series.size();
    if (n < 10) throw DomainError("estimate_ou: need at least 10 observations");
    if (!(dt > 0.0)) throw DomainError("estimate_ou: dt must be positive");

    OuParams p;
    p.dt = dt;
    p.n_obs = static_cast<std::size_t>(n);
    p.mu = series.mean();
    const Vector d = series.array() - p.mu;
    const auto cur = d.tail(n - 1);
    const auto lag = d.head(n - 1);
    const double num = cur.dot(lag);
    const double den = cur.squaredNorm();
    const double lag_ss = lag.squaredNorm();
    if (!(den > 0.0) || !(lag_ss > 0.0)) throw DomainError("estimate_ou: series has zero variance");

    double ratio = num / den;
    p.ar_coefficient = ratio;
    if (ratio <= 0.0) {
        ratio = kRatioClamp;
        p.flag = OuFlag::NotMeanReverting;
    }
    p.lambda = -std::log(ratio) / dt;
    if (p.flag == OuFlag::Ok) {
        if (!(p.lambda > 0.0))
            p.flag = OuFlag::NotMeanReverting;
        else if (p.lambda * dt > std::log(2.0))
            p.flag = OuFlag::Unresolved;
    }

    const double decay = std::exp(-p.lambda * dt);
    const double ss = (cur - decay * lag).squaredNorm();
    const double dof = static_cast<double>(n - 2);
    p.sigma = std::sqrt(variance_factor(p.lambda, dt) * ss / dof);

    if (p.ar_coefficient > 0.0) {
        const double se_ratio = std::sqrt(ss / dof / lag_ss);
        p.lambda_stderr = se_ratio / (p.ar_coefficient * dt);
        const double z = std::abs(p.lambda) / p.lambda_stderr;
        p.p_value = std::erfc(z / std::sqrt(2.0));
    } else {
        p.lambda_stderr = std::numeric_limits<double>::infinity();
        p.p_value = 1.0;
    }
    return p;
}

double half_life(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("half_life: lambda must be positive");
    return std::log(2.0) / lambda;
}

double half_life(const OuParams& params) { return half_life(params.lambda); }

void validate(const TradeConfig& config) {
    if (!(config.w0 > 0.0)) throw DomainError("trade config: w0 must be positive");
    if (!(config.bid_ask >= 0.0)) throw DomainError("trade config: bid_ask must be nonnegative");
    if (!(config.f >= 0.0)) throw DomainError("trade config: f must be nonnegative");
    if (!(config.alpha_conf > 0.5 && config.alpha_conf < 1.0))
        throw DomainError("trade config: alpha_conf must lie in (0.5, 1)");
}

double log_utility_shares(const OuParams& params, double price, double wealth, const TradeConfig& config) {
    if (!(params.sigma > 0.0)) throw DomainError("log_utility_shares: sigma must be positive");
    if (!(wealth > 0.0)) throw DomainError("log_utility_shares: wealth must be positive");
    const double drift = params.lambda * (params.mu - price) - config.r * price;
    return drift / (params.sigma * params.sigma) * wealth / (1.0 + config.f);
}

double leverage_bound(const OuParams& params, const TradeConfig& config) {
    if (!(params.lambda > 0.0)) throw DomainError("leverage_bound: lambda must be positive");
    if (!(params.sigma > 0.0)) throw DomainError("leverage_bound: sigma must be positive");
    const double alpha = standard_normal_quantile(config.alpha_conf);
    return alpha * (params.lambda + config.r) / ((1.0 + config.f) * params.sigma * std::sqrt(2.0 * params.lambda));
}

double turnover_of(const std::vector<double>& shares) {
    double total = 0.0;
    double prev = 0.0;
    for (double s : shares) {
        total += std::abs(s - prev);
        prev = s;
    }
    return total;
}

BacktestResult backtest(const Vector& track, const OuParams& params, const TradeConfig& config,
                        std::optional<RefitSchedule> refit) {
    validate(config);
    const Index n = track.size();
    if (n < 2) throw DomainError("backtest: track needs at least 2 points");
    if (refit && (refit->lookback < 10 || refit->every < 1)) throw DomainError("backtest: invalid refit schedule");

    BacktestResult out;
    OuParams current = params;
    const double dt = params.dt;
    double wealth = config.w0;
    double prev_shares = 0.0;
    std::vector<double> returns;
    out.wealth.push_back(wealth);

    for (Index t = 0; t + 1 < n; ++t) {
        if (refit) {
            const auto lb = static_cast<Index>(refit->lookback);
            if (t + 1 >= lb && (t + 1 - lb) % static_cast<Index>(refit->every) == 0) {
                try {
                    current = estimate_ou(track.segment(t + 1 - lb, lb), dt);
                } catch (const DomainError&) {
                    // degenerate history: keep the previous fit
                }
            }
        }
        const double price = track(t);
        const double shares = log_utility_shares(current, price, wealth, config);
        out.shares.push_back(shares);
        out.max_leverage = std::max(out.max_leverage, std::abs(shares * price) / wealth);

        const double cost = 0.5 * config.bid_ask * std::abs(shares - prev_shares);
        const double next = wealth * (1.0 + config.r * dt) +
                            shares * (track(t + 1) - price - price * config.r * dt) - cost;
        returns.push_back((next - wealth) / wealth - config.r * dt);
        out.wealth.push_back(next);
        wealth = next;
        prev_shares = shares;
        if (!(wealth > 0.0)) {
            out.status = BacktestStatus::Bankrupt;
            break;
        }
    }

    out.turnover = turnover_of(out.shares);
    out.cost_paid = 0.5 * config.bid_ask * out.turnover;

    const auto k = static_cast<double>(returns.size());
    double mean = 0.0;
    for (double r : returns) mean += r;
    mean /= k;
    double var = 0.0;
    for (double r : returns) var += (r - mean) * (r - mean);
    const double sd = returns.size() > 1 ? std::sqrt(var / (k - 1.0)) : 0.0;
    if (!(sd > 1e-12 * std::abs(mean)) || sd == 0.0) {
        out.sharpe = 0.0;
        out.zero_variance = true;
    } else {
        out.sharpe = mean / sd * std::sqrt(1.0 / dt);
    }
    return out;
}

}  // namespace smr
