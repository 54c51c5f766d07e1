#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "smr/canonical.hpp"
#include "smr/covsel.hpp"
#include "smr/data_io.hpp"
#include "smr/estimation.hpp"
#include "smr/ou_trading.hpp"
#include "smr/parallel.hpp"
#include "smr/serialize.hpp"
#include "smr/sparse_geneig.hpp"
#include "smr/synth.hpp"

namespace fs = std::filesystem;

namespace smr::app {

using Json = nlohmann::ordered_json;

Json to_json(const RunConfig& c) {
    Json j;
    j["command"] = c.command;
    j["input"] = c.input;
    j["out"] = c.out;
    j["window"] = c.window;
    j["step"] = c.step;
    j["horizon"] = c.horizon;
    j["k_min"] = c.k_min;
    j["k_max"] = c.k_max;
    j["method"] = c.method;
    j["sense"] = c.sense;
    j["estimation"] = c.estimation;
    j["gamma"] = c.gamma;
    j["zero_fraction"] = c.zero_fraction ? Json(*c.zero_fraction) : Json(nullptr);
    j["rho"] = c.rho;
    j["rho_sweep"] = c.rho_sweep;
    j["sigma"] = c.sigma;
    j["flavor"] = c.flavor;
    j["difference"] = c.difference;
    j["center"] = c.center;
    j["dt"] = c.dt;
    j["bid_ask"] = c.bid_ask;
    j["r"] = c.r;
    j["f"] = c.f;
    j["w0"] = c.w0;
    j["alpha_conf"] = c.alpha_conf;
    j["swap_refine"] = c.swap_refine;
    j["compare_sdp"] = c.compare_sdp;
    j["timing"] = c.timing;
    j["serial"] = c.serial;
    j["report"] = c.report;
    j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
    j["kind"] = c.kind;
    j["m"] = c.m;
    j["n"] = c.n;
    return j;
}

namespace {

template <class T>
void read(const Json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

template <class T>
void read(const Json& j, const char* key, std::optional<T>& field) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        field.reset();
    } else {
        field = j.at(key).get<T>();
    }
}

}  // namespace

RunConfig config_from_json(const Json& j) {
    static const std::vector<std::string> known{
        "command", "input",   "out",        "window",  "step",      "horizon",     "k_min",       "k_max",
        "method",  "sense",   "estimation", "gamma",   "zero_fraction", "rho",     "rho_sweep",   "sigma",
        "flavor",  "difference", "center",  "dt",      "bid_ask",   "r",           "f",           "w0",
        "alpha_conf", "swap_refine", "compare_sdp", "timing", "serial", "report", "seed", "kind", "m", "n"};
    if (!j.is_object()) throw DataError("config: expected a JSON object");
    for (const auto& item : j.items())
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw DataError("config: unknown key '" + item.key() + "'");
    RunConfig c;
    try {
        read(j, "command", c.command);
        read(j, "input", c.input);
        read(j, "out", c.out);
        read(j, "window", c.window);
        read(j, "step", c.step);
        read(j, "horizon", c.horizon);
        read(j, "k_min", c.k_min);
        read(j, "k_max", c.k_max);
        read(j, "method", c.method);
        read(j, "sense", c.sense);
        read(j, "estimation", c.estimation);
        read(j, "gamma", c.gamma);
        read(j, "zero_fraction", c.zero_fraction);
        read(j, "rho", c.rho);
        read(j, "rho_sweep", c.rho_sweep);
        read(j, "sigma", c.sigma);
        read(j, "flavor", c.flavor);
        read(j, "difference", c.difference);
        read(j, "center", c.center);
        read(j, "dt", c.dt);
        read(j, "bid_ask", c.bid_ask);
        read(j, "r", c.r);
        read(j, "f", c.f);
        read(j, "w0", c.w0);
        read(j, "alpha_conf", c.alpha_conf);
        read(j, "swap_refine", c.swap_refine);
        read(j, "compare_sdp", c.compare_sdp);
        read(j, "timing", c.timing);
        read(j, "serial", c.serial);
        read(j, "report", c.report);
        read(j, "seed", c.seed);
        read(j, "kind", c.kind);
        read(j, "m", c.m);
        read(j, "n", c.n);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("config: ") + e.what());
    }
    return c;
}

namespace {

// Collects the output files of one command for manifest.json.
class Outputs {
public:
    explicit Outputs(const RunConfig& config) : dir_(config.out), config_(config) {
        fs::create_directories(dir_);
    }

    void csv(const std::string& name, const CsvTable& table, const std::string& description, const std::string& x = "",
             const std::string& y = "") {
        fs::create_directories((dir_ / name).parent_path());
        table.write(dir_ / name);
        add(name, description, x, y);
    }

    void json(const std::string& name, const Json& content, const std::string& description) {
        write_json(dir_ / name, content);
        add(name, description, "", "");
    }

    void finish() {
        write_json(dir_ / "run_config.json", to_json(config_));
        Json manifest;
        manifest["command"] = config_.command;
        manifest["files"] = files_;
        write_json(dir_ / "manifest.json", manifest);
    }

private:
    void add(const std::string& name, const std::string& description, const std::string& x, const std::string& y) {
        Json entry{{"file", name}, {"description", description}};
        if (!x.empty()) entry["x"] = x;
        if (!y.empty()) entry["y"] = y;
        files_.push_back(std::move(entry));
    }

    fs::path dir_;
    const RunConfig& config_;
    Json files_ = Json::array();
};

Execution exec_of(const RunConfig& c) { return c.serial ? Execution::Serial : Execution::Parallel; }

std::string fmt(double v) { return format_double(v); }

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

TimePanel load_input(const RunConfig& c, Outputs& out) {
    if (c.input.empty()) throw DataError("--input is required");
    if (!fs::exists(c.input)) throw DataError("input file not found: " + c.input);
    LoadOptions options;
    options.dt = c.dt;
    LoadResult loaded = load_panel(c.input, options);
    if (c.report) out.json("load_report.json", smr::to_json(loaded.report), "rows read, dropped and filled");
    TimePanel panel = c.difference ? loaded.panel.difference() : loaded.panel;
    return panel;
}

// The most recent `window` rows, or the whole panel.
TimePanel latest_window(const TimePanel& panel, std::size_t window) {
    const auto m = static_cast<std::size_t>(panel.rows());
    if (window == 0 || window >= m) return panel;
    return panel.slice_rows(m - window, m);
}

Sense parse_sense(const std::string& s) {
    if (s == "min") return Sense::Minimize;
    if (s == "max") return Sense::Maximize;
    throw DataError("--sense must be min or max");
}

SparseMethod parse_method(const std::string& s) {
    if (s == "greedy") return SparseMethod::Greedy;
    if (s == "sdp") return SparseMethod::Sdp;
    if (s == "oracle") return SparseMethod::Oracle;
    throw DataError("--method must be greedy, sdp or oracle");
}

PipelineOptions pipeline_options(const RunConfig& c) {
    PipelineOptions o;
    o.center = c.center;
    o.method = parse_method(c.method);
    o.sense = parse_sense(c.sense);
    o.swap_refine = c.swap_refine;
    o.exec = exec_of(c);
    if (c.estimation == "ols") {
        o.transition = TransitionEstimator::Ols;
    } else if (c.estimation == "lasso") {
        o.transition = TransitionEstimator::Lasso;
        o.lasso_gamma = c.gamma;
        o.lasso_zero_fraction = c.zero_fraction;
    } else if (c.estimation == "covsel") {
        o.transition = TransitionEstimator::Ols;
        o.covsel_rho = c.rho;
    } else if (c.estimation == "endogenous") {
        o.transition = TransitionEstimator::Endogenous;
        o.endogenous_sigma = c.sigma;
    } else {
        throw DataError("--estimation must be ols, lasso, covsel or endogenous");
    }
    return o;
}

TradeConfig trade_config(const RunConfig& c, double bid_ask) {
    TradeConfig t;
    t.r = c.r;
    t.f = c.f;
    t.bid_ask = bid_ask;
    t.w0 = c.w0;
    t.alpha_conf = c.alpha_conf;
    try {
        validate(t);
    } catch (const DomainError& e) {
        throw DataError(e.what());
    }
    return t;
}

std::size_t k_upper(const RunConfig& c, const TimePanel& panel) {
    const auto n = static_cast<std::size_t>(panel.cols());
    const std::size_t k = c.k_max == 0 ? n : std::min(c.k_max, n);
    if (c.k_min < 1 || c.k_min > k) throw DataError("--k range is empty for this panel");
    return k;
}

std::optional<OuParams> try_ou(const Vector& track, double dt) {
    try {
        return estimate_ou(track, dt);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace

int cmd_decompose(const RunConfig& c) {
    Outputs out(c);
    const TimePanel panel = latest_window(load_input(c, out), c.window);

    CanonicalBasis basis;
    if (c.flavor == "johansen") {
        basis = johansen(panel);
    } else if (c.flavor == "box_tiao") {
        const PredictabilityPencil pencil = build_pencil(panel, pipeline_options(c));
        basis = box_tiao(pencil.model, panel.values);
    } else {
        throw DataError("--flavor must be box_tiao or johansen");
    }

    const Index n = basis.weights.cols();
    CsvTable summary{{"portfolio", "nu", "lambda", "lambda_stderr", "p_value", "sigma", "half_life", "flag"}, {}};
    CsvTable weights{{"asset"}, {}};
    for (Index j = 0; j < n; ++j) weights.header.push_back("p" + std::to_string(j + 1));
    for (Index i = 0; i < basis.weights.rows(); ++i) {
        std::vector<std::string> row{panel.labels[static_cast<std::size_t>(i)]};
        for (Index j = 0; j < n; ++j) row.push_back(fmt(basis.weights(i, j)));
        weights.add_row(std::move(row));
    }
    for (Index j = 0; j < n; ++j) {
        const std::string name = "p" + std::to_string(j + 1);
        CsvTable track{{"t", "value"}, {}};
        for (Index t = 0; t < basis.portfolio_series.rows(); ++t)
            track.add_row({panel.timestamps[static_cast<std::size_t>(t)], fmt(basis.portfolio_series(t, j))});
        out.csv("tracks/" + name + ".csv", track, "portfolio " + name + " track", "t", "value");

        const auto ou = try_ou(basis.portfolio_series.col(j), panel.dt);
        if (ou) {
            const std::string hl = ou->lambda > 0.0 ? fmt(half_life(*ou)) : "";
            summary.add_row({name, fmt(basis.predictability(j)), fmt(ou->lambda), fmt(ou->lambda_stderr),
                             fmt(ou->p_value), fmt(ou->sigma), hl, to_string(ou->flag)});
        } else {
            summary.add_row({name, fmt(basis.predictability(j)), "", "", "", "", "", "degenerate"});
        }
    }
    out.csv("summary.csv", summary, "predictability and OU fit per portfolio, most predictable first");
    out.csv("weights.csv", weights, "portfolio weights by asset");
    out.json("basis.json", smr::to_json(basis, panel.labels), "canonical basis");
    out.finish();
    for (const auto& w : basis.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_sparse(const RunConfig& c) {
    Outputs out(c);
    const TimePanel panel = latest_window(load_input(c, out), c.window);
    const PipelineOptions options = pipeline_options(c);
    const std::size_t k_max = k_upper(c, panel);

    const PredictabilityPencil pencil = build_pencil(panel, options);
    const std::vector<SparsePortfolio> path = sparse_path(panel, k_max, options);

    CsvTable table{{"k", "support", "value", "nu", "lambda_ou", "half_life", "upper_bound", "certified"}, {}};
    for (const auto& label : panel.labels) table.header.push_back(label);
    CsvTable curve{{"k", "nu", "lambda_ou"}, {}};
    CsvTable tracks{{"t"}, {}};
    Json portfolios = Json::array();
    for (std::size_t k = c.k_min; k <= k_max; ++k) {
        const SparsePortfolio& p = path[k - 1];
        const std::string lambda = p.ou ? fmt(p.ou->lambda) : "";
        const std::string hl = p.ou && p.ou->lambda > 0.0 ? fmt(half_life(*p.ou)) : "";
        std::vector<std::string> row{std::to_string(k), join_labels(panel.labels, p.support), fmt(p.value), fmt(p.nu),
                                     lambda, hl, fmt_opt(p.bound), p.certified ? "1" : "0"};
        for (Index i = 0; i < p.weights.size(); ++i) row.push_back(fmt(p.weights(i)));
        table.add_row(std::move(row));
        curve.add_row({std::to_string(k), fmt(p.nu), lambda});
        tracks.header.push_back("k" + std::to_string(k));
        portfolios.push_back(smr::to_json(p, panel.labels));
    }
    for (Index t = 0; t < panel.rows(); ++t) {
        std::vector<std::string> row{panel.timestamps[static_cast<std::size_t>(t)]};
        for (std::size_t k = c.k_min; k <= k_max; ++k) row.push_back(fmt(path[k - 1].track(t)));
        tracks.add_row(std::move(row));
    }
    out.csv("sparse_portfolios.csv", table, "per-cardinality support, weights, predictability and OU speed");
    out.csv("curve.csv", curve, "predictability and mean reversion versus cardinality", "k", "nu, lambda_ou");
    out.csv("tracks.csv", tracks, "portfolio tracks per cardinality", "t", "value");

    if (c.compare_sdp && options.method != SparseMethod::Sdp) {
        PipelineOptions sdp = options;
        sdp.method = SparseMethod::Sdp;
        const std::vector<SparsePortfolio> relaxed = sparse_path(panel, k_max, sdp);
        const std::string base = to_string(options.method);
        CsvTable compare{{"k", base + "_value", "sdp_value", "sdp_bound", "sdp_certified"}, {}};
        for (std::size_t k = c.k_min; k <= k_max; ++k) {
            const auto& r = relaxed[k - 1];
            compare.add_row({std::to_string(k), fmt(path[k - 1].value), fmt(r.value), fmt_opt(r.bound),
                             r.certified ? "1" : "0"});
        }
        out.csv("compare_sdp.csv", compare, "objective of each method and the relaxation bound versus cardinality",
                "k", "value");
    }

    if (c.timing) {
        CsvTable timing{{"n", "seconds"}, {}};
        const auto n = static_cast<std::size_t>(panel.cols());
        for (std::size_t size = std::min<std::size_t>(5, n); size <= n; size += 5) {
            std::vector<std::size_t> cols(size);
            std::iota(cols.begin(), cols.end(), 0);
            const PredictabilityPencil sub = build_pencil(panel.select_columns(cols), options);
            const auto t0 = std::chrono::steady_clock::now();
            greedy_search({sub.numerator, sub.denominator, size, options.sense}, options.exec);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            timing.add_row({std::to_string(size), fmt(secs)});
        }
        out.csv("timing.csv", timing, "wall time of a full greedy sweep versus number of assets", "n", "seconds");
    }

    Json model = smr::to_json(pencil.model, panel.labels);
    out.json("portfolios.json", Json{{"model", model}, {"portfolios", portfolios}}, "model and sparse portfolios");
    out.finish();
    for (const auto& w : pencil.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_covsel(const RunConfig& c) {
    Outputs out(c);
    const TimePanel panel = latest_window(load_input(c, out), c.window);
    if (!(c.rho > 0.0)) throw DataError("--rho must be positive");
    const Matrix sigma = sample_covariance(panel);
    const PrecisionEstimate est = graphical_lasso(sigma, c.rho);

    CsvTable edges{{"i", "j", "label_i", "label_j", "weight", "sign"}, {}};
    for (std::size_t i = 0; i < est.graph.n; ++i) {
        for (std::size_t j : est.graph.adj[i]) {
            if (j <= i) continue;
            const double w = est.x(static_cast<Index>(i), static_cast<Index>(j));
            edges.add_row({std::to_string(i + 1), std::to_string(j + 1), panel.labels[i], panel.labels[j], fmt(w),
                           w > 0.0 ? "+" : "-"});
        }
    }
    CsvTable clusters{{"cluster", "size", "members"}, {}};
    for (std::size_t q = 0; q < est.clusters.size(); ++q)
        clusters.add_row({std::to_string(q + 1), std::to_string(est.clusters[q].size()),
                          join_labels(panel.labels, est.clusters[q])});
    const ChordalityResult chordal = is_chordal(est.graph);
    std::vector<std::string> order;
    for (auto v : chordal.elimination_order) order.push_back(panel.labels[v]);

    out.csv("edges.csv", edges, "dependence graph edge list (nonzero precision entries)");
    out.csv("clusters.csv", clusters, "connected components of the dependence graph");
    out.json("chordality.json", Json{{"chordal", chordal.chordal}, {"elimination_order", order}},
             "chordality of the dependence graph with a perfect elimination ordering");
    out.json("precision.json", smr::to_json(est, panel.labels), "penalized precision estimate");

    if (!c.rho_sweep.empty()) {
        std::vector<PrecisionEstimate> sweep(c.rho_sweep.size());
        parallel_for(static_cast<Index>(sweep.size()), exec_of(c), [&](Index i) {
            const double rho = c.rho_sweep[static_cast<std::size_t>(i)];
            if (!(rho > 0.0)) throw DataError("--rho-sweep values must be positive");
            sweep[static_cast<std::size_t>(i)] = graphical_lasso(sigma, rho);
        });
        CsvTable table{{"rho", "edges", "clusters", "largest_cluster", "chordal", "kkt_residual"}, {}};
        for (const auto& e : sweep) {
            std::size_t largest = 0;
            for (const auto& q : e.clusters) largest = std::max(largest, q.size());
            table.add_row({fmt(e.rho), std::to_string(e.graph.edge_count()), std::to_string(e.clusters.size()),
                           std::to_string(largest), is_chordal(e.graph).chordal ? "1" : "0", fmt(e.kkt_residual)});
        }
        out.csv("rho_sweep.csv", table, "graph statistics versus penalty", "rho", "clusters");
    }
    out.finish();
    for (const auto& w : est.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

namespace {

struct TradeOutcome {
    bool traded = false;
    OuParams fit;
    BacktestResult frictionless;
    BacktestResult costly;
};

struct Band {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0;
};

Band band(const std::vector<double>& v) {
    Band b;
    b.count = v.size();
    if (v.empty()) return b;
    b.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - b.mean) * (x - b.mean);
        b.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    return b;
}

}  // namespace

int cmd_backtest(const RunConfig& c) {
    Outputs out(c);
    const TimePanel panel = load_input(c, out);
    if (c.window == 0) throw DataError("backtest requires --window");
    const std::size_t step = c.step == 0 ? c.window : c.step;
    const std::size_t k_max = k_upper(c, panel);
    PipelineOptions options = pipeline_options(c);
    const TradeConfig free_cfg = trade_config(c, 0.0);
    const TradeConfig cost_cfg = trade_config(c, c.bid_ask);

    std::vector<WindowPair> windows = rolling_windows(panel, c.window, step);
    if (windows.empty()) throw DataError("panel too short for one in-sample window plus out-of-sample rows");
    if (c.horizon > 0)
        for (auto& w : windows)
            if (static_cast<std::size_t>(w.out_of_sample.rows()) > c.horizon)
                w.out_of_sample = w.out_of_sample.slice_rows(0, c.horizon);

    // Windows in parallel, each solved serially; slots keep the output order fixed.
    const Execution outer = options.exec;
    options.exec = Execution::Serial;
    std::vector<std::vector<TradeOutcome>> results(windows.size());
    parallel_for(static_cast<Index>(windows.size()), outer, [&](Index wi) {
        const WindowPair& w = windows[static_cast<std::size_t>(wi)];
        const auto path = sparse_path(w.in_sample, k_max, options);
        auto& slot = results[static_cast<std::size_t>(wi)];
        slot.resize(k_max);
        for (std::size_t k = c.k_min; k <= k_max; ++k) {
            const Vector& x = path[k - 1].weights;
            const auto fit = try_ou(w.in_sample.values * x, panel.dt);
            TradeOutcome& o = slot[k - 1];
            if (!fit || fit->flag != OuFlag::Ok || !(fit->sigma > 0.0)) continue;
            const Vector track = w.out_of_sample.values * x;
            o.traded = true;
            o.fit = *fit;
            o.frictionless = backtest(track, *fit, free_cfg);
            o.costly = backtest(track, *fit, cost_cfg);
        }
    });

    CsvTable summary{{"k", "windows", "sharpe_mean", "sharpe_std", "sharpe_lower", "sharpe_upper", "sharpe_cost_mean",
                      "sharpe_cost_std", "sharpe_cost_lower", "sharpe_cost_upper"},
                     {}};
    CsvTable detail{{"window_start", "k", "lambda", "flag", "sharpe", "sharpe_cost", "final_wealth",
                     "final_wealth_cost", "status", "status_cost"},
                    {}};
    for (std::size_t k = c.k_min; k <= k_max; ++k) {
        std::vector<double> free_s, cost_s;
        for (std::size_t wi = 0; wi < windows.size(); ++wi) {
            const TradeOutcome& o = results[wi][k - 1];
            if (!o.traded) {
                detail.add_row({std::to_string(windows[wi].start), std::to_string(k), "", "skipped", "", "", "", "", "",
                                ""});
                continue;
            }
            free_s.push_back(o.frictionless.sharpe);
            cost_s.push_back(o.costly.sharpe);
            detail.add_row({std::to_string(windows[wi].start), std::to_string(k), fmt(o.fit.lambda),
                            to_string(o.fit.flag), fmt(o.frictionless.sharpe), fmt(o.costly.sharpe),
                            fmt(o.frictionless.wealth.back()), fmt(o.costly.wealth.back()),
                            to_string(o.frictionless.status), to_string(o.costly.status)});
        }
        const Band fb = band(free_s);
        const Band cb = band(cost_s);
        summary.add_row({std::to_string(k), std::to_string(fb.count), fmt(fb.mean), fmt(fb.std), fmt(fb.mean - fb.std),
                         fmt(fb.mean + fb.std), fmt(cb.mean), fmt(cb.std), fmt(cb.mean - cb.std),
                         fmt(cb.mean + cb.std)});
    }

    CsvTable tracks{{"k", "step", "wealth", "shares", "wealth_cost", "shares_cost"}, {}};
    for (std::size_t k = c.k_min; k <= k_max; ++k) {
        const TradeOutcome& o = results.front()[k - 1];
        if (!o.traded) continue;
        const std::size_t len = std::max(o.frictionless.wealth.size(), o.costly.wealth.size());
        auto at = [](const std::vector<double>& v, std::size_t i) { return i < v.size() ? fmt(v[i]) : ""; };
        for (std::size_t t = 0; t < len; ++t)
            tracks.add_row({std::to_string(k), std::to_string(t), at(o.frictionless.wealth, t),
                            at(o.frictionless.shares, t), at(o.costly.wealth, t), at(o.costly.shares, t)});
    }

    out.csv("sharpe_vs_k.csv", summary,
            "out-of-sample Sharpe ratio versus cardinality, mean and one-standard-deviation band, without and with "
            "bid-ask cost",
            "k", "sharpe");
    out.csv("windows.csv", detail, "per-window backtest results");
    out.csv("tracks_first_window.csv", tracks, "wealth and positions in the first out-of-sample window", "step",
            "wealth");
    out.finish();
    return 0;
}

int cmd_synth(const RunConfig& c) {
    if (!c.seed) throw DataError("synth requires --seed");
    const std::uint64_t seed = *c.seed;
    Outputs out(c);
    Json truth{{"kind", c.kind}, {"seed", seed}, {"m", c.m}, {"n", c.n}};
    TimePanel panel;
    if (c.kind == "var1" || c.kind == "var2" || c.kind == "var") {
        const std::size_t order = c.kind == "var2" ? 2 : 1;
        auto fx = synth::var_panel(c.n, c.m, order, 0.9, seed);
        panel = std::move(fx.panel);
        Json ts = Json::array();
        for (const auto& a : fx.transitions) ts.push_back(smr::to_json(a));
        truth["transitions"] = ts;
    } else if (c.kind == "spread") {
        if (c.n < 5) throw DataError("spread fixture needs n >= 5");
        auto fx = synth::planted_ou_spread(c.n, c.m, 1, 4, 10.0, seed);
        panel = std::move(fx.panel);
        truth["support"] = fx.support;
        truth["lambda"] = 10.0;
    } else if (c.kind == "block") {
        const std::size_t block = std::min<std::size_t>(14, c.n);
        auto fx = synth::planted_block(c.n, block, c.m, 0.6, seed);
        panel = std::move(fx.panel);
        truth["block"] = fx.block;
    } else if (c.kind == "coint") {
        panel = synth::cointegrated_pair(c.m, 0.5, seed);
    } else if (c.kind == "ar1") {
        std::vector<double> coef(c.n);
        for (std::size_t i = 0; i < c.n; ++i)
            coef[i] = c.n == 1 ? 0.5 : 0.9 - 0.8 * static_cast<double>(i) / static_cast<double>(c.n - 1);
        panel = synth::independent_ar1(coef, c.m, seed);
        truth["coefficients"] = coef;
    } else if (c.kind == "walk") {
        panel = synth::random_walks(c.n, c.m, seed);
    } else {
        throw DataError("--kind must be var1, var2, spread, block, coint, ar1 or walk");
    }
    write_panel(fs::path(c.out) / "panel.csv", panel);
    out.json("truth.json", truth, "generator parameters and planted structure");
    out.finish();
    return 0;
}

namespace {

// Binds one flag to a RunConfig field; flags set on the command line win
// over the config file.
class Binder {
public:
    Binder(CLI::App* sub, RunConfig& flags) : sub_(sub), flags_(flags) {}

    template <class T>
    void option(const std::string& name, T RunConfig::*field, const std::string& help) {
        CLI::Option* opt = sub_->add_option(name, flags_.*field, help);
        setters_.push_back({opt, [field](RunConfig& dst, const RunConfig& src) { dst.*field = src.*field; }});
    }

    void flag(const std::string& name, bool RunConfig::*field, const std::string& help) {
        CLI::Option* opt = sub_->add_flag(name, flags_.*field, help);
        setters_.push_back({opt, [field](RunConfig& dst, const RunConfig& src) { dst.*field = src.*field; }});
    }

    void apply(RunConfig& dst) const {
        for (const auto& [opt, set] : setters_)
            if (opt->count() > 0) set(dst, flags_);
    }

private:
    CLI::App* sub_;
    RunConfig& flags_;
    std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>> setters_;
};

void parse_k(const std::string& text, RunConfig& c) {
    try {
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            c.k_max = std::stoul(text);
            c.k_min = 1;
        } else {
            c.k_min = std::stoul(text.substr(0, colon));
            c.k_max = std::stoul(text.substr(colon + 1));
        }
    } catch (const std::exception&) {
        throw DataError("--k expects N or LO:HI");
    }
    if (c.k_min < 1 || c.k_max < c.k_min) throw DataError("--k range is invalid");
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Sparse mean-reverting portfolio toolkit"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* app;
        RunConfig flags;
        std::unique_ptr<Binder> binder;
        std::string config_path;
        std::string k_text;
        double zero_fraction = 0.0;
        CLI::Option* zero_fraction_opt = nullptr;
        std::uint64_t seed = 0;
        CLI::Option* seed_opt = nullptr;
        CLI::Option* k_opt = nullptr;
    };
    const std::vector<std::pair<std::string, std::string>> names{
        {"decompose", "Box-Tiao or Johansen canonical decomposition"},
        {"sparse", "sparse mean-reverting portfolios for a range of cardinalities"},
        {"covsel", "penalized covariance selection and dependence graph"},
        {"backtest", "rolling-window convergence trading backtest versus cardinality"},
        {"synth", "synthetic fixture panels"}};
    std::vector<std::unique_ptr<Sub>> subs;
    for (const auto& [name, help] : names) {
        auto s = std::make_unique<Sub>();
        s->app = app.add_subcommand(name, help);
        s->binder = std::make_unique<Binder>(s->app, s->flags);
        Binder& b = *s->binder;
        s->app->add_option("--config", s->config_path, "run_config.json to start from");
        b.option("--input", &RunConfig::input, "CSV panel");
        b.option("--out", &RunConfig::out, "output directory");
        b.option("--window", &RunConfig::window, "window length in rows");
        b.option("--step", &RunConfig::step, "window step in rows");
        b.option("--horizon", &RunConfig::horizon, "out-of-sample rows per window");
        s->k_opt = s->app->add_option("--k", s->k_text, "cardinality N or range LO:HI");
        b.option("--method", &RunConfig::method, "greedy, sdp or oracle");
        b.option("--sense", &RunConfig::sense, "min (mean reversion) or max (momentum)");
        b.option("--estimation", &RunConfig::estimation, "ols, lasso, covsel or endogenous");
        b.option("--gamma", &RunConfig::gamma, "LASSO penalty");
        s->zero_fraction_opt =
            s->app->add_option("--zero-fraction", s->zero_fraction, "pick the LASSO penalty for this zero fraction");
        b.option("--rho", &RunConfig::rho, "covariance selection penalty");
        s->app->add_option("--rho-sweep", s->flags.rho_sweep, "penalties for the sweep table")->delimiter(',');
        b.option("--sigma", &RunConfig::sigma, "endogenous model noise level");
        b.option("--flavor", &RunConfig::flavor, "box_tiao or johansen");
        b.flag("--difference", &RunConfig::difference, "work on first differences");
        b.option("--center", &RunConfig::center, "center by window means (true/false)");
        b.option("--dt", &RunConfig::dt, "sampling interval in years");
        b.option("--bid-ask", &RunConfig::bid_ask, "bid-ask spread per unit");
        b.option("--r", &RunConfig::r, "riskless rate");
        b.option("--f", &RunConfig::f, "fund-flow parameter");
        b.option("--w0", &RunConfig::w0, "initial wealth");
        b.option("--alpha-conf", &RunConfig::alpha_conf, "leverage bound confidence");
        b.flag("--swap-refine", &RunConfig::swap_refine, "swap refinement after each greedy step");
        b.flag("--compare-sdp", &RunConfig::compare_sdp, "also solve the relaxation and compare");
        b.flag("--timing", &RunConfig::timing, "greedy timing versus number of assets");
        b.flag("--serial", &RunConfig::serial, "serial reference kernels");
        b.flag("--report", &RunConfig::report, "write the load report");
        s->seed_opt = s->app->add_option("--seed", s->seed, "random seed");
        b.option("--kind", &RunConfig::kind, "synth fixture kind");
        b.option("--m", &RunConfig::m, "synth rows");
        b.option("--n", &RunConfig::n, "synth assets");
        subs.push_back(std::move(s));
    }

    std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(reversed.begin(), reversed.end());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            Sub& s = *subs[i];
            if (!s.app->parsed()) continue;
            RunConfig config;
            if (!s.config_path.empty()) {
                std::ifstream in(s.config_path);
                if (!in) throw DataError("cannot read config " + s.config_path);
                Json j;
                try {
                    j = Json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw DataError(std::string("config: ") + e.what());
                }
                config = config_from_json(j);
            }
            s.binder->apply(config);
            if (s.k_opt->count() > 0) parse_k(s.k_text, config);
            if (s.zero_fraction_opt->count() > 0) config.zero_fraction = s.zero_fraction;
            if (s.seed_opt->count() > 0) config.seed = s.seed;
            if (!s.flags.rho_sweep.empty()) config.rho_sweep = s.flags.rho_sweep;
            config.command = names[i].first;

            if (config.command == "decompose") return cmd_decompose(config);
            if (config.command == "sparse") return cmd_sparse(config);
            if (config.command == "covsel") return cmd_covsel(config);
            if (config.command == "backtest") return cmd_backtest(config);
            return cmd_synth(config);
        }
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace smr::app
