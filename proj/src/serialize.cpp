#include "smr/serialize.hpp"

#include <fstream>

namespace smr {

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const LoadReport& report) {
    return Json{{"rows_read", report.rows_read},
                {"dropped_rows", report.dropped_rows},
                {"filled_rows", report.filled_rows}};
}

std::string to_string(OuFlag flag) {
    switch (flag) {
        case OuFlag::Ok: return "ok";
        case OuFlag::NotMeanReverting: return "not_mean_reverting";
        case OuFlag::Unresolved: return "unresolved";
    }
    return "unknown";
}

std::string to_string(EstimationMethod method) {
    switch (method) {
        case EstimationMethod::Ols: return "ols";
        case EstimationMethod::Lasso: return "lasso";
        case EstimationMethod::Endogenous: return "endogenous";
    }
    return "unknown";
}

std::string to_string(CanonicalFlavor flavor) { return flavor == CanonicalFlavor::BoxTiao ? "box_tiao" : "johansen"; }

std::string to_string(BacktestStatus status) { return status == BacktestStatus::Completed ? "completed" : "bankrupt"; }

Json to_json(const VarModel& model, const std::vector<std::string>& labels) {
    return Json{{"method", to_string(model.method)},
                {"labels", labels},
                {"a", to_json(model.a)},
                {"gamma", to_json(model.gamma)},
                {"sigma_noise", to_json(model.sigma_noise)},
                {"sigma_scalar", model.sigma_scalar},
                {"penalty", model.penalty},
                {"spectral_radius", model.spectral_radius},
                {"warnings", model.warnings}};
}

Json to_json(const CanonicalBasis& basis, const std::vector<std::string>& labels) {
    return Json{{"flavor", to_string(basis.flavor)},
                {"labels", labels},
                {"predictability", to_json(basis.predictability)},
                {"weights", to_json(basis.weights)},
                {"warnings", basis.warnings}};
}

Json to_json(const OuParams& p) {
    return Json{{"mu", p.mu},
                {"lambda", p.lambda},
                {"sigma", p.sigma},
                {"dt", p.dt},
                {"n_obs", p.n_obs},
                {"ar_coefficient", p.ar_coefficient},
                {"lambda_stderr", p.lambda_stderr},
                {"p_value", p.p_value},
                {"flag", to_string(p.flag)}};
}

Json to_json(const PrecisionEstimate& e, const std::vector<std::string>& labels) {
    Json clusters = Json::array();
    for (const auto& c : e.clusters) clusters.push_back(c);
    return Json{{"rho", e.rho},
                {"labels", labels},
                {"edge_threshold", e.edge_threshold},
                {"edges", e.graph.edge_count()},
                {"clusters", clusters},
                {"kkt_residual", e.kkt_residual},
                {"sweeps", e.sweeps},
                {"converged", e.converged},
                {"x", to_json(e.x)},
                {"warnings", e.warnings}};
}

Json to_json(const SparsePortfolio& p, const std::vector<std::string>& labels) {
    std::vector<std::string> names;
    for (auto i : p.support) names.push_back(labels.at(i));
    Json out{{"method", to_string(p.method)},
             {"k", p.support.size()},
             {"support", names},
             {"weights", to_json(p.weights)},
             {"value", p.value},
             {"nu", p.nu},
             {"certified", p.certified}};
    out["bound"] = p.bound ? Json(*p.bound) : Json(nullptr);
    out["ou"] = p.ou ? to_json(*p.ou) : Json(nullptr);
    return out;
}

Json to_json(const BacktestResult& r) {
    return Json{{"status", to_string(r.status)},
                {"sharpe", r.sharpe},
                {"zero_variance", r.zero_variance},
                {"turnover", r.turnover},
                {"cost_paid", r.cost_paid},
                {"max_leverage", r.max_leverage},
                {"final_wealth", r.wealth.empty() ? 0.0 : r.wealth.back()},
                {"wealth", r.wealth},
                {"shares", r.shares}};
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << str();
}

void write_json(const std::filesystem::path& path, const Json& json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << json.dump(2) << '\n';
}

std::string join_labels(const std::vector<std::string>& labels, const std::vector<std::size_t>& support) {
    std::string out;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i) out += ';';
        out += labels.at(support[i]);
    }
    return out;
}

}  // namespace smr
