#include "smr/canonical.hpp"

#include "smr/geneig.hpp"

namespace smr {

namespace {

void check_range(CanonicalBasis& basis, const char* what) {
    for (Index j = 0; j < basis.predictability.size(); ++j) {
        const double v = basis.predictability(j);
        if (v < -1e-9 || v > 1.0 + 1e-9)
            basis.warnings.push_back(std::string(what) + " eigenvalue " + std::to_string(j) + " = " +
                                     std::to_string(v) + " outside [0, 1]");
    }
}

}  // namespace

double predictability(const VarModel& model, const Vector& x) {
    const Vector ax = model.a * x;
    const double den = x.dot(model.gamma * x);
    if (!(den > 0.0)) throw DomainError("predictability: x' Gamma x must be positive");
    return ax.dot(model.gamma * ax) / den;
}

CanonicalBasis box_tiao(const VarModel& model, const Matrix& panel_values) {
    const Matrix num = symmetrize(model.a.transpose() * model.gamma * model.a);
    const GenEigResult eig = generalized_eig(num, model.gamma);
    CanonicalBasis basis;
    basis.flavor = CanonicalFlavor::BoxTiao;
    basis.weights = eig.eigenvectors;
    basis.predictability = eig.eigenvalues;
    basis.portfolio_series = panel_values * basis.weights;
    basis.warnings = model.warnings;
    if (eig.ridge > 0.0) basis.warnings.push_back("covariance ridge " + std::to_string(eig.ridge) + " applied");
    check_range(basis, "Box-Tiao");
    return basis;
}

CanonicalBasis box_tiao(const LaggedPair& pair) {
    const VarModel model = ols_transition(pair);
    Matrix rows(pair.current.rows() + 1, pair.current.cols());
    rows.row(0) = pair.lagged.row(0);
    rows.bottomRows(pair.current.rows()) = pair.current;
    return box_tiao(model, rows);
}

CanonicalBasis johansen(const TimePanel& panel) {
    const Index m = panel.rows();
    if (m < 3) throw DataError("johansen: need at least 3 rows");
    Matrix lag = panel.values.topRows(m - 1);
    Matrix diff = panel.values.bottomRows(m - 1) - lag;
    lag.rowwise() -= lag.colwise().mean();
    diff.rowwise() -= diff.colwise().mean();

    const Matrix s11 = lag.transpose() * lag;
    const Matrix s10 = lag.transpose() * diff;
    const Matrix s00 = diff.transpose() * diff;
    Eigen::LLT<Matrix> llt(s00);
    if (llt.info() != Eigen::Success) throw NumericalError("johansen: difference covariance not invertible");
    const Matrix num = symmetrize(s10 * llt.solve(s10.transpose()));
    const GenEigResult eig = generalized_eig(num, s11);

    CanonicalBasis basis;
    basis.flavor = CanonicalFlavor::Johansen;
    basis.weights = eig.eigenvectors;
    basis.predictability = eig.eigenvalues;
    basis.portfolio_series = panel.values * basis.weights;
    if (eig.ridge > 0.0) basis.warnings.push_back("lagged covariance ridge " + std::to_string(eig.ridge) + " applied");
    check_range(basis, "Johansen");
    return basis;
}

double fit_portfolio_lambda(const Vector& series, double dt) { return estimate_ou(series, dt).lambda; }

std::vector<PortfolioStats> summarize(const CanonicalBasis& basis, double dt) {
    std::vector<PortfolioStats> out;
    for (Index j = 0; j < basis.weights.cols(); ++j)
        out.push_back({basis.predictability(j), estimate_ou(basis.portfolio_series.col(j), dt)});
    return out;
}

}  // namespace smr
