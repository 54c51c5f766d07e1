#include "smr/estimation.hpp"

#include <cmath>

#include "smr/lasso_kernel.hpp"

namespace smr {

namespace {

constexpr double kLassoTolerance = 1e-8;
constexpr int kLassoMaxSweeps = 10000;

void check_pair(const LaggedPair& pair) {
    if (pair.current.rows() != pair.lagged.rows() || pair.current.cols() != pair.lagged.cols())
        throw DomainError("lagged pair views have mismatched shapes");
    if (pair.lagged.rows() < 2) throw DataError("insufficient data for transition estimate");
}

void finish_model(VarModel& model, const LaggedPair& pair) {
    const Matrix resid = pair.current - pair.lagged * model.a;
    model.sigma_noise = symmetrize(resid.transpose() * resid / static_cast<double>(resid.rows()));
    model.gamma = sample_covariance(pair.current);
    model.spectral_radius = spectral_radius(model.a);
    if (model.spectral_radius > 1.0 + 1e-6)
        model.warnings.push_back("non-stationary transition: spectral radius " +
                                 std::to_string(model.spectral_radius));
}

Matrix lasso_columns(const Matrix& gram, const Matrix& cross, double gamma_pen, Execution exec,
                     std::vector<std::string>& warnings) {
    const Index n = gram.rows();
    Matrix a = Matrix::Zero(n, n);
    std::vector<detail::CoordinateDescentStatus> status(static_cast<std::size_t>(n));
    // Columns decouple; each one is solved in fixed cyclic order so the
    // result does not depend on the thread schedule.
#pragma omp parallel for schedule(static) if (exec == Execution::Parallel)
    for (Index j = 0; j < n; ++j) {
        Vector x = Vector::Zero(n);
        status[static_cast<std::size_t>(j)] = detail::lasso_coordinate_descent(
            gram, cross.col(j), 0.5 * gamma_pen, x, kLassoTolerance, kLassoMaxSweeps);
        a.col(j) = x;
    }
    for (Index j = 0; j < n; ++j) {
        const auto& s = status[static_cast<std::size_t>(j)];
        if (!s.converged)
            warnings.push_back("lasso column " + std::to_string(j) + " not converged after " +
                               std::to_string(s.sweeps) + " sweeps (max update " + std::to_string(s.max_update) + ")");
    }
    return a;
}

}  // namespace

Matrix sample_covariance(const Matrix& values) {
    if (values.rows() < 2) throw DataError("insufficient data: covariance needs at least 2 rows");
    const Matrix centered = values.rowwise() - values.colwise().mean();
    return symmetrize(centered.transpose() * centered / static_cast<double>(values.rows() - 1));
}

Matrix sample_covariance(const TimePanel& panel) { return sample_covariance(panel.values); }

double spectral_radius(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(a, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

VarModel ols_transition(const LaggedPair& pair) {
    check_pair(pair);
    VarModel model;
    model.method = EstimationMethod::Ols;
    Matrix gram = pair.lagged.transpose() * pair.lagged;
    const Matrix cross = pair.lagged.transpose() * pair.current;

    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const double d_min = es.eigenvalues()(0);
    const double d_max = es.eigenvalues()(gram.rows() - 1);
    if (!(d_max > 0.0)) throw NumericalError("lagged matrix is identically zero");
    if (d_min <= 1e-12 * d_max) {
        const double ridge = 1e-8 * gram.trace();
        gram.diagonal().array() += ridge;
        model.warnings.push_back("lagged matrix rank deficient; ridge " + std::to_string(ridge) + " applied");
    }
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) throw NumericalError("lagged Gram matrix not invertible after ridge");
    model.a = llt.solve(cross);
    finish_model(model, pair);
    return model;
}

VarModel lasso_transition(const LaggedPair& pair, double gamma_pen, Execution exec) {
    check_pair(pair);
    if (!(gamma_pen >= 0.0)) throw DomainError("lasso penalty must be nonnegative");
    VarModel model;
    model.method = EstimationMethod::Lasso;
    model.penalty = gamma_pen;
    const Matrix gram = pair.lagged.transpose() * pair.lagged;
    const Matrix cross = pair.lagged.transpose() * pair.current;
    model.a = lasso_columns(gram, cross, gamma_pen, exec, model.warnings);
    finish_model(model, pair);
    return model;
}

double zero_fraction(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return static_cast<double>((m.array() == 0.0).count()) / static_cast<double>(m.size());
}

double lasso_penalty_for_sparsity(const LaggedPair& pair, double target_zero_fraction) {
    check_pair(pair);
    if (!(target_zero_fraction >= 0.0 && target_zero_fraction <= 1.0))
        throw DomainError("target zero fraction must lie in [0, 1]");
    if (target_zero_fraction == 0.0) return 0.0;
    const Matrix gram = pair.lagged.transpose() * pair.lagged;
    const Matrix cross = pair.lagged.transpose() * pair.current;
    std::vector<std::string> ignored;
    auto fraction = [&](double g) { return zero_fraction(lasso_columns(gram, cross, g, Execution::Parallel, ignored)); };

    double lo = 0.0;
    double hi = 2.0 * cross.cwiseAbs().maxCoeff();
    if (fraction(lo) >= target_zero_fraction) return 0.0;
    for (int step = 0; step < 40; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (fraction(mid) >= target_zero_fraction)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

double lasso_objective(const LaggedPair& pair, const Matrix& a, double gamma_pen) {
    return (pair.current - pair.lagged * a).squaredNorm() + gamma_pen * a.cwiseAbs().sum();
}

Matrix permute_symmetric(const Matrix& m, const std::vector<std::size_t>& order) {
    return principal_submatrix(m, order);
}

Matrix psd_cholesky(const Matrix& m) {
    const Index n = m.rows();
    Matrix l = Matrix::Zero(n, n);
    const double scale = std::max(m.diagonal().cwiseAbs().maxCoeff(), 1e-300);
    const double tol = 1e-13 * scale;
    for (Index j = 0; j < n; ++j) {
        double d = m(j, j);
        for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d < -1e-8 * scale) throw ConditioningError("psd_cholesky: matrix is not positive semidefinite", d);
        if (d <= tol) continue;  // zero pivot: column stays zero
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Index i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

namespace {

EndogenousModel endogenous_from(const Matrix& precision, double lambda_max, double sigma) {
    EndogenousModel out;
    out.sigma = sigma;
    if (sigma * lambda_max > 1.0) {
        out.sigma = 0.99 / lambda_max;
        out.sigma_shrunk = true;
        out.warnings.push_back("sigma " + std::to_string(sigma) + " exceeds PSD limit; shrunk to " +
                               std::to_string(out.sigma));
    }
    const Index n = precision.rows();
    const Matrix target = Matrix::Identity(n, n) - out.sigma * precision;
    out.a = psd_cholesky(target).transpose();
    return out;
}

}  // namespace

EndogenousModel endogenous_transition(const Matrix& gamma, double sigma) {
    if (!(sigma >= 0.0)) throw DomainError("endogenous sigma must be nonnegative");
    const Index n = gamma.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(gamma));
    const Vector& d = es.eigenvalues();
    if (!(d(0) > 1e-14 * std::max(1.0, std::abs(d(n - 1)))))
        throw ConditioningError("endogenous_transition: covariance is not positive definite", d(0));
    // lambda_max(Gamma^{-1}) = 1 / lambda_min(Gamma)
    const Matrix precision = es.eigenvectors() * d.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    return endogenous_from(symmetrize(precision), 1.0 / d(0), sigma);
}

EndogenousModel endogenous_transition_from_precision(const Matrix& precision, double sigma) {
    if (!(sigma >= 0.0)) throw DomainError("endogenous sigma must be nonnegative");
    const Matrix k = symmetrize(precision);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
    const Vector& d = es.eigenvalues();
    if (!(d(0) > 0.0)) throw ConditioningError("endogenous_transition: precision is not positive definite", d(0));
    return endogenous_from(k, d(d.size() - 1), sigma);
}

}  // namespace smr
