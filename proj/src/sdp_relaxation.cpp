#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "smr/geneig.hpp"
#include "smr/sparse_geneig.hpp"
#include "sparse_internal.hpp"

namespace smr {

namespace {

Matrix soft(const Matrix& m, double t) {
    return m.unaryExpr([t](double v) { return std::copysign(std::max(std::abs(v) - t, 0.0), v); });
}

// Projection onto {Y : sum|Y_ij| <= k tr(Y)}. Returns the projection and the
// multiplier mu of the prox form soft(P + mu k I, mu).
std::pair<Matrix, double> project_l1_cone(const Matrix& p, double k) {
    auto excess = [&](const Matrix& y) { return y.cwiseAbs().sum() - k * y.trace(); };
    if (excess(p) <= 0.0) return {p, 0.0};
    auto at = [&](double mu) {
        Matrix q = p;
        q.diagonal().array() += mu * k;
        return soft(q, mu);
    };
    double lo = 0.0;
    double hi = std::max(1e-12, p.cwiseAbs().maxCoeff());
    while (excess(at(hi)) > 0.0 && hi < 1e300) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (excess(at(mid)) > 0.0 ? lo : hi) = mid;
    }
    return {at(hi), hi};
}

// lambda_max(M, B) for B = L L'.
struct TopEigen {
    Matrix l_inv;

    explicit TopEigen(const Matrix& b) {
        Eigen::LLT<Matrix> llt(b);
        if (llt.info() != Eigen::Success) throw NumericalError("sdp_relaxation: denominator not positive definite");
        l_inv = llt.matrixL().solve(Matrix::Identity(b.rows(), b.cols()));
    }

    double operator()(const Matrix& m) const {
        const Matrix w = symmetrize(l_inv * m * l_inv.transpose());
        return Eigen::SelfAdjointEigenSolver<Matrix>(w, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    }
};

// Dual value lambda_max(A + mu (kI - G), B), minimized over mu >= 0 for a
// fixed G with |G_ij| <= 1. Every such value bounds the relaxation.
double dual_bound(const TopEigen& top, const Matrix& a, const Matrix& g, double k, double mu_hint) {
    const Index n = a.rows();
    const Matrix shift = k * Matrix::Identity(n, n) - g;
    auto f = [&](double mu) { return top(a + mu * shift); };
    double best = f(0.0);
    if (mu_hint > 0.0) best = std::min(best, f(mu_hint));
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = std::max(4.0 * mu_hint, 1e-3 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 60; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({best, f1, f2});
}

std::vector<std::size_t> top_k_support(const Vector& v, std::size_t k) {
    std::vector<std::size_t> order(static_cast<std::size_t>(v.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(v(static_cast<Index>(i))) > std::abs(v(static_cast<Index>(j)));
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

SdpResult sdp_relaxation(const SparseProblem& problem, const SdpOptions& options) {
    validate(problem);
    const auto pencil = detail::orient(problem);
    const Index n = pencil.num.rows();
    const double k = static_cast<double>(problem.k);

    double den_ridge = required_ridge(pencil.den);
    Matrix den = pencil.den;
    den.diagonal().array() += den_ridge;

    // Work on scaled copies; the bound transforms back by scale_num / scale_den.
    const double scale_den = den.trace() / static_cast<double>(n);
    const double scale_num = std::max(pencil.num.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const Matrix a = pencil.num / scale_num;
    const Matrix b = den / scale_den;
    const double b_norm2 = b.squaredNorm();
    const TopEigen top(b);

    Matrix z = Matrix::Identity(n, n) / b.trace();
    Matrix u1 = Matrix::Zero(n, n), u2 = u1, u3 = u1;
    Matrix y1 = z, y2 = z, y3 = z;
    double rho = 1.0;
    double mu_cone = 0.0;
    double best_bound = top(a);  // dual value at mu = 0
    double primal_value = 0.0;
    bool certified = false;
    int iter = 0;

    for (iter = 1; iter <= options.max_iterations; ++iter) {
        // PSD block carries the objective -Tr(AY).
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(z - u1 + a / rho));
        const Vector ev = es.eigenvalues().cwiseMax(0.0);
        y1 = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();

        const Matrix v2 = z - u2;
        y2 = v2 - ((b.cwiseProduct(v2).sum() - 1.0) / b_norm2) * b;

        const Matrix p3 = symmetrize(z - u3);
        auto [proj, mu_p] = project_l1_cone(p3, k);
        y3 = std::move(proj);
        mu_cone = mu_p;

        const Matrix z_prev = z;
        z = (y1 + u1 + y2 + u2 + y3 + u3) / 3.0;
        u1 += y1 - z;
        u2 += y2 - z;
        u3 += y3 - z;

        const double r_norm = std::sqrt((y1 - z).squaredNorm() + (y2 - z).squaredNorm() + (y3 - z).squaredNorm()) /
                              std::max(1.0, z.norm());
        const double s_norm = rho * std::sqrt(3.0) * (z - z_prev).norm() /
                              std::max(1.0, rho * std::sqrt(u1.squaredNorm() + u2.squaredNorm() + u3.squaredNorm()));

        const bool check = iter % 50 == 0 || iter == options.max_iterations;
        if (check) {
            const double tb = b.cwiseProduct(y1).sum();
            primal_value = tb > 0.0 ? a.cwiseProduct(y1).sum() / tb : 0.0;
            if (mu_cone > 0.0) {
                Matrix q = p3;
                q.diagonal().array() += mu_cone * k;
                const Matrix g = (q / mu_cone).cwiseMax(-1.0).cwiseMin(1.0);
                best_bound = std::min(best_bound, dual_bound(top, a, g, k, rho * mu_cone));
            }
            const double gap = std::abs(best_bound - primal_value) / std::max(1.0, std::abs(best_bound));
            if (r_norm <= options.tolerance && s_norm <= options.tolerance && gap <= options.tolerance) {
                certified = true;
                break;
            }
            if (r_norm > 10.0 * s_norm) {
                rho *= 2.0;
                u1 /= 2.0;
                u2 /= 2.0;
                u3 /= 2.0;
            } else if (s_norm > 10.0 * r_norm) {
                rho /= 2.0;
                u1 *= 2.0;
                u2 *= 2.0;
                u3 *= 2.0;
            }
        }
    }

    SdpResult out;
    out.iterations = std::min(iter, options.max_iterations);
    out.y = y1 / scale_den;
    out.primal_value = primal_value * scale_num / scale_den;
    out.relaxation_value = best_bound * scale_num / scale_den;
    out.certified = certified && (den_ridge == 0.0 || problem.sense == Sense::Minimize);

    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(y1));
    const Vector ev = es.eigenvalues();
    out.rank_ratio = ev(n - 1) > 0.0 && n > 1 ? std::max(ev(n - 2), 0.0) / ev(n - 1) : 0.0;
    const Vector lead = es.eigenvectors().col(n - 1);

    if (problem.sense == Sense::Maximize) {
        out.bound = out.relaxation_value;
    } else {
        // min x'Ax/x'Bx >= 1/t - ridge/lambda_min(B) when A was shifted by ridge.
        const double a_ridge = required_ridge(symmetrize(problem.a));
        const double b_min = Eigen::SelfAdjointEigenSolver<Matrix>(symmetrize(problem.b), Eigen::EigenvaluesOnly)
                                 .eigenvalues()
                                 .minCoeff();
        out.bound = 1.0 / out.relaxation_value - (a_ridge + den_ridge) / b_min;
    }

    out.portfolio = solve_on_support(problem, top_k_support(lead, problem.k), SparseMethod::Sdp);
    out.portfolio.bound = out.bound;
    out.portfolio.certified = out.certified;
    return out;
}

}  // namespace smr
