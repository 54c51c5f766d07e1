#include "smr/covsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "smr/lasso_kernel.hpp"

namespace smr {

void Graph::add_edge(std::size_t i, std::size_t j) {
    if (i == j || has_edge(i, j)) return;
    adj[i].insert(std::lower_bound(adj[i].begin(), adj[i].end(), j), j);
    adj[j].insert(std::lower_bound(adj[j].begin(), adj[j].end(), i), i);
}

bool Graph::has_edge(std::size_t i, std::size_t j) const {
    return std::binary_search(adj[i].begin(), adj[i].end(), j);
}

std::size_t Graph::edge_count() const {
    std::size_t total = 0;
    for (const auto& a : adj) total += a.size();
    return total / 2;
}

double glasso_objective(const Matrix& x, const Matrix& sigma, double rho, bool penalize_diagonal) {
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) throw NumericalError("glasso objective: X is not positive definite");
    const Matrix l = llt.matrixL();
    const double logdet = 2.0 * l.diagonal().array().log().sum();
    double penalty = x.cwiseAbs().sum();
    if (!penalize_diagonal) penalty -= x.diagonal().cwiseAbs().sum();
    return logdet - (sigma.cwiseProduct(x)).sum() - rho * penalty;
}

double glasso_kkt_residual(const Matrix& x, const Matrix& sigma, double rho, bool penalize_diagonal) {
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) throw NumericalError("glasso KKT: X is not positive definite");
    const Index n = x.rows();
    const Matrix w = llt.solve(Matrix::Identity(n, n));
    double worst = 0.0;
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
            const double r = w(i, j) - sigma(i, j);
            const double pen = (i == j && !penalize_diagonal) ? 0.0 : rho;
            double v;
            if (x(i, j) > 0.0)
                v = std::abs(r - pen);
            else if (x(i, j) < 0.0)
                v = std::abs(r + pen);
            else
                v = std::max(0.0, std::abs(r) - pen);
            worst = std::max(worst, v);
        }
    }
    return worst;
}

PrecisionEstimate graphical_lasso(const Matrix& sigma_in, double rho, const GlassoOptions& options) {
    const Index n = sigma_in.rows();
    if (sigma_in.cols() != n || n == 0) throw DomainError("graphical_lasso: sigma must be square and non-empty");
    if (!(rho > 0.0)) throw DomainError("graphical_lasso: rho must be positive");
    const Matrix sigma = symmetrize(sigma_in);
    const double diag_pen = options.penalize_diagonal ? rho : 0.0;
    for (Index i = 0; i < n; ++i)
        if (!(sigma(i, i) + diag_pen > 0.0)) throw NumericalError("graphical_lasso: nonpositive diagonal");

    PrecisionEstimate est;
    est.rho = rho;
    est.edge_threshold = options.edge_threshold;

    Matrix x = Matrix::Zero(n, n);
    Matrix w = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        x(i, i) = 1.0 / (sigma(i, i) + diag_pen);
        w(i, i) = sigma(i, i) + diag_pen;
    }
    est.objective_trace.push_back(glasso_objective(x, sigma, rho, options.penalize_diagonal));
    est.kkt_residual = glasso_kkt_residual(x, sigma, rho, options.penalize_diagonal);

    std::vector<Index> others(static_cast<std::size_t>(std::max<Index>(n - 1, 0)));
    for (int sweep = 0; sweep < options.max_sweeps && est.kkt_residual > options.tolerance; ++sweep) {
        for (Index j = 0; j < n; ++j) {
            std::size_t t = 0;
            for (Index i = 0; i < n; ++i)
                if (i != j) others[t++] = i;
            // X11^{-1} from the current inverse by a Schur-complement downdate
            const Vector w12 = w(others, j);
            const Matrix theta = symmetrize(w(others, others) - w12 * w12.transpose() / w(j, j));
            const double d = sigma(j, j) + diag_pen;
            const Matrix q = d * theta;
            const Vector c = -sigma(others, j);
            Vector col = x(others, j);
            detail::lasso_coordinate_descent(q, c, rho, col, options.inner_tolerance, options.inner_max_sweeps);

            const Vector theta_col = theta * col;
            const double schur = 1.0 / d;
            x(others, j) = col;
            x(j, others) = col.transpose();
            x(j, j) = schur + col.dot(theta_col);

            w(j, j) = d;
            const Vector w_new = -d * theta_col;
            w(others, j) = w_new;
            w(j, others) = w_new.transpose();
            w(others, others) = theta + d * theta_col * theta_col.transpose();
        }
        // Refresh the inverse from scratch; factorization success confirms X is PD.
        Eigen::LLT<Matrix> llt(x);
        if (llt.info() != Eigen::Success) throw NumericalError("graphical_lasso: iterate lost positive definiteness");
        w = llt.solve(Matrix::Identity(n, n));
        w = symmetrize(w);
        est.sweeps = sweep + 1;
        est.objective_trace.push_back(glasso_objective(x, sigma, rho, options.penalize_diagonal));
        est.kkt_residual = glasso_kkt_residual(x, sigma, rho, options.penalize_diagonal);
    }
    est.converged = est.kkt_residual <= options.tolerance;
    if (!est.converged)
        est.warnings.push_back("graphical_lasso: sweep cap reached with KKT residual " +
                               std::to_string(est.kkt_residual));
    est.x = x;
    est.graph = dependence_graph(x, options.edge_threshold);
    est.clusters = connected_components(est.graph);
    return est;
}

Graph dependence_graph(const Matrix& x, double relative_threshold) {
    const auto n = static_cast<std::size_t>(x.rows());
    Graph g(n);
    const double cut = relative_threshold * x.cwiseAbs().maxCoeff();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(x(static_cast<Index>(i), static_cast<Index>(j))) > cut) g.add_edge(i, j);
    return g;
}

Partition connected_components(const Graph& g) {
    std::vector<std::size_t> parent(g.n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j : g.adj[i]) {
            std::size_t a = find(i), b = find(j);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    // Roots are the smallest members, so scanning nodes in order yields
    // clusters ordered by smallest member with sorted contents.
    Partition out;
    std::vector<std::size_t> slot(g.n, g.n);
    for (std::size_t v = 0; v < g.n; ++v) {
        const std::size_t r = find(v);
        if (slot[r] == g.n) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(v);
    }
    return out;
}

Partition clusters(const PrecisionEstimate& estimate) { return connected_components(estimate.graph); }

ChordalityResult is_chordal(const Graph& g) {
    const std::size_t n = g.n;
    std::vector<std::size_t> order(n);
    std::vector<std::size_t> weight(n, 0);
    std::vector<bool> numbered(n, false);
    for (std::size_t step = n; step-- > 0;) {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!numbered[v] && (best == n || weight[v] > weight[best])) best = v;
        numbered[best] = true;
        order[step] = best;
        for (std::size_t u : g.adj[best])
            if (!numbered[u]) ++weight[u];
    }
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;

    // Perfect elimination check: the later neighbours of each vertex must be
    // adjacent to the earliest of them.
    ChordalityResult result;
    result.chordal = true;
    for (std::size_t v : order) {
        std::vector<std::size_t> later;
        for (std::size_t u : g.adj[v])
            if (position[u] > position[v]) later.push_back(u);
        if (later.size() < 2) continue;
        const std::size_t first = *std::min_element(
            later.begin(), later.end(), [&](std::size_t a, std::size_t b) { return position[a] < position[b]; });
        for (std::size_t u : later) {
            if (u != first && !g.has_edge(first, u)) {
                result.chordal = false;
                return result;
            }
        }
    }
    result.elimination_order = order;
    return result;
}

std::vector<ClusterPanel> restrict_to_clusters(const TimePanel& panel, const PrecisionEstimate& estimate,
                                               std::size_t min_size) {
    if (panel.cols() != estimate.x.rows())
        throw DomainError("restrict_to_clusters: panel columns do not match the precision estimate");
    std::vector<ClusterPanel> out;
    for (const auto& members : estimate.clusters) {
        if (members.size() < min_size) continue;
        out.push_back({members, panel.select_columns(members)});
    }
    return out;
}

}  // namespace smr
