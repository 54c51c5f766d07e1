#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smr/common.hpp"
#include "smr/data_io.hpp"

namespace smr {

/// Simple undirected graph as sorted adjacency lists.
struct Graph {
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> adj;

    explicit Graph(std::size_t nodes = 0) : n(nodes), adj(nodes) {}
    void add_edge(std::size_t i, std::size_t j);
    bool has_edge(std::size_t i, std::size_t j) const;
    std::size_t edge_count() const;
};

using Partition = std::vector<std::vector<std::size_t>>;

struct GlassoOptions {
    bool penalize_diagonal = true;
    int max_sweeps = 500;
    double tolerance = 1e-7;        // KKT residual target
    double edge_threshold = 1e-5;   // relative to max |x_ij|
    int inner_max_sweeps = 2000;
    double inner_tolerance = 1e-12;
};

/// Penalized inverse-covariance estimate
///     max_X log det X - Tr(Sigma X) - rho sum_ij |X_ij|.
struct PrecisionEstimate {
    Matrix x;
    double rho = 0.0;
    double edge_threshold = 1e-5;
    Graph graph;
    Partition clusters;
    double kkt_residual = 0.0;
    int sweeps = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // objective after each outer sweep
    std::vector<std::string> warnings;
};

/// Primal block coordinate ascent: each column/row of X is updated by an
/// exact maximization (a LASSO subproblem solved with the shared coordinate
/// descent kernel), so the objective never decreases and every iterate
/// stays positive definite.
PrecisionEstimate graphical_lasso(const Matrix& sigma, double rho, const GlassoOptions& options = {});

/// log det X - Tr(Sigma X) - rho * (sum |X_ij|, with or without diagonal).
double glasso_objective(const Matrix& x, const Matrix& sigma, double rho, bool penalize_diagonal = true);

/// max-norm KKT violation: for x_ij != 0, |W_ij - Sigma_ij - rho sign(x_ij)|;
/// for x_ij = 0, max(0, |W_ij - Sigma_ij| - rho), with W = X^{-1}.
double glasso_kkt_residual(const Matrix& x, const Matrix& sigma, double rho, bool penalize_diagonal = true);

/// Edge (i, j) iff |x_ij| > threshold * max |x|.
Graph dependence_graph(const Matrix& x, double relative_threshold);

/// Connected components (union-find), each sorted, ordered by smallest member.
Partition connected_components(const Graph& g);
Partition clusters(const PrecisionEstimate& estimate);

struct ChordalityResult {
    bool chordal = false;
    /// Perfect elimination ordering when chordal (eliminate order[0] first).
    std::vector<std::size_t> elimination_order;
};

/// Maximum cardinality search followed by a perfect-elimination check.
ChordalityResult is_chordal(const Graph& g);

struct ClusterPanel {
    std::vector<std::size_t> members;
    TimePanel panel;
};

/// One sub-panel per cluster with at least `min_size` members.
std::vector<ClusterPanel> restrict_to_clusters(const TimePanel& panel, const PrecisionEstimate& estimate,
                                               std::size_t min_size);

}  // namespace smr
