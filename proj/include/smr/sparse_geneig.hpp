#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "smr/common.hpp"
#include "smr/data_io.hpp"
#include "smr/estimation.hpp"
#include "smr/ou_trading.hpp"

namespace smr {

enum class Sense { Maximize, Minimize };
enum class SparseMethod { Greedy, Sdp, Oracle };

/// Optimize x'Ax / x'Bx subject to Card(x) <= k, ||x||_2 = 1.
///
/// Minimize is solved as maximization of x'Bx / x'Ax, with A shifted by the
/// geneig ridge policy when it is singular.
struct SparseProblem {
    Matrix a;
    Matrix b;
    std::size_t k = 1;
    Sense sense = Sense::Maximize;
};

void validate(const SparseProblem& problem);

struct SparsePortfolio {
    Vector weights;                    // unit l2 norm, exact zeros off support
    std::vector<std::size_t> support;  // sorted
    double value = 0.0;                // x'Ax / x'Bx of the original pair
    SparseMethod method = SparseMethod::Greedy;
    /// SDP relaxation bound in the problem's own sense: an upper bound on
    /// the optimum for Maximize, a lower bound for Minimize.
    std::optional<double> bound;
    bool certified = false;
    double nu = 0.0;
    std::optional<OuParams> ou;  // OU fit of the portfolio track, when one was built
    Vector track;
};

struct GreedyOptions {
    /// After each forward step, swap members for non-members while the
    /// objective improves (best swap first, at most 10 n swaps). Breaks the
    /// nesting of supports across k.
    bool swap_refine = false;
};

/// Forward greedy search: grows the support one index at a time, scanning
/// every remaining index and solving the restricted dense problem. Returns
/// one portfolio per cardinality 1..k. Candidate values within 1e-12 are
/// broken toward the lowest index.
std::vector<SparsePortfolio> greedy_search(const SparseProblem& problem, Execution exec = Execution::Parallel,
                                           const GreedyOptions& options = {});

/// Best support of size min(k, n) by enumeration (supersets dominate
/// subsets, so smaller supports need not be visited). Refuses when
/// C(n, k) > 1e6.
SparsePortfolio exhaustive_oracle(const SparseProblem& problem, Execution exec = Execution::Parallel);

/// Swap-based local improvement of a support (see GreedyOptions).
SparsePortfolio swap_refine(const SparseProblem& problem, const SparsePortfolio& start,
                            Execution exec = Execution::Parallel);

struct SdpOptions {
    double tolerance = 1e-6;
    int max_iterations = 50000;
};

struct SdpResult {
    SparsePortfolio portfolio;
    double bound = 0.0;          // certified dual bound in the problem's own sense
    double primal_value = 0.0;   // Tr(A Y) / Tr(B Y) at the final PSD iterate
    double relaxation_value = 0.0;  // maximization-form dual bound
    bool certified = false;
    int iterations = 0;
    double rank_ratio = 0.0;     // second / first eigenvalue of Y
    Matrix y;
};

/// Semidefinite relaxation
///     max Tr(AY)  s.t.  1'|Y|1 <= k z,  Tr(Y) = z,  Tr(BY) = 1,  Y >= 0
/// solved by consensus ADMM over the PSD cone, the hyperplane Tr(BY) = 1
/// and the cone 1'|Y|1 <= k Tr(Y). The bound is the dual value
/// lambda_max(A + mu (kI - G), B) with |G_ij| <= 1, valid at every
/// iterate. The candidate is the leading eigenvector of Y truncated to its
/// k largest entries and re-solved densely on that support.
SdpResult sdp_relaxation(const SparseProblem& problem, const SdpOptions& options = {});

/// Problem-space helper: dense optimum restricted to `support`, embedded in
/// n dimensions with unit norm.
SparsePortfolio solve_on_support(const SparseProblem& problem, const std::vector<std::size_t>& support,
                                 SparseMethod method);

enum class TransitionEstimator { Ols, Lasso, Endogenous };

struct PipelineOptions {
    TransitionEstimator transition = TransitionEstimator::Ols;
    double lasso_gamma = 0.0;
    std::optional<double> lasso_zero_fraction;  // overrides lasso_gamma when set
    std::optional<double> covsel_rho;           // penalized covariance when set
    double endogenous_sigma = 0.0;
    bool center = true;
    SparseMethod method = SparseMethod::Greedy;
    Sense sense = Sense::Minimize;
    bool swap_refine = false;
    SdpOptions sdp;
    Execution exec = Execution::Parallel;
};

/// Estimated model and the (A'Gamma A, Gamma) pencil built from it.
struct PredictabilityPencil {
    VarModel model;
    Matrix numerator;
    Matrix denominator;
    std::vector<std::string> warnings;
};

PredictabilityPencil build_pencil(const TimePanel& panel, const PipelineOptions& options);

/// Estimate, sparsify with the requested method, then attach nu, the
/// portfolio track and its OU fit.
SparsePortfolio sparse_mean_reverting(const TimePanel& panel, std::size_t k, const PipelineOptions& options = {});

/// Portfolios for every cardinality 1..k_max.
std::vector<SparsePortfolio> sparse_path(const TimePanel& panel, std::size_t k_max,
                                         const PipelineOptions& options = {});

/// Attach nu, track and OU fit for a portfolio computed on `pencil`.
void annotate(SparsePortfolio& portfolio, const PredictabilityPencil& pencil, const TimePanel& panel);

std::string to_string(SparseMethod method);
std::string to_string(Sense sense);

}  // namespace smr
