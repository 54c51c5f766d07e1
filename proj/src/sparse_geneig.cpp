#include "smr/sparse_geneig.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "smr/covsel.hpp"
#include "smr/geneig.hpp"
#include "smr/parallel.hpp"
#include "sparse_internal.hpp"

namespace smr {

namespace detail {

OrientedPencil orient(const SparseProblem& problem) {
    const Matrix a = symmetrize(problem.a);
    const Matrix b = symmetrize(problem.b);
    if (problem.sense == Sense::Maximize) return {a, b};
    Matrix den = a;
    den.diagonal().array() += required_ridge(a);
    return {b, den};
}

RestrictedTop restricted_top(const OrientedPencil& pencil, const std::vector<std::size_t>& support) {
    const GenEigResult eig =
        generalized_eig(principal_submatrix(pencil.num, support), principal_submatrix(pencil.den, support));
    RestrictedTop out;
    out.value = eig.eigenvalues(0);
    out.x = Vector::Zero(pencil.num.rows());
    for (std::size_t i = 0; i < support.size(); ++i)
        out.x(static_cast<Index>(support[i])) = eig.eigenvectors(static_cast<Index>(i), 0);
    return out;
}

SparsePortfolio make_portfolio(const SparseProblem& problem, const std::vector<std::size_t>& support, Vector x,
                               SparseMethod method) {
    SparsePortfolio p;
    x /= x.norm();
    canonical_sign(x);
    p.weights = std::move(x);
    p.support = support;
    p.value = rayleigh(problem.a, problem.b, p.weights);
    p.method = method;
    return p;
}

}  // namespace detail

namespace {

std::vector<std::size_t> with_index(std::vector<std::size_t> support, std::size_t i) {
    support.insert(std::lower_bound(support.begin(), support.end(), i), i);
    return support;
}

// Binomial coefficients up to n, saturating at a large sentinel.
std::vector<std::vector<std::uint64_t>> binomials(std::size_t n) {
    constexpr std::uint64_t cap = std::uint64_t{1} << 62;
    std::vector<std::vector<std::uint64_t>> c(n + 1, std::vector<std::uint64_t>(n + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) {
        c[i][0] = 1;
        for (std::size_t j = 1; j <= i; ++j) c[i][j] = std::min(cap, c[i - 1][j - 1] + c[i - 1][j]);
    }
    return c;
}

// idx-th k-subset of {0..n-1} in lexicographic order.
std::vector<std::size_t> unrank(std::uint64_t idx, std::size_t n, std::size_t k,
                                const std::vector<std::vector<std::uint64_t>>& c) {
    std::vector<std::size_t> out;
    std::size_t next = 0;
    for (std::size_t pos = 0; pos < k; ++pos) {
        for (std::size_t v = next; v < n; ++v) {
            const std::uint64_t count = c[n - v - 1][k - pos - 1];
            if (idx < count) {
                out.push_back(v);
                next = v + 1;
                break;
            }
            idx -= count;
        }
    }
    return out;
}

}  // namespace

std::string to_string(SparseMethod method) {
    switch (method) {
        case SparseMethod::Greedy: return "greedy";
        case SparseMethod::Sdp: return "sdp";
        case SparseMethod::Oracle: return "oracle";
    }
    return "unknown";
}

std::string to_string(Sense sense) { return sense == Sense::Maximize ? "max" : "min"; }

void validate(const SparseProblem& problem) {
    const Index n = problem.a.rows();
    if (n == 0 || problem.a.cols() != n || problem.b.rows() != n || problem.b.cols() != n)
        throw DomainError("sparse problem: A and B must be square and of equal size");
    if (problem.k < 1 || problem.k > static_cast<std::size_t>(n))
        throw DomainError("sparse problem: cardinality must lie in [1, n]");
}

SparsePortfolio solve_on_support(const SparseProblem& problem, const std::vector<std::size_t>& support,
                                 SparseMethod method) {
    const auto pencil = detail::orient(problem);
    auto top = detail::restricted_top(pencil, support);
    return detail::make_portfolio(problem, support, std::move(top.x), method);
}

SparsePortfolio swap_refine(const SparseProblem& problem, const SparsePortfolio& start, Execution exec) {
    validate(problem);
    const auto pencil = detail::orient(problem);
    const auto n = static_cast<std::size_t>(problem.a.rows());
    std::vector<std::size_t> support = start.support;
    double value = detail::restricted_top(pencil, support).value;

    for (std::size_t swaps = 0; swaps < 10 * n; ++swaps) {
        std::vector<std::size_t> outside;
        for (std::size_t i = 0; i < n; ++i)
            if (!std::binary_search(support.begin(), support.end(), i)) outside.push_back(i);
        const std::size_t s = support.size();
        const auto count = static_cast<Index>(s * outside.size());
        if (count == 0) break;
        std::vector<double> values(static_cast<std::size_t>(count));
        parallel_for(count, exec, [&](Index t) {
            const auto p = static_cast<std::size_t>(t) / outside.size();
            const auto q = static_cast<std::size_t>(t) % outside.size();
            std::vector<std::size_t> trial = support;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(p));
            trial = with_index(std::move(trial), outside[q]);
            values[static_cast<std::size_t>(t)] = detail::restricted_top(pencil, trial).value;
        });
        std::size_t best = values.size();
        double best_value = value;
        for (std::size_t t = 0; t < values.size(); ++t) {
            if (detail::improves(values[t], best_value)) {
                best = t;
                best_value = values[t];
            }
        }
        if (best == values.size()) break;
        support.erase(support.begin() + static_cast<std::ptrdiff_t>(best / outside.size()));
        support = with_index(std::move(support), outside[best % outside.size()]);
        value = best_value;
    }
    auto top = detail::restricted_top(pencil, support);
    return detail::make_portfolio(problem, support, std::move(top.x), start.method);
}

std::vector<SparsePortfolio> greedy_search(const SparseProblem& problem, Execution exec,
                                           const GreedyOptions& options) {
    validate(problem);
    const auto pencil = detail::orient(problem);
    const auto n = static_cast<std::size_t>(problem.a.rows());

    std::vector<SparsePortfolio> path;
    std::vector<std::size_t> support;
    // The first step scans singletons, where the restricted optimum is A_ii / B_ii.
    for (std::size_t k = 1; k <= problem.k; ++k) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < n; ++i)
            if (!std::binary_search(support.begin(), support.end(), i)) candidates.push_back(i);
        std::vector<double> values(candidates.size());
        parallel_for(static_cast<Index>(candidates.size()), exec, [&](Index c) {
            const auto slot = static_cast<std::size_t>(c);
            values[slot] = detail::restricted_top(pencil, with_index(support, candidates[slot])).value;
        });
        std::size_t best = 0;
        for (std::size_t c = 1; c < candidates.size(); ++c)
            if (detail::improves(values[c], values[best])) best = c;
        support = with_index(std::move(support), candidates[best]);

        auto top = detail::restricted_top(pencil, support);
        SparsePortfolio p = detail::make_portfolio(problem, support, std::move(top.x), SparseMethod::Greedy);
        if (options.swap_refine) {
            p = swap_refine(problem, p, exec);
            support = p.support;
        }
        path.push_back(std::move(p));
    }
    return path;
}

SparsePortfolio exhaustive_oracle(const SparseProblem& problem, Execution exec) {
    validate(problem);
    const auto n = static_cast<std::size_t>(problem.a.rows());
    const std::size_t k = problem.k;
    const auto c = binomials(n);
    const std::uint64_t total = c[n][k];
    if (total > 1000000) throw DomainError("exhaustive_oracle: C(n, k) exceeds the 1e6 enumeration guard");

    const auto pencil = detail::orient(problem);
    std::vector<double> values(total);
    parallel_for(static_cast<Index>(total), exec, [&](Index idx) {
        values[static_cast<std::size_t>(idx)] =
            detail::restricted_top(pencil, unrank(static_cast<std::uint64_t>(idx), n, k, c)).value;
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (detail::improves(values[i], values[best])) best = i;
    const auto support = unrank(best, n, k, c);
    auto top = detail::restricted_top(pencil, support);
    return detail::make_portfolio(problem, support, std::move(top.x), SparseMethod::Oracle);
}

PredictabilityPencil build_pencil(const TimePanel& panel, const PipelineOptions& options) {
    const LaggedPair pair = make_lagged_pair(panel, options.center);
    PredictabilityPencil out;
    VarModel& model = out.model;
    switch (options.transition) {
        case TransitionEstimator::Ols:
            model = ols_transition(pair);
            break;
        case TransitionEstimator::Lasso: {
            const double gamma = options.lasso_zero_fraction
                                     ? lasso_penalty_for_sparsity(pair, *options.lasso_zero_fraction)
                                     : options.lasso_gamma;
            model = lasso_transition(pair, gamma, options.exec);
            break;
        }
        case TransitionEstimator::Endogenous:
            model.method = EstimationMethod::Endogenous;
            model.gamma = sample_covariance(pair.current);
            break;
    }

    std::optional<Matrix> precision;
    if (options.covsel_rho) {
        const PrecisionEstimate est = graphical_lasso(model.gamma, *options.covsel_rho);
        for (const auto& w : est.warnings) out.warnings.push_back(w);
        precision = est.x;
        const Index n = est.x.rows();
        model.gamma = symmetrize(Eigen::LLT<Matrix>(est.x).solve(Matrix::Identity(n, n)));
    }
    if (options.transition == TransitionEstimator::Endogenous) {
        const EndogenousModel endo = precision ? endogenous_transition_from_precision(*precision, options.endogenous_sigma)
                                               : endogenous_transition(model.gamma, options.endogenous_sigma);
        model.a = endo.a;
        model.sigma_scalar = endo.sigma;
        model.sigma_noise = endo.sigma * Matrix::Identity(endo.a.rows(), endo.a.rows());
        model.spectral_radius = spectral_radius(endo.a);
        for (const auto& w : endo.warnings) model.warnings.push_back(w);
    }
    for (const auto& w : model.warnings) out.warnings.push_back(w);
    out.numerator = symmetrize(model.a.transpose() * model.gamma * model.a);
    out.denominator = model.gamma;
    return out;
}

void annotate(SparsePortfolio& portfolio, const PredictabilityPencil& pencil, const TimePanel& panel) {
    portfolio.nu = rayleigh(pencil.numerator, pencil.denominator, portfolio.weights);
    portfolio.track = panel.values * portfolio.weights;
    try {
        portfolio.ou = estimate_ou(portfolio.track, panel.dt);
    } catch (const DomainError&) {
        portfolio.ou.reset();
    }
}

namespace {

SparsePortfolio solve_one(const SparseProblem& problem, const PipelineOptions& options) {
    switch (options.method) {
        case SparseMethod::Greedy:
            return greedy_search(problem, options.exec, {options.swap_refine}).back();
        case SparseMethod::Oracle:
            return exhaustive_oracle(problem, options.exec);
        case SparseMethod::Sdp:
            return sdp_relaxation(problem, options.sdp).portfolio;
    }
    throw DomainError("unknown sparse method");
}

}  // namespace

SparsePortfolio sparse_mean_reverting(const TimePanel& panel, std::size_t k, const PipelineOptions& options) {
    const PredictabilityPencil pencil = build_pencil(panel, options);
    SparsePortfolio p = solve_one({pencil.numerator, pencil.denominator, k, options.sense}, options);
    annotate(p, pencil, panel);
    return p;
}

std::vector<SparsePortfolio> sparse_path(const TimePanel& panel, std::size_t k_max, const PipelineOptions& options) {
    const PredictabilityPencil pencil = build_pencil(panel, options);
    std::vector<SparsePortfolio> path;
    if (options.method == SparseMethod::Greedy) {
        path = greedy_search({pencil.numerator, pencil.denominator, k_max, options.sense}, options.exec,
                             {options.swap_refine});
    } else {
        validate({pencil.numerator, pencil.denominator, k_max, options.sense});
        path.resize(k_max);
        // Independent instances; the oracle parallelizes internally.
        const Execution outer = options.method == SparseMethod::Sdp ? options.exec : Execution::Serial;
        parallel_for(static_cast<Index>(k_max), outer, [&](Index i) {
            PipelineOptions inner = options;
            if (outer == Execution::Parallel) inner.exec = Execution::Serial;
            path[static_cast<std::size_t>(i)] = solve_one(
                {pencil.numerator, pencil.denominator, static_cast<std::size_t>(i) + 1, options.sense}, inner);
        });
    }
    for (auto& p : path) annotate(p, pencil, panel);
    return path;
}

}  // namespace smr
