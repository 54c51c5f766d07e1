#pragma once

#include <string>
#include <vector>

#include "smr/common.hpp"
#include "smr/data_io.hpp"
#include "smr/estimation.hpp"
#include "smr/ou_trading.hpp"

namespace smr {

enum class CanonicalFlavor { BoxTiao, Johansen };

/// Portfolios ranked by predictability (most predictable first).
struct CanonicalBasis {
    Matrix weights;            // column j is portfolio x_j, normalized x' B x = 1
    Vector predictability;     // nu_j (Box-Tiao) or squared canonical correlation (Johansen)
    CanonicalFlavor flavor = CanonicalFlavor::BoxTiao;
    Matrix portfolio_series;   // column j = S x_j
    std::vector<std::string> warnings;
};

/// nu(x) = x'A'Gamma A x / x'Gamma x.
double predictability(const VarModel& model, const Vector& x);

/// Box-Tiao decomposition: generalized eigenproblem (A'Gamma A, Gamma)
/// with the OLS transition estimate and Gamma the sample covariance of S_t.
/// Portfolio tracks span all m panel rows reconstructed from the pair.
CanonicalBasis box_tiao(const LaggedPair& pair);
/// Same decomposition on an already-estimated model; tracks from `panel`.
CanonicalBasis box_tiao(const VarModel& model, const Matrix& panel_values);

/// Johansen decomposition: lambda (L'L) - L'D (D'D)^{-1} D'L with L the
/// lagged levels and D the first differences, each demeaned.
CanonicalBasis johansen(const TimePanel& panel);

/// Mean-reversion speed of a portfolio track (OU fit).
double fit_portfolio_lambda(const Vector& series, double dt);

/// Per-portfolio summary: nu, OU lambda, p-value, sigma, half-life.
struct PortfolioStats {
    double nu = 0.0;
    OuParams ou;
};
std::vector<PortfolioStats> summarize(const CanonicalBasis& basis, double dt);

}  // namespace smr
