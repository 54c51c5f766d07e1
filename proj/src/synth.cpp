#include "smr/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include "smr/estimation.hpp"
#include "smr/ou_trading.hpp"

namespace smr::synth {

namespace {

using Rng = std::mt19937_64;

Matrix gaussian(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    // Row-major fill keeps the draw order independent of Eigen's storage.
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

Matrix cumulative(const Matrix& steps) {
    Matrix out = steps;
    for (Index t = 1; t < out.rows(); ++t) out.row(t) += out.row(t - 1);
    return out;
}

}  // namespace

TimePanel make_panel(Matrix values, double dt) {
    TimePanel panel;
    panel.dt = dt;
    for (Index t = 0; t < values.rows(); ++t) panel.timestamps.push_back(std::to_string(t));
    for (Index j = 0; j < values.cols(); ++j) panel.labels.push_back("A" + std::to_string(j + 1));
    panel.values = std::move(values);
    return panel;
}

VarFixture var_panel(std::size_t n, std::size_t m, std::size_t order, double radius, std::uint64_t seed) {
    if (order < 1 || order > 2) throw DomainError("var_panel: order must be 1 or 2");
    Rng rng(seed);
    const auto nn = static_cast<Index>(n);
    std::vector<Matrix> transitions;
    for (std::size_t l = 0; l < order; ++l) transitions.push_back(gaussian(nn, nn, rng));

    // Companion matrix for the row-vector recursion.
    Matrix companion = Matrix::Zero(nn * static_cast<Index>(order), nn * static_cast<Index>(order));
    for (std::size_t l = 0; l < order; ++l) companion.block(nn * static_cast<Index>(l), 0, nn, nn) = transitions[l];
    if (order == 2) companion.block(0, nn, nn, nn) = Matrix::Identity(nn, nn);
    const double scale = radius / spectral_radius(companion);
    // Rescaling lag l by scale^(l+1) scales the companion spectrum by `scale`.
    for (std::size_t l = 0; l < order; ++l) transitions[l] *= std::pow(scale, static_cast<double>(l + 1));

    const Matrix noise = gaussian(static_cast<Index>(m), nn, rng);
    Matrix s = Matrix::Zero(static_cast<Index>(m), nn);
    for (Index t = 0; t < s.rows(); ++t) {
        s.row(t) = noise.row(t);
        for (std::size_t l = 0; l < order; ++l) {
            const Index back = t - 1 - static_cast<Index>(l);
            if (back >= 0) s.row(t) += s.row(back) * transitions[l];
        }
    }
    return {make_panel(std::move(s)), std::move(transitions)};
}

PlantedSpread planted_ou_spread(std::size_t n, std::size_t m, std::size_t i, std::size_t j, double lambda,
                                std::uint64_t seed, double common_scale) {
    if (i >= n || j >= n || i == j) throw DomainError("planted_ou_spread: invalid planted indices");
    const double dt = 1.0 / 252.0;
    Rng rng(seed);
    const double step = std::sqrt(dt);
    Matrix s = cumulative(step * gaussian(static_cast<Index>(m), static_cast<Index>(n), rng));
    Vector common = cumulative(step * gaussian(static_cast<Index>(m), 1, rng));
    const Vector spread = simulate_ou(m, lambda, 1.0, 0.0, dt, 0.0, rng);
    // Common trend rescaled to common_scale times the spread's sample variance.
    auto variance = [](const Vector& v) { return (v.array() - v.mean()).square().sum() / static_cast<double>(v.size()); };
    common *= std::sqrt(common_scale * variance(spread) / variance(common));
    s.col(static_cast<Index>(i)) = common + spread;
    s.col(static_cast<Index>(j)) = common - spread;
    std::vector<std::size_t> support{std::min(i, j), std::max(i, j)};
    return {make_panel(std::move(s), dt), support};
}

PlantedBlock planted_block(std::size_t n, std::size_t block, std::size_t m, double corr, std::uint64_t seed) {
    if (block > n) throw DomainError("planted_block: block larger than n");
    Rng rng(seed);
    Matrix x = gaussian(static_cast<Index>(m), static_cast<Index>(n), rng);
    const Vector factor = gaussian(static_cast<Index>(m), 1, rng);
    const auto b = static_cast<Index>(block);
    x.leftCols(b) = std::sqrt(1.0 - corr) * x.leftCols(b) + std::sqrt(corr) * factor.replicate(1, b);
    std::vector<std::size_t> members(block);
    for (std::size_t k = 0; k < block; ++k) members[k] = k;
    return {make_panel(std::move(x)), members};
}

TimePanel cointegrated_pair(std::size_t m, double a, std::uint64_t seed) {
    Rng rng(seed);
    const Matrix z = gaussian(static_cast<Index>(m), 2, rng);
    Matrix s(static_cast<Index>(m), 2);
    double walk = 0.0;
    double noise = 0.0;
    for (Index t = 0; t < s.rows(); ++t) {
        walk += z(t, 0);
        noise = a * noise + z(t, 1);
        s(t, 0) = walk;
        s(t, 1) = walk + noise;
    }
    return make_panel(std::move(s));
}

TimePanel independent_ar1(const std::vector<double>& coefficients, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    const auto n = static_cast<Index>(coefficients.size());
    const Matrix z = gaussian(static_cast<Index>(m), n, rng);
    Matrix s = z;
    for (Index t = 1; t < s.rows(); ++t)
        for (Index j = 0; j < n; ++j) s(t, j) = coefficients[static_cast<std::size_t>(j)] * s(t - 1, j) + z(t, j);
    return make_panel(std::move(s));
}

TimePanel random_walks(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    return make_panel(cumulative(gaussian(static_cast<Index>(m), static_cast<Index>(n), rng)));
}

SpdPair random_spd_pair(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    const auto nn = static_cast<Index>(n);
    const Matrix g = gaussian(nn, nn, rng);
    const Matrix h = gaussian(nn, nn, rng);
    return {symmetrize(g * g.transpose()),
            symmetrize(h * h.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(nn, nn))};
}

Matrix random_spd(std::size_t n, std::uint64_t seed) { return random_spd_pair(n, seed).b; }

}  // namespace smr::synth
