#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "smr/common.hpp"
#include "smr/data_io.hpp"

namespace smr::synth {

/// Panel with integer timestamps 0..m-1 and labels A1..An.
TimePanel make_panel(Matrix values, double dt = 1.0 / 252.0);

/// VAR(1) or VAR(2) levels S_t = S_{t-1} A1 (+ S_{t-2} A2) + Z_t with a
/// random stable transition (spectral radius of the companion form
/// scaled to `radius`) and N(0, I) noise.
struct VarFixture {
    TimePanel panel;
    std::vector<Matrix> transitions;
};
VarFixture var_panel(std::size_t n, std::size_t m, std::size_t order, double radius, std::uint64_t seed);

/// Random walks, except columns i and j which are R + u and R - u, with u an
/// OU spread with speed `lambda` and R a common random walk rescaled to
/// `common_scale` times the sample variance of u.
struct PlantedSpread {
    TimePanel panel;
    std::vector<std::size_t> support;  // {i, j}
};
PlantedSpread planted_ou_spread(std::size_t n, std::size_t m, std::size_t i, std::size_t j, double lambda,
                                std::uint64_t seed, double common_scale = 2.0);

/// i.i.d. Gaussian rows whose covariance is block-structured: the first
/// `block` columns share one factor (pairwise correlation `corr`), the rest
/// are independent unit-variance noise.
struct PlantedBlock {
    TimePanel panel;
    std::vector<std::size_t> block;
};
PlantedBlock planted_block(std::size_t n, std::size_t block, std::size_t m, double corr, std::uint64_t seed);

/// S1 a random walk, S2 = S1 + stationary AR(1) noise (coefficient `a`).
TimePanel cointegrated_pair(std::size_t m, double a, std::uint64_t seed);

/// Independent AR(1) columns with the given coefficients, unit noise.
TimePanel independent_ar1(const std::vector<double>& coefficients, std::size_t m, std::uint64_t seed);

/// Independent random walks.
TimePanel random_walks(std::size_t n, std::size_t m, std::uint64_t seed);

/// A = G G' and B = H H'/n + I/2 with standard normal G, H.
struct SpdPair {
    Matrix a;
    Matrix b;
};
SpdPair random_spd_pair(std::size_t n, std::uint64_t seed);

/// H H'/n + I/2.
Matrix random_spd(std::size_t n, std::uint64_t seed);

}  // namespace smr::synth
