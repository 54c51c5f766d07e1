#include <doctest.h>

#include <algorithm>

#include "smr/canonical.hpp"
#include "smr/geneig.hpp"
#include "smr/sparse_geneig.hpp"
#include "smr/synth.hpp"

using namespace smr;

namespace {

Matrix diag3() { return Vector::LinSpaced(3, 1, 3).array().square().matrix().asDiagonal(); }

void check_portfolio(const SparseProblem& p, const SparsePortfolio& s) {
    CHECK(s.support.size() <= p.k);
    CHECK(std::is_sorted(s.support.begin(), s.support.end()));
    CHECK(std::abs(s.weights.norm() - 1.0) <= 1e-12);
    for (Index i = 0; i < s.weights.size(); ++i)
        if (!std::binary_search(s.support.begin(), s.support.end(), static_cast<std::size_t>(i)))
            CHECK(s.weights(i) == 0.0);
    CHECK(std::abs(s.value - rayleigh(p.a, p.b, s.weights)) <= 1e-10 * std::max(1.0, std::abs(s.value)));
}

// Brute force over every support of size exactly k, independent of the library's enumeration.
double brute_force(const SparseProblem& p) {
    const Index n = p.a.rows();
    double best = p.sense == Sense::Maximize ? -1e300 : 1e300;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != p.k) continue;
        std::vector<std::size_t> s;
        for (Index i = 0; i < n; ++i)
            if (mask & (1u << i)) s.push_back(static_cast<std::size_t>(i));
        const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(principal_submatrix(p.a, s),
                                                                 principal_submatrix(p.b, s));
        const double v = p.sense == Sense::Maximize ? es.eigenvalues().maxCoeff() : es.eigenvalues().minCoeff();
        best = p.sense == Sense::Maximize ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

}  // namespace

TEST_SUITE("sparse") {
TEST_CASE("greedy on a diagonal pencil") {
    const SparseProblem p{diag3(), Matrix::Identity(3, 3), 3, Sense::Maximize};
    const auto path = greedy_search(p);
    REQUIRE(path.size() == 3);
    CHECK(path[0].support == std::vector<std::size_t>{2});
    for (const auto& s : path) {
        CHECK(s.value == 9.0);
        check_portfolio(p, s);
    }
    // ties broken toward the lowest index
    CHECK(path[1].support == std::vector<std::size_t>{0, 2});
    CHECK(path[2].support == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("greedy at full cardinality equals the dense solution") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto pair = synth::random_spd_pair(7, seed);
        const auto path = greedy_search({pair.a, pair.b, 7, Sense::Maximize});
        const double dense = generalized_eig(pair.a, pair.b).eigenvalues(0);
        CHECK(std::abs(path.back().value - dense) <= 1e-8 * dense);
    }
}

TEST_CASE("greedy, oracle and brute force on random n = 8 pencils") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pair = synth::random_spd_pair(8, 50 + seed);
        const SparseProblem full{pair.a, pair.b, 8, Sense::Maximize};
        const auto path = greedy_search(full);
        for (std::size_t k = 1; k <= 8; ++k) {
            const SparseProblem p{pair.a, pair.b, k, Sense::Maximize};
            const auto best = exhaustive_oracle(p);
            check_portfolio(p, best);
            check_portfolio(p, path[k - 1]);
            CHECK(best.support.size() == k);
            CHECK(std::abs(best.value - brute_force(p)) <= 1e-10 * best.value);
            CHECK(path[k - 1].value <= best.value + 1e-10);
            if (k > 1) CHECK(path[k - 1].value >= path[k - 2].value);
            if (k > 1)
                CHECK(std::includes(path[k - 1].support.begin(), path[k - 1].support.end(),
                                    path[k - 2].support.begin(), path[k - 2].support.end()));
        }
        CHECK(path[0].value == exhaustive_oracle({pair.a, pair.b, 1, Sense::Maximize}).value);
        CHECK(path[7].value == exhaustive_oracle({pair.a, pair.b, 8, Sense::Maximize}).value);
    }
}

TEST_CASE("minimize sense") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto pair = synth::random_spd_pair(6, 80 + seed);
        const auto path = greedy_search({pair.a, pair.b, 6, Sense::Minimize});
        std::size_t arg = 0;
        for (Index i = 1; i < 6; ++i)
            if (pair.a(i, i) / pair.b(i, i) < pair.a(arg, arg) / pair.b(arg, arg)) arg = static_cast<std::size_t>(i);
        CHECK(path[0].support == std::vector<std::size_t>{arg});
        for (std::size_t k = 1; k <= 6; ++k) {
            const SparseProblem p{pair.a, pair.b, k, Sense::Minimize};
            check_portfolio(p, path[k - 1]);
            const auto best = exhaustive_oracle(p);
            CHECK(std::abs(best.value - brute_force(p)) <= 1e-9 * std::abs(best.value));
            CHECK(best.value <= path[k - 1].value + 1e-10);
            if (k > 1) CHECK(path[k - 1].value <= path[k - 2].value);
        }
        const double dense_min = generalized_eig(pair.a, pair.b).eigenvalues(5);
        CHECK(std::abs(path.back().value - dense_min) <= 1e-8 * std::abs(dense_min));
    }
}

TEST_CASE("minimize with a singular numerator") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    const SparseProblem p{a, Matrix::Identity(3, 3), 1, Sense::Minimize};
    const auto best = exhaustive_oracle(p);
    CHECK(best.support == std::vector<std::size_t>{2});
    CHECK(std::abs(best.value) <= 1e-12);
    CHECK(greedy_search(p)[0].support == std::vector<std::size_t>{2});
}

TEST_CASE("oracle examples and guard") {
    const auto best = exhaustive_oracle({diag3(), Matrix::Identity(3, 3), 1, Sense::Maximize});
    CHECK(best.support == std::vector<std::size_t>{2});
    CHECK(best.value == 9.0);
    CHECK(best.method == SparseMethod::Oracle);
    const auto pair = synth::random_spd_pair(2, 4);
    CHECK(std::abs(exhaustive_oracle({pair.a, pair.b, 2, Sense::Maximize}).value -
                   generalized_eig(pair.a, pair.b).eigenvalues(0)) <= 1e-12);
    const Matrix big = Matrix::Identity(30, 30);
    CHECK_THROWS_AS(exhaustive_oracle({big, big, 15, Sense::Maximize}), DomainError);
}

TEST_CASE("problem validation") {
    const Matrix i3 = Matrix::Identity(3, 3);
    CHECK_THROWS_AS(validate({i3, i3, 0, Sense::Maximize}), DomainError);
    CHECK_THROWS_AS(validate({i3, i3, 4, Sense::Maximize}), DomainError);
    CHECK_THROWS_AS(validate({i3, Matrix::Identity(2, 2), 1, Sense::Maximize}), DomainError);
}

TEST_CASE("swap refinement never hurts and stays within the oracle") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto pair = synth::random_spd_pair(8, 200 + seed);
        const auto plain = greedy_search({pair.a, pair.b, 8, Sense::Maximize});
        const auto refined = greedy_search({pair.a, pair.b, 8, Sense::Maximize}, Execution::Parallel, {true});
        for (std::size_t k = 1; k <= 8; ++k) {
            const SparseProblem p{pair.a, pair.b, k, Sense::Maximize};
            check_portfolio(p, refined[k - 1]);
            CHECK(refined[k - 1].value >= plain[k - 1].value - 1e-12);
            CHECK(refined[k - 1].value <= exhaustive_oracle(p).value + 1e-10);
        }
    }
}

TEST_CASE("parallel and serial agree bit for bit") {
    const auto pair = synth::random_spd_pair(10, 7);
    for (Sense sense : {Sense::Maximize, Sense::Minimize}) {
        const auto a = greedy_search({pair.a, pair.b, 10, sense}, Execution::Parallel, {true});
        const auto b = greedy_search({pair.a, pair.b, 10, sense}, Execution::Serial, {true});
        for (std::size_t k = 0; k < 10; ++k) {
            CHECK(a[k].support == b[k].support);
            CHECK(a[k].weights == b[k].weights);
        }
        const auto o1 = exhaustive_oracle({pair.a, pair.b, 4, sense}, Execution::Parallel);
        const auto o2 = exhaustive_oracle({pair.a, pair.b, 4, sense}, Execution::Serial);
        CHECK(o1.weights == o2.weights);
    }
    const TimePanel panel = synth::var_panel(6, 500, 1, 0.8, 3).panel;
    PipelineOptions par, ser;
    par.method = ser.method = SparseMethod::Sdp;
    par.sdp.max_iterations = ser.sdp.max_iterations = 500;
    ser.exec = Execution::Serial;
    const auto p1 = sparse_path(panel, 6, par);
    const auto p2 = sparse_path(panel, 6, ser);
    for (std::size_t k = 0; k < 6; ++k) {
        CHECK(p1[k].weights == p2[k].weights);
        CHECK(p1[k].bound == p2[k].bound);
    }
}

TEST_CASE("solve on a given support") {
    const auto pair = synth::random_spd_pair(5, 9);
    const SparseProblem p{pair.a, pair.b, 3, Sense::Maximize};
    const auto s = solve_on_support(p, {1, 3, 4}, SparseMethod::Greedy);
    check_portfolio(p, s);
    const std::vector<std::size_t> idx{1, 3, 4};
    const double ref = Eigen::GeneralizedSelfAdjointEigenSolver<Matrix>(principal_submatrix(pair.a, idx),
                                                                       principal_submatrix(pair.b, idx))
                           .eigenvalues()
                           .maxCoeff();
    CHECK(std::abs(s.value - ref) <= 1e-10 * ref);
}

TEST_CASE("SDP at full cardinality matches the dense solution") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto pair = synth::random_spd_pair(5, 300 + seed);
        const auto r = sdp_relaxation({pair.a, pair.b, 5, Sense::Maximize});
        const double dense = generalized_eig(pair.a, pair.b).eigenvalues(0);
        CHECK(std::abs(r.bound - dense) <= 1e-5 * dense);
        CHECK(std::abs(r.portfolio.value - dense) <= 1e-8 * dense);
        CHECK(r.certified);
    }
}

TEST_CASE("SDP on the diagonal pencil") {
    const SparseProblem p{diag3(), Matrix::Identity(3, 3), 1, Sense::Maximize};
    const auto r = sdp_relaxation(p);
    CHECK(r.portfolio.support == std::vector<std::size_t>{2});
    CHECK(r.portfolio.value == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(r.bound >= 9.0 - 1e-9);
    check_portfolio(p, r.portfolio);
}

TEST_CASE("SDP bound dominates the oracle") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto pair = synth::random_spd_pair(6, 400 + seed);
        for (std::size_t k = 1; k <= 6; ++k) {
            for (Sense sense : {Sense::Maximize, Sense::Minimize}) {
                const SparseProblem p{pair.a, pair.b, k, sense};
                const auto r = sdp_relaxation(p);
                const double best = exhaustive_oracle(p).value;
                check_portfolio(p, r.portfolio);
                REQUIRE(r.portfolio.bound.has_value());
                if (sense == Sense::Maximize) {
                    CHECK(best <= r.bound + 1e-5 * std::max(1.0, best));
                    CHECK(r.portfolio.value <= best + 1e-10);
                } else {
                    CHECK(r.bound <= best + 1e-5 * std::max(1.0, best));
                    CHECK(r.portfolio.value >= best - 1e-10);
                }
                // tight when Y is rank one with a leading vector already k-sparse
                const Eigen::SelfAdjointEigenSolver<Matrix> es(r.y);
                const Vector lead = es.eigenvectors().col(5);
                const auto nonzero = (lead.array().abs() > 1e-6 * lead.cwiseAbs().maxCoeff()).count();
                if (r.certified && r.rank_ratio <= 1e-6 && static_cast<std::size_t>(nonzero) <= k)
                    CHECK(std::abs(r.portfolio.value - r.bound) <= 1e-5 * std::max(1.0, std::abs(r.bound)));
            }
        }
    }
}

TEST_CASE("SDP iteration cap returns an uncertified but valid bound") {
    const auto pair = synth::random_spd_pair(6, 11);
    SdpOptions options;
    options.max_iterations = 50;
    const SparseProblem p{pair.a, pair.b, 3, Sense::Maximize};
    const auto r = sdp_relaxation(p, options);
    CHECK(!r.certified);
    CHECK(r.iterations == 50);
    CHECK(exhaustive_oracle(p).value <= r.bound + 1e-9);
    check_portfolio(p, r.portfolio);
}

TEST_CASE("pipeline recovers a planted spread") {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto fx = synth::planted_ou_spread(8, 2000, 1, 4, 10.0, 1000 + seed);
        if (sparse_mean_reverting(fx.panel, 2).support == fx.support) ++hits;
    }
    CHECK(hits >= 17);
}

TEST_CASE("pipeline at full cardinality matches the least predictable Box-Tiao portfolio") {
    const TimePanel panel = synth::var_panel(5, 3000, 1, 0.8, 12).panel;
    const auto s = sparse_mean_reverting(panel, 5);
    const auto basis = box_tiao(make_lagged_pair(panel, true));
    CHECK(std::abs(s.nu - basis.predictability(4)) <= 1e-8);
    CHECK(s.track.size() == panel.rows());
    CHECK(s.ou.has_value());
}

TEST_CASE("pipeline at cardinality one matches the oracle") {
    const TimePanel panel = synth::var_panel(6, 1000, 1, 0.8, 13).panel;
    PipelineOptions oracle;
    oracle.method = SparseMethod::Oracle;
    const auto g = sparse_mean_reverting(panel, 1);
    const auto o = sparse_mean_reverting(panel, 1, oracle);
    CHECK(g.support == o.support);
    CHECK(g.value == o.value);
}

TEST_CASE("pipeline estimator variants") {
    const TimePanel panel = synth::var_panel(6, 800, 1, 0.8, 14).panel;
    PipelineOptions options;
    options.transition = TransitionEstimator::Lasso;
    options.lasso_zero_fraction = 0.3;
    CHECK(zero_fraction(build_pencil(panel, options).model.a) >= 0.3);
    options = {};
    options.covsel_rho = 0.05;
    const auto pencil = build_pencil(panel, options);
    CHECK(Eigen::LLT<Matrix>(pencil.denominator).info() == Eigen::Success);
    options = {};
    options.transition = TransitionEstimator::Endogenous;
    options.endogenous_sigma = 1e-3;
    const auto endo = build_pencil(panel, options);
    CHECK(endo.model.method == EstimationMethod::Endogenous);
    const auto path = sparse_path(panel, 3, options);
    CHECK(path.size() == 3);
}

TEST_CASE("method and sense names") {
    CHECK(to_string(SparseMethod::Greedy) == "greedy");
    CHECK(to_string(SparseMethod::Sdp) == "sdp");
    CHECK(to_string(SparseMethod::Oracle) == "oracle");
    CHECK(to_string(Sense::Maximize) == "max");
    CHECK(to_string(Sense::Minimize) == "min");
}
}
