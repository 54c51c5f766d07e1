#include <doctest.h>

#include <cmath>
#include <random>

#include "smr/geneig.hpp"
#include "smr/synth.hpp"

using namespace smr;

namespace {
Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

void check_invariants(const Matrix& a, const Matrix& b, const GenEigResult& r) {
    const Index n = a.rows();
    for (Index i = 0; i < n; ++i) {
        const Vector v = r.eigenvectors.col(i);
        const double res = (a * v - r.eigenvalues(i) * b * v).norm();
        CHECK(res <= 1e-8 * (a.norm() + std::abs(r.eigenvalues(i)) * b.norm()));
        CHECK(v.dot(b * v) == doctest::Approx(1.0).epsilon(1e-10));
        for (Index j = 0; j < i; ++j) CHECK(std::abs(v.dot(b * r.eigenvectors.col(j))) <= 1e-8);
        if (i > 0) CHECK(r.eigenvalues(i) <= r.eigenvalues(i - 1));
    }
}
}  // namespace

TEST_SUITE("geneig") {
TEST_CASE("ordinary eigenproblem") {
    const auto r = generalized_eig(diag2(1, 2), Matrix::Identity(2, 2));
    CHECK(r.eigenvalues(0) == doctest::Approx(2.0));
    CHECK(r.eigenvalues(1) == doctest::Approx(1.0));
}

TEST_CASE("A equal to B gives unit eigenvalues") {
    const Matrix b = synth::random_spd(5, 1);
    const auto r = generalized_eig(b, b);
    for (Index i = 0; i < 5; ++i) CHECK(r.eigenvalues(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("2x2 closed form roots") {
    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    // det(lambda B - A) = 4 lambda^2 - 10 lambda + 3
    const auto r = generalized_eig(a, diag2(1, 4));
    CHECK(r.eigenvalues(0) == doctest::Approx((5.0 + std::sqrt(13.0)) / 4.0).epsilon(1e-14));
    CHECK(r.eigenvalues(1) == doctest::Approx((5.0 - std::sqrt(13.0)) / 4.0).epsilon(1e-14));
    check_invariants(a, diag2(1, 4), r);
}

TEST_CASE("rayleigh quotient") {
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    CHECK(rayleigh(diag2(1, 2), Matrix::Identity(2, 2), e1) == 1.0);
    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    CHECK(rayleigh(a, diag2(1, 4), Vector::Ones(2)) == doctest::Approx(1.2).epsilon(1e-15));
    CHECK_THROWS_AS(rayleigh(a, diag2(1, 4), Vector::Zero(2)), DomainError);
}

TEST_CASE("eigenvectors reproduce their eigenvalues") {
    const auto p = synth::random_spd_pair(6, 11);
    const auto r = generalized_eig(p.a, p.b);
    for (Index i = 0; i < 6; ++i)
        CHECK(rayleigh(p.a, p.b, r.eigenvectors.col(i)) == doctest::Approx(r.eigenvalues(i)).epsilon(1e-10));
}

TEST_CASE("inverse square root") {
    CHECK(inverse_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-14));
    const Matrix r = inverse_sqrt(diag2(4, 9));
    CHECK(r(0, 0) == doctest::Approx(0.5));
    CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(std::abs(r(0, 1)) < 1e-15);
    const Matrix m = synth::random_spd(5, 2);
    const Matrix s = inverse_sqrt(m);
    CHECK((s * m * s - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((s - s.transpose()).norm() == 0.0);
}

TEST_CASE("random pairs: invariants and agreement with independent solvers") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 2 + seed % 9;
        const auto p = synth::random_spd_pair(n, seed);
        const auto r = generalized_eig(p.a, p.b);
        CHECK(r.triangular_whitening);
        CHECK(r.ridge == 0.0);
        check_invariants(p.a, p.b, r);

        // Ordinary eigenvalues of B^{-1/2} A B^{-1/2}.
        const Matrix s = inverse_sqrt(p.b);
        Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(s * p.a * s));
        // Eigen's own generalized solver as a second reference.
        Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> gs(p.a, p.b);
        for (Index i = 0; i < r.eigenvalues.size(); ++i) {
            const Index j = r.eigenvalues.size() - 1 - i;
            CHECK(std::abs(r.eigenvalues(i) - es.eigenvalues()(j)) <= 1e-8 * std::max(1.0, std::abs(r.eigenvalues(i))));
            CHECK(std::abs(r.eigenvalues(i) - gs.eigenvalues()(j)) <= 1e-8 * std::max(1.0, std::abs(r.eigenvalues(i))));
        }
    }
}

TEST_CASE("rayleigh is scale invariant") {
    const auto p = synth::random_spd_pair(4, 5);
    const Vector x = Vector::LinSpaced(4, 1.0, 2.0);
    const double base = rayleigh(p.a, p.b, x);
    for (double c : {-3.0, 1e-3, 7.5}) CHECK(rayleigh(p.a, p.b, c * x) == doctest::Approx(base).epsilon(1e-13));
}

TEST_CASE("random directions never exceed the top eigenvalue") {
    const auto p = synth::random_spd_pair(5, 9);
    const double top = generalized_eig(p.a, p.b).eigenvalues(0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    double best = -1e300;
    for (int t = 0; t < 10000; ++t) {
        Vector x(5);
        for (Index i = 0; i < 5; ++i) x(i) = normal(rng);
        best = std::max(best, rayleigh(p.a, p.b, x.normalized()));
    }
    CHECK(best <= top + 1e-8);
}

TEST_CASE("sign convention: largest entry positive") {
    const auto p = synth::random_spd_pair(6, 3);
    const auto r = generalized_eig(p.a, p.b);
    for (Index j = 0; j < 6; ++j) {
        Index arg = 0;
        r.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(r.eigenvectors(arg, j) > 0.0);
    }
    Vector v(3);
    v << 0.5, -2.0, 1.0;
    canonical_sign(v);
    CHECK(v(1) == 2.0);
}

TEST_CASE("near-singular B gets a ridge") {
    Matrix b = Matrix::Zero(3, 3);
    b(0, 0) = 1.0;
    b(1, 1) = 1.0;  // rank 2
    const auto r = generalized_eig(Matrix::Identity(3, 3), b);
    CHECK(r.ridge > 0.0);
    CHECK(r.ridge <= 1e-6 * b.trace() / 3.0 * (1 + 1e-12));
    CHECK(std::isfinite(r.eigenvalues(0)));
    CHECK(required_ridge(Matrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("indefinite B is a conditioning error") {
    Matrix b = Matrix::Identity(2, 2);
    b(1, 1) = -1.0;
    try {
        generalized_eig(Matrix::Identity(2, 2), b);
        FAIL("expected ConditioningError");
    } catch (const ConditioningError& e) {
        CHECK(e.smallest_eigenvalue() == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(inverse_sqrt(b), ConditioningError);
}

TEST_CASE("dimension mismatch") {
    CHECK_THROWS_AS(generalized_eig(Matrix::Identity(2, 2), Matrix::Identity(3, 3)), DomainError);
}
}
