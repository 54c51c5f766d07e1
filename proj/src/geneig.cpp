#include "smr/geneig.hpp"

#include <cmath>

namespace smr {

namespace {

constexpr double kMaxCondition = 1e12;

// Ridge policy given the extreme eigenvalues of B.
double ridge_from_spectrum(double d_min, double d_max, double scale) {
    if (d_min > 0.0 && d_min * kMaxCondition >= d_max) return 0.0;
    for (double r = 1e-10 * scale; r <= 1e-6 * scale * (1 + 1e-12); r *= 10.0) {
        if (d_min + r > 0.0 && (d_min + r) * kMaxCondition >= d_max + r) return r;
    }
    throw ConditioningError("matrix is not positive definite after maximal ridge", d_min);
}

double trace_scale(const Matrix& b) {
    const double s = b.trace() / static_cast<double>(b.rows());
    return s > 0.0 ? s : 1.0;
}

void sort_descending(Vector& values, Matrix& vectors) {
    values.reverseInPlace();
    vectors.rowwise().reverseInPlace();
}

}  // namespace

void canonical_sign(Eigen::Ref<Vector> v) {
    Index best = 0;
    for (Index i = 1; i < v.size(); ++i)
        if (std::abs(v(i)) > std::abs(v(best))) best = i;
    if (v.size() > 0 && v(best) < 0.0) v = -v;
}

double required_ridge(const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(b), Eigen::EigenvaluesOnly);
    const Vector& d = es.eigenvalues();
    return ridge_from_spectrum(d(0), d(d.size() - 1), trace_scale(b));
}

GenEigResult generalized_eig(const SymmetricPair& pair) {
    const Index n = pair.a.rows();
    if (pair.a.cols() != n || pair.b.rows() != n || pair.b.cols() != n)
        throw DomainError("generalized_eig: dimension mismatch");
    if (pair.ridge < 0.0) throw DomainError("generalized_eig: negative ridge");
    const Matrix a = symmetrize(pair.a);
    Matrix b = symmetrize(pair.b);
    b.diagonal().array() += pair.ridge;

    GenEigResult out;
    out.ridge = pair.ridge;

    Eigen::LLT<Matrix> llt(b);
    bool use_llt = llt.info() == Eigen::Success;
    if (use_llt) {
        const Vector diag = Matrix(llt.matrixL()).diagonal();
        const double ratio = diag.maxCoeff() / diag.minCoeff();
        use_llt = diag.minCoeff() > 0.0 && ratio * ratio <= kMaxCondition;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> es;
    if (use_llt) {
        const Matrix half = llt.matrixL().solve(a);
        const Matrix c = llt.matrixL().solve(half.transpose());
        es.compute(symmetrize(c));
        out.eigenvectors = llt.matrixU().solve(es.eigenvectors());
    } else {
        Eigen::SelfAdjointEigenSolver<Matrix> bs(b);
        const Vector& d = bs.eigenvalues();
        const double r = ridge_from_spectrum(d(0), d(n - 1), trace_scale(b));
        out.ridge += r;
        const Vector inv_sqrt = (d.array() + r).rsqrt();
        const Matrix w = bs.eigenvectors() * inv_sqrt.asDiagonal() * bs.eigenvectors().transpose();
        es.compute(symmetrize(w * a * w));
        out.eigenvectors = w * es.eigenvectors();
        out.triangular_whitening = false;
    }
    out.eigenvalues = es.eigenvalues();
    sort_descending(out.eigenvalues, out.eigenvectors);
    for (Index j = 0; j < n; ++j) canonical_sign(out.eigenvectors.col(j));
    return out;
}

GenEigResult generalized_eig(const Matrix& a, const Matrix& b) { return generalized_eig(SymmetricPair{a, b, 0.0}); }

double rayleigh(const Matrix& a, const Matrix& b, const Vector& x) {
    const double den = x.dot(b * x);
    if (!(den > 0.0)) throw DomainError("rayleigh: x'Bx must be positive");
    return x.dot(a * x) / den;
}

Matrix inverse_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
    const Vector& d = es.eigenvalues();
    const double r = ridge_from_spectrum(d(0), d(d.size() - 1), trace_scale(m));
    const Vector s = (d.array() + r).rsqrt();
    return symmetrize(es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose());
}

}  // namespace smr
