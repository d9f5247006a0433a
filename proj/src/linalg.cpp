#include "rrgen/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace rrgen {

namespace {
constexpr double kPivotRel = 1e-12;       // SPD pivot floor, relative to max diagonal
constexpr double kMaxCondition = 1e12;    // Gram condition estimate beyond this -> reject
constexpr double kConsistentRel = 1e-9;   // relative residual treated as an exact fit
} // namespace

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("mat_mul: inner dimensions disagree (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    return a * b;
}

Matrix chol(const Matrix& s) {
    if (s.rows() != s.cols())
        throw std::invalid_argument("chol: matrix must be square");
    const Index n = s.rows();
    const double pivot_floor = kPivotRel * s.diagonal().maxCoeff();

    Matrix g = Matrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
        double d = s(j, j) - g.row(j).head(j).squaredNorm();
        if (!(d > pivot_floor))
            throw NotPositiveDefinite("chol: non-positive pivot at index " + std::to_string(j));
        g(j, j) = std::sqrt(d);
        for (Index i = j + 1; i < n; ++i) {
            double off = s(i, j) - g.row(i).head(j).dot(g.row(j).head(j));
            g(i, j) = off / g(j, j);
        }
    }
    return g;
}

double quad_form(const Matrix& s, const Matrix& r) {
    if (r.cols() != 1 || r.rows() != s.rows())
        throw std::invalid_argument("quad_form: r must be a column vector matching s");
    Matrix g = chol(s);
    Vector w = g.triangularView<Eigen::Lower>().solve(r.col(0));
    return w.squaredNorm();
}

namespace detail {
double spd_condition_estimate(const Matrix& gram) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    double lo = ev.minCoeff();
    double hi = ev.maxCoeff();
    if (hi <= 0.0) return std::numeric_limits<double>::infinity();
    if (lo <= 0.0) return std::numeric_limits<double>::infinity();
    return hi / lo;
}
} // namespace detail

Matrix lstsq(const Matrix& y, const Matrix& z) {
    if (y.cols() != z.cols())
        throw std::invalid_argument("lstsq: y and z must share a column count");

    const Matrix gram = z * z.transpose();
    const double cond = detail::spd_condition_estimate(gram);
    if (cond <= kMaxCondition) {
        Eigen::LLT<Matrix> llt(gram);
        if (llt.info() == Eigen::Success)
            return llt.solve(z * y.transpose()).transpose();
    }

    // Ill-conditioned or rank-deficient regressor. An exactly consistent
    // system (noiseless, collinear rows) still has a well-defined
    // minimum-norm answer; anything noisier is unidentifiable.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(z.transpose());
    Matrix x = cod.solve(y.transpose()).transpose();
    const double resid = (y - x * z).norm();
    const double scale = y.norm();
    if (resid <= kConsistentRel * (scale > 0 ? scale : 1.0))
        return x;
    throw InsufficientExcitation(
        "lstsq: regressor condition estimate " + std::to_string(cond) +
        " exceeds 1e12 and the system is inconsistent; data do not excite all modes");
}

} // namespace rrgen
