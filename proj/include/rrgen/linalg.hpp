#pragma once

#include <stdexcept>

#include "rrgen/types.hpp"

namespace rrgen {

/// Thrown when a regressor matrix is too ill-conditioned (or plainly rank
/// deficient with a non-trivial residual) for a least-squares fit to mean
/// anything.
class InsufficientExcitation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a matrix expected to be symmetric positive definite is not.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Checked matrix product. Eigen's operator* asserts in debug builds only;
/// this front door turns a shape mismatch into a recoverable error.
Matrix mat_mul(const Matrix& a, const Matrix& b);

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
template <typename DerivedA, typename DerivedB>
MatrixX<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                        const Eigen::MatrixBase<DerivedB>& b) {
    using Scalar = typename DerivedA::Scalar;
    MatrixX<Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b.derived();
    return out;
}

/// Lower-triangular Cholesky factor G with G * G^T == s.
/// Pivots below 1e-12 times the largest diagonal entry reject the input
/// as not positive definite.
Matrix chol(const Matrix& s);

/// r^T s^{-1} r evaluated through a Cholesky solve; equals the squared
/// 2-norm of the whitened vector s^{-1/2} r.
double quad_form(const Matrix& s, const Matrix& r);

/// Row-space least squares: the coefficient matrix X minimizing
/// ||y - X z||_F, i.e. y * z^T * (z z^T)^{-1} when z has full row rank.
///
/// Rank handling: a full-row-rank z (Gram condition estimate <= 1e12) is
/// solved through the normal equations. A rank-deficient z is accepted only
/// when the data are exactly consistent (an interpolating solution exists);
/// the minimum-norm solution is returned then. Anything else throws
/// InsufficientExcitation.
Matrix lstsq(const Matrix& y, const Matrix& z);

namespace detail {
/// Eigenvalue-based condition estimate of a symmetric PSD matrix.
double spd_condition_estimate(const Matrix& gram);
} // namespace detail

} // namespace rrgen
