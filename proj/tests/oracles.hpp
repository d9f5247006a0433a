#pragma once

// Independent reference implementations used only to check the library.
// These deliberately avoid the code paths under test: hand-rolled loops,
// long-double arithmetic and an eigendecomposition route.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "rrgen/types.hpp"

namespace oracle {

using rrgen::Index;
using rrgen::Matrix;
using rrgen::Vector;

/// Definition-based triple-loop product.
inline Matrix matmul_naive(const Matrix& a, const Matrix& b) {
    Matrix out = Matrix::Zero(a.rows(), b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j)
            for (Index k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
}

/// Definition-based Kronecker fill, entry by entry.
inline Matrix kron_naive(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    return out;
}

/// r^T s^{-1} r through the explicit inverse square root s^{-1/2} = V D^{-1/2} V^T.
inline double quad_form_eig(const Matrix& s, const Vector& r) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    const Matrix inv_sqrt = es.eigenvectors() *
                            es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                            es.eigenvectors().transpose();
    return (inv_sqrt * r).squaredNorm();
}

/// Normal-equation least squares in extended precision: y z^T (z z^T)^{-1}
/// via long-double Gaussian elimination with partial pivoting.
inline Matrix lstsq_normal_longdouble(const Matrix& y, const Matrix& z) {
    const Index n = z.rows();
    const Index rhs = y.rows();
    std::vector<std::vector<long double>> aug(
        static_cast<std::size_t>(n), std::vector<long double>(static_cast<std::size_t>(n + rhs), 0.0L));
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (Index k = 0; k < z.cols(); ++k)
                acc += static_cast<long double>(z(i, k)) * static_cast<long double>(z(j, k));
            aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = acc;
        }
        for (Index r = 0; r < rhs; ++r) {
            long double acc = 0.0L;
            for (Index k = 0; k < z.cols(); ++k)
                acc += static_cast<long double>(z(i, k)) * static_cast<long double>(y(r, k));
            aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + r)] = acc;
        }
    }
    for (Index col = 0; col < n; ++col) {
        Index pivot = col;
        for (Index row = col + 1; row < n; ++row)
            if (std::fabs(static_cast<double>(aug[row][col])) >
                std::fabs(static_cast<double>(aug[pivot][col])))
                pivot = row;
        std::swap(aug[static_cast<std::size_t>(pivot)], aug[static_cast<std::size_t>(col)]);
        for (Index row = 0; row < n; ++row) {
            if (row == col) continue;
            const long double f = aug[row][col] / aug[col][col];
            for (Index j = col; j < n + rhs; ++j) aug[row][j] -= f * aug[col][j];
        }
    }
    Matrix x(rhs, n);
    for (Index r = 0; r < rhs; ++r)
        for (Index i = 0; i < n; ++i)
            x(r, i) = static_cast<double>(aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + r)] /
                                          aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]);
    return x;
}

/// Adaptive Simpson quadrature.
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fb, double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    // Pre-split into uniform panels so a localized bump cannot hide from the
    // first coarse Simpson estimate.
    const int panels = 64;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + i * h;
        const double hi = lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_rec(f, lo, hi, flo, fhi, fmid, whole, tol / panels, 48);
    }
    return total;
}

/// Chi-squared density, straight from the formula.
inline double chi2_density(double x, double dof) {
    if (x <= 0.0) return 0.0;
    const double half = dof / 2.0;
    return std::exp((half - 1.0) * std::log(x) - x / 2.0 - half * std::log(2.0) - std::lgamma(half));
}

/// Tail-truncated numerical CDF of the chi-squared distribution.
inline double chi2_cdf_quadrature(double x, double dof, double tol = 1e-10) {
    if (x <= 0.0) return 0.0;
    return integrate([dof](double t) { return chi2_density(t, dof); }, 1e-300, x, tol);
}

inline double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Empirical quantile (sorted-copy, nearest-rank interpolation).
inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - w) + v[hi] * w;
}

} // namespace oracle
