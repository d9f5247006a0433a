#pragma once

#include <stdexcept>

#include "rrgen/linalg.hpp"
#include "rrgen/types.hpp"

namespace rrgen {

/// Recorded plant input/output trajectory. Samples are columns:
/// u is m x N, y is l x N, with matching N.
struct IoRecord {
    Matrix u;
    Matrix y;

    Index samples() const { return u.cols(); }
    Index n_in() const { return u.rows(); }
    Index n_out() const { return y.rows(); }
};

/// Identification data pair: outputs stacked as a block row (Y) and the
/// lagged regressor matrix (Z). Column j of Z stacks, top to bottom, the
/// oldest-to-newest [u; y] pairs of the p-step past window followed by the
/// current input.
struct DataMatrices {
    Matrix y;   // l x (N - p)
    Matrix z;   // (p*(m+l) + m) x (N - p)
    Index past = 0;
    Index n_in = 0;
    Index n_out = 0;
};

/// Identified coefficient block, laid out as
/// [from_input(p-1), from_output(p-1), ..., from_input(0), from_output(0) | feedthrough].
/// from_input(j) and from_output(j) are the lag-j impulse-response blocks of
/// the one-step output predictor; feedthrough is the direct input-to-output
/// term.
struct MarkovEstimate {
    Matrix coeffs;   // l x (p*(m+l) + m)
    Index past = 0;  // p
    Index n_in = 0;  // m
    Index n_out = 0; // l

    Index cols_expected() const { return past * (n_in + n_out) + n_in; }

    /// Coefficient of u(k - 1 - lag); lag in [0, p).
    Eigen::Block<const Matrix> from_input(Index lag) const {
        check_lag(lag);
        return coeffs.block(0, (past - 1 - lag) * (n_in + n_out), n_out, n_in);
    }
    /// Coefficient of y(k - 1 - lag); lag in [0, p).
    Eigen::Block<const Matrix> from_output(Index lag) const {
        check_lag(lag);
        return coeffs.block(0, (past - 1 - lag) * (n_in + n_out) + n_in, n_out, n_out);
    }
    /// Coefficient of the current input u(k).
    Eigen::Block<const Matrix> feedthrough() const {
        return coeffs.block(0, past * (n_in + n_out), n_out, n_in);
    }

private:
    void check_lag(Index lag) const {
        if (lag < 0 || lag >= past) throw std::out_of_range("MarkovEstimate: lag out of range");
    }
};

/// Symmetric positive-definite inverse of the identification Gram matrix
/// (z z^T)^{-1}; the identification-error weight in the residual covariance.
struct GramInverse {
    Matrix g;
};

/// Build (Y, Z) from a record with past horizon p >= 1.
DataMatrices build_data_matrices(const IoRecord& rec, Index past);

/// Least-squares coefficient estimate from prepared data matrices.
MarkovEstimate estimate_markov(const Matrix& y_id, const Matrix& z_id, Index past, Index n_in);
MarkovEstimate estimate_markov(const DataMatrices& data);

/// (z z^T)^{-1} for a full-row-rank regressor.
GramInverse gram_inverse(const Matrix& z_id);

/// Scalar special case: variance of the static-gain estimation error,
/// sigma_e^2 / (u u^T), for a 1 x N identification input.
double markov_error_variance_static(const Matrix& u_id, double sigma_e);

/// Sample covariance of the identification residuals y - coeffs * z,
/// normalized by (columns - regressor rows). A convenience estimate of the
/// innovation covariance when it is not known a priori.
Matrix estimate_innovation_cov(const Matrix& y_id, const Matrix& z_id, const MarkovEstimate& est);

} // namespace rrgen
