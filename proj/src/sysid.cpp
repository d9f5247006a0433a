#include "rrgen/sysid.hpp"

namespace rrgen {

DataMatrices build_data_matrices(const IoRecord& rec, Index past) {
    if (past < 1) throw std::invalid_argument("build_data_matrices: past horizon must be >= 1");
    if (rec.u.cols() != rec.y.cols())
        throw std::invalid_argument("build_data_matrices: u and y sample counts differ");

    const Index m = rec.n_in();
    const Index l = rec.n_out();
    const Index n = rec.samples();
    const Index rows = past * (m + l) + m;
    const Index cols = n - past;
    if (cols < 1)
        throw std::invalid_argument("build_data_matrices: record too short; need more than " +
                                    std::to_string(past) + " samples, have " + std::to_string(n));

    DataMatrices out;
    out.past = past;
    out.n_in = m;
    out.n_out = l;
    out.y.resize(l, cols);
    out.z.resize(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        out.y.col(j) = rec.y.col(past + j);
        for (Index i = 0; i < past; ++i) {
            out.z.block(i * (m + l), j, m, 1) = rec.u.col(j + i);
            out.z.block(i * (m + l) + m, j, l, 1) = rec.y.col(j + i);
        }
        out.z.block(past * (m + l), j, m, 1) = rec.u.col(past + j);
    }
    return out;
}

MarkovEstimate estimate_markov(const Matrix& y_id, const Matrix& z_id, Index past, Index n_in) {
    MarkovEstimate est;
    est.past = past;
    est.n_in = n_in;
    est.n_out = y_id.rows();
    if (z_id.rows() != est.cols_expected())
        throw std::invalid_argument("estimate_markov: regressor row count does not match (past, n_in, n_out)");
    est.coeffs = lstsq(y_id, z_id);
    return est;
}

MarkovEstimate estimate_markov(const DataMatrices& data) {
    return estimate_markov(data.y, data.z, data.past, data.n_in);
}

GramInverse gram_inverse(const Matrix& z_id) {
    const Matrix gram = z_id * z_id.transpose();
    const Matrix g = chol(gram);  // throws NotPositiveDefinite on rank loss
    Matrix inv = g.triangularView<Eigen::Lower>().solve(Matrix::Identity(gram.rows(), gram.rows()));
    inv = g.transpose().triangularView<Eigen::Upper>().solve(inv);
    // Exact symmetry keeps downstream SPD checks honest.
    return GramInverse{0.5 * (inv + inv.transpose())};
}

double markov_error_variance_static(const Matrix& u_id, double sigma_e) {
    if (u_id.rows() != 1) throw std::invalid_argument("markov_error_variance_static: u_id must be 1 x N");
    const double energy = u_id.row(0).squaredNorm();
    if (energy <= 0.0) throw std::invalid_argument("markov_error_variance_static: zero input energy");
    return sigma_e * sigma_e / energy;
}

Matrix estimate_innovation_cov(const Matrix& y_id, const Matrix& z_id, const MarkovEstimate& est) {
    const Matrix resid = y_id - est.coeffs * z_id;
    const Index dof = resid.cols() - z_id.rows();
    if (dof < 1) throw std::invalid_argument("estimate_innovation_cov: not enough samples");
    return resid * resid.transpose() / static_cast<double>(dof);
}

} // namespace rrgen
