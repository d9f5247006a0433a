#include "rrgen/residual.hpp"

#include "rrgen/linalg.hpp"

namespace rrgen {

void DetectorConfig::validate() const {
    if (window < 2) throw std::invalid_argument("DetectorConfig: window must be >= 2");
    if (past < 1) throw std::invalid_argument("DetectorConfig: past horizon must be >= 1");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("DetectorConfig: alpha must lie in (0, 1)");
    if (n_in < 1 || n_out < 1) throw std::invalid_argument("DetectorConfig: dimensions must be >= 1");
    if (innovation_cov.rows() != n_out || innovation_cov.cols() != n_out)
        throw std::invalid_argument("DetectorConfig: innovation covariance must be n_out x n_out");
    chol(innovation_cov);  // SPD or throw
}

ResidualState::ResidualState(const DetectorConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
}

void ResidualState::require_ready() const {
    if (!ready()) throw std::logic_error("ResidualState: window not yet filled");
}

Vector ResidualState::column_for(Index j) const {
    const Index m = cfg_.n_in;
    const Index l = cfg_.n_out;
    Vector col(cfg_.past * (m + l) + m);
    for (Index i = 0; i < cfg_.past; ++i) {
        const Sample& s = samples_[static_cast<std::size_t>(j + i)];
        col.segment(i * (m + l), m) = s.u;
        col.segment(i * (m + l) + m, l) = s.y;
    }
    col.tail(m) = samples_[static_cast<std::size_t>(j + cfg_.past)].u;
    return col;
}

const Matrix& ResidualState::regressors() const {
    require_ready();
    return z_ol_;
}

Vector ResidualState::stacked_outputs() const {
    require_ready();
    const Index l = cfg_.n_out;
    Vector out(cfg_.window * l);
    for (Index j = 0; j < cfg_.window; ++j)
        out.segment(j * l, l) = samples_[static_cast<std::size_t>(cfg_.past + j)].y;
    return out;
}

Vector ResidualState::stacked_inputs() const {
    require_ready();
    const Index m = cfg_.n_in;
    Vector out(cfg_.window * m);
    for (Index j = 0; j < cfg_.window; ++j)
        out.segment(j * m, m) = samples_[static_cast<std::size_t>(cfg_.past + j)].u;
    return out;
}

Vector ResidualState::stacked_past() const {
    require_ready();
    const Index m = cfg_.n_in;
    const Index l = cfg_.n_out;
    Vector out(cfg_.past * (m + l));
    for (Index i = 0; i < cfg_.past; ++i) {
        out.segment(i * (m + l), m) = samples_[static_cast<std::size_t>(i)].u;
        out.segment(i * (m + l) + m, l) = samples_[static_cast<std::size_t>(i)].y;
    }
    return out;
}

ResidualState push_sample(ResidualState state, const Vector& u, const Vector& y) {
    if (u.size() != state.cfg_.n_in || y.size() != state.cfg_.n_out)
        throw std::invalid_argument("push_sample: sample dimensions do not match config");

    const Index capacity = state.cfg_.window + state.cfg_.past;
    const bool was_ready = state.ready();
    state.samples_.push_back({u, y});
    if (static_cast<Index>(state.samples_.size()) > capacity) state.samples_.pop_front();

    if (state.ready()) {
        const Index rows = state.cfg_.past * (state.cfg_.n_in + state.cfg_.n_out) + state.cfg_.n_in;
        if (was_ready && state.z_ol_valid_) {
            const Index L = state.cfg_.window;
            state.z_ol_.leftCols(L - 1) = state.z_ol_.rightCols(L - 1).eval();
            state.z_ol_.col(L - 1) = state.column_for(L - 1);
        } else {
            state.z_ol_.resize(rows, state.cfg_.window);
            for (Index j = 0; j < state.cfg_.window; ++j)
                state.z_ol_.col(j) = state.column_for(j);
            state.z_ol_valid_ = true;
        }
    }
    return state;
}

VarxBlocks assemble_blocks(const MarkovEstimate& est, const DetectorConfig& cfg) {
    if (est.n_in != cfg.n_in || est.n_out != cfg.n_out || est.past != cfg.past)
        throw std::invalid_argument("assemble_blocks: estimate dimensions do not match config");
    if (est.coeffs.cols() != est.cols_expected())
        throw std::invalid_argument("assemble_blocks: malformed coefficient block");

    const Index L = cfg.window;
    const Index p = cfg.past;
    const Index m = cfg.n_in;
    const Index l = cfg.n_out;

    VarxBlocks blocks;
    blocks.window = L;
    blocks.past = p;
    blocks.n_in = m;
    blocks.n_out = l;
    blocks.past_map = Matrix::Zero(L * l, p * (m + l));
    blocks.input_map = Matrix::Zero(L * l, L * m);
    blocks.output_map = Matrix::Zero(L * l, L * l);

    for (Index i = 0; i < L; ++i) {
        // Pre-window regressor: column pair j holds the lag (p-1-j+i) blocks,
        // present only while that lag stays within the identified range.
        for (Index j = i; j < p; ++j) {
            const Index lag = p - 1 - j + i;
            blocks.past_map.block(i * l, j * (m + l), l, m) = est.from_input(lag);
            blocks.past_map.block(i * l, j * (m + l) + m, l, l) = est.from_output(lag);
        }
        blocks.input_map.block(i * l, i * m, l, m) = est.feedthrough();
        for (Index j = i - 1; j >= 0 && i - 1 - j < p; --j) {
            blocks.input_map.block(i * l, j * m, l, m) = est.from_input(i - 1 - j);
            blocks.output_map.block(i * l, j * l, l, l) = est.from_output(i - 1 - j);
        }
    }
    return blocks;
}

Vector compute_residual(const ResidualState& state, const VarxBlocks& blocks) {
    const DetectorConfig& cfg = state.config();
    if (blocks.window != cfg.window || blocks.past != cfg.past ||
        blocks.n_in != cfg.n_in || blocks.n_out != cfg.n_out)
        throw std::invalid_argument("compute_residual: blocks do not match state config");

    const Vector y = state.stacked_outputs();
    const Vector u = state.stacked_inputs();
    const Vector z = state.stacked_past();
    return y - blocks.output_map * y - blocks.past_map * z - blocks.input_map * u;
}

Matrix residual_covariance(const ResidualState& state, const GramInverse& gram, const DetectorConfig& cfg) {
    const Matrix& z_ol = state.regressors();
    if (gram.g.rows() != z_ol.rows())
        throw std::invalid_argument("residual_covariance: gram size does not match regressors");
    Matrix weight = z_ol.transpose() * gram.g * z_ol;
    weight += Matrix::Identity(cfg.window, cfg.window);
    weight = 0.5 * (weight + weight.transpose());
    Matrix sigma = kron(weight, cfg.innovation_cov);
    chol(sigma);  // SPD or throw
    return sigma;
}

double test_statistic(const Vector& r, const Matrix& sigma) {
    return quad_form(sigma, r);
}

bool detect(double tau, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("detect: threshold must be non-negative");
    return tau > gamma;
}

} // namespace rrgen
