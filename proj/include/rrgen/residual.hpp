#pragma once

#include <deque>

#include "rrgen/chi2.hpp"
#include "rrgen/sysid.hpp"
#include "rrgen/types.hpp"

namespace rrgen {

/// Detector configuration: window length L, regressor past horizon p,
/// false-alarm target, I/O dimensions and the innovation covariance.
struct DetectorConfig {
    Index window = 2;        // L >= 2
    Index past = 1;          // p >= 1
    double alpha = 0.005;
    Index n_in = 1;          // m
    Index n_out = 1;         // l
    Matrix innovation_cov;   // l x l, SPD

    void validate() const;

    /// Threshold degrees of freedom, (L - 1) * l.
    Index dof() const { return (window - 1) * n_out; }
};

/// The three banded coefficient maps of the windowed output equation:
///   y_window = past_map * z_past + input_map * u_window + output_map * y_window + e
/// output_map is strictly block lower triangular; input_map carries the
/// feedthrough block on its diagonal; row i of past_map is the impulse
/// response sequence shifted right by i and truncated.
struct VarxBlocks {
    Matrix past_map;    // L*l x p*(m+l)
    Matrix input_map;   // L*l x L*m
    Matrix output_map;  // L*l x L*l
    Index window = 0;
    Index past = 0;
    Index n_in = 0;
    Index n_out = 0;
};

/// Sliding buffer of the last L + p samples plus the online regressor
/// matrix whose column j is the regressor of window output j.
class ResidualState {
public:
    explicit ResidualState(const DetectorConfig& cfg);

    const DetectorConfig& config() const { return cfg_; }
    bool ready() const { return static_cast<Index>(samples_.size()) == cfg_.window + cfg_.past; }

    /// Online regressors, (p*(m+l) + m) x L. Valid once ready().
    const Matrix& regressors() const;

    /// Stacked window outputs (L*l), inputs (L*m) and pre-window past (p*(m+l)).
    Vector stacked_outputs() const;
    Vector stacked_inputs() const;
    Vector stacked_past() const;

    friend ResidualState push_sample(ResidualState state, const Vector& u, const Vector& y);

private:
    struct Sample {
        Vector u;
        Vector y;
    };
    void require_ready() const;
    Vector column_for(Index j) const;

    DetectorConfig cfg_;
    std::deque<Sample> samples_;
    Matrix z_ol_;
    bool z_ol_valid_ = false;
};

/// Append a sample, retiring the oldest once the buffer is full. The
/// regressor columns shift left by one and a fresh last column is formed.
ResidualState push_sample(ResidualState state, const Vector& u, const Vector& y);

/// Fill the banded maps from an identified coefficient block.
VarxBlocks assemble_blocks(const MarkovEstimate& est, const DetectorConfig& cfg);

/// Windowed residual r = y_window - output_map*y_window - past_map*z_past - input_map*u_window.
Vector compute_residual(const ResidualState& state, const VarxBlocks& blocks);

/// Identification-error-aware residual covariance
/// (Z_ol^T * gram * Z_ol + I_L) (x) innovation_cov.
Matrix residual_covariance(const ResidualState& state, const GramInverse& gram, const DetectorConfig& cfg);

/// Whitened squared norm of the residual under the given covariance.
double test_statistic(const Vector& r, const Matrix& sigma);

/// Alarm decision: strictly above threshold.
bool detect(double tau, double gamma);

} // namespace rrgen
