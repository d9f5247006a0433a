#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rrgen/random.hpp"
#include "rrgen/sysid.hpp"
#include "rrgen/types.hpp"

namespace rrgen {

/// Additive output fault, active on the half-open sample range [start, end).
struct FaultProfile {
    Index start = 0;
    Index end = 0;
    double height = 0.0;

    bool active(Index k) const { return k >= start && k < end; }
};

/// Scalar static-gain plant y = d*u + e with an optional additive fault.
struct BaselineConfig {
    double gain = 2.0;          // d
    double sigma_e = 1.0;       // innovation standard deviation
    double u_level = 2.0;       // constant detection-phase input
    double u_id = 0.0;          // identification input level; 0 means "same as u_level"
    Index n_id = 20;            // identification sample count
    Index window = 20;          // detection window L
    double alpha = 0.005;
    FaultProfile fault;
    Index run_length = 2000;
    std::uint64_t seed = 1;

    double id_level() const { return u_id > 0.0 ? u_id : u_level; }
    void validate() const;
};

struct TraceRow {
    Index k = 0;       // index of the window's newest sample
    double y = 0.0;
    double r = 0.0;
    double tau = 0.0;
    double gamma = 0.0;
    bool alarm = false;
};

struct BaselineTrace {
    double gain_hat = 0.0;
    double gamma = 0.0;
    std::vector<double> y;      // per-sample measured output
    std::vector<double> r;      // per-sample residual y - gain_hat * u
    std::vector<TraceRow> rows; // one row per full window
};

struct SweepCell {
    Index window = 0;
    double snr_db = 0.0;
    Index trials = 0;
    std::int64_t windows = 0;
    std::int64_t alarms = 0;
    double far = 0.0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
};

struct SnrErrorRow {
    double snr_db = 0.0;
    double mean_abs_err = 0.0;
    double std_err = 0.0;
};

/// Simulate the plant: y(k) = gain*u(k) + e(k) + fault(k), constant input.
IoRecord simulate(const BaselineConfig& cfg, RngStream& rng);

/// Least-squares static gain sum(y*u) / sum(u^2).
double estimate_gain(const IoRecord& rec);

/// 10*log10( (u u^T / (count-1)) / sigma_e^2 ) with count passed explicitly.
double snr_db(const Matrix& u_id, double sigma_e, Index count);

/// Constant input level that achieves the target SNR for n_id samples.
double u_level_for_snr(double target_snr_db, Index n_id, double sigma_e);

/// Single-sample residual variance u_k^2 * sigma_e^2 / (u_id u_id^T) + sigma_e^2.
double residual_variance(double u_k, const Matrix& u_id, double sigma_e);

/// Windowed test statistic sum(r_i^2) / s^2 with s^2 the (L-1)-normalized
/// sample variance of the window. Throws on a zero-variance window.
double window_statistic(const Vector& r_window);

/// Identification pass followed by a sliding-window detection run.
BaselineTrace run_detector(const BaselineConfig& cfg);

struct SweepOptions {
    Index run_length = 2000;
    Index stride = 1;
    std::uint64_t seed = 1;
    /// Detection-phase input level; unset means matched to the
    /// identification level implied by each cell's SNR.
    std::optional<double> detect_u_level;
    double sigma_e = 1.0;
    double gain = 2.0;
};

/// No-fault false-alarm-rate grid over (window, SNR). Each cell runs
/// `trials` independent identification+detection runs; identification uses
/// n_id = window samples at the input level implied by the cell's SNR.
SweepResult far_sweep(const std::vector<Index>& windows, const std::vector<double>& snr_list,
                      Index trials, double alpha, const SweepOptions& opts);

/// Monte-Carlo mean absolute gain-estimation error per SNR.
std::vector<SnrErrorRow> snr_error_table(const std::vector<double>& snr_list, Index trials,
                                         Index n_id, double sigma_e, std::uint64_t seed);

} // namespace rrgen
