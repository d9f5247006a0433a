#include "rrgen/baseline.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "rrgen/chi2.hpp"

namespace rrgen {

void BaselineConfig::validate() const {
    if (!(sigma_e > 0.0)) throw std::invalid_argument("BaselineConfig: sigma_e must be positive");
    if (window < 2) throw std::invalid_argument("BaselineConfig: window must be >= 2");
    if (n_id < 2) throw std::invalid_argument("BaselineConfig: n_id must be >= 2");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("BaselineConfig: alpha must lie in (0, 1)");
    if (fault.start < 0 || fault.start > fault.end || fault.end > run_length)
        throw std::invalid_argument("BaselineConfig: fault span must satisfy 0 <= start <= end <= run_length");
}

IoRecord simulate(const BaselineConfig& cfg, RngStream& rng) {
    cfg.validate();
    IoRecord rec;
    rec.u = Matrix::Constant(1, cfg.run_length, cfg.u_level);
    rec.y.resize(1, cfg.run_length);
    for (Index k = 0; k < cfg.run_length; ++k) {
        double y = cfg.gain * cfg.u_level + rng.next_gauss(cfg.sigma_e);
        if (cfg.fault.active(k)) y += cfg.fault.height;
        rec.y(0, k) = y;
    }
    return rec;
}

double estimate_gain(const IoRecord& rec) {
    if (rec.n_in() != 1 || rec.n_out() != 1)
        throw std::invalid_argument("estimate_gain: record must be scalar I/O");
    const double energy = rec.u.row(0).squaredNorm();
    if (energy <= 0.0) throw std::invalid_argument("estimate_gain: zero input energy");
    return rec.y.row(0).dot(rec.u.row(0)) / energy;
}

double snr_db(const Matrix& u_id, double sigma_e, Index count) {
    if (count < 2) throw std::invalid_argument("snr_db: count must be >= 2");
    const double energy = u_id.squaredNorm();
    return 10.0 * std::log10(energy / (static_cast<double>(count - 1) * sigma_e * sigma_e));
}

double u_level_for_snr(double target_snr_db, Index n_id, double sigma_e) {
    if (n_id < 2) throw std::invalid_argument("u_level_for_snr: n_id must be >= 2");
    const double ratio = std::pow(10.0, target_snr_db / 10.0);
    return sigma_e * std::sqrt(ratio * static_cast<double>(n_id - 1) / static_cast<double>(n_id));
}

double residual_variance(double u_k, const Matrix& u_id, double sigma_e) {
    const double energy = u_id.squaredNorm();
    if (energy <= 0.0) throw std::invalid_argument("residual_variance: zero identification energy");
    return u_k * u_k * sigma_e * sigma_e / energy + sigma_e * sigma_e;
}

double window_statistic(const Vector& r_window) {
    const Index n = r_window.size();
    if (n < 2) throw std::invalid_argument("window_statistic: window must hold at least two residuals");
    const double mean = r_window.mean();
    const double centered_ss = (r_window.array() - mean).square().sum();
    const double s2 = centered_ss / static_cast<double>(n - 1);
    if (!(s2 > 0.0)) throw std::domain_error("window_statistic: zero sample variance (degenerate window)");
    return r_window.squaredNorm() / s2;
}

BaselineTrace run_detector(const BaselineConfig& cfg) {
    cfg.validate();
    RngStream id_rng = RngStream(cfg.seed).derive(0, 0);
    RngStream run_rng = RngStream(cfg.seed).derive(1, 0);

    BaselineConfig id_cfg = cfg;
    id_cfg.u_level = cfg.id_level();
    id_cfg.run_length = cfg.n_id;
    id_cfg.fault = FaultProfile{};
    const IoRecord id_rec = simulate(id_cfg, id_rng);

    BaselineTrace trace;
    trace.gain_hat = estimate_gain(id_rec);
    trace.gamma = threshold_for({cfg.window - 1, cfg.alpha});

    const IoRecord rec = simulate(cfg, run_rng);
    trace.y.resize(static_cast<std::size_t>(cfg.run_length));
    trace.r.resize(static_cast<std::size_t>(cfg.run_length));
    for (Index k = 0; k < cfg.run_length; ++k) {
        trace.y[static_cast<std::size_t>(k)] = rec.y(0, k);
        trace.r[static_cast<std::size_t>(k)] = rec.y(0, k) - trace.gain_hat * rec.u(0, k);
    }

    Vector window(cfg.window);
    for (Index k = cfg.window - 1; k < cfg.run_length; ++k) {
        for (Index i = 0; i < cfg.window; ++i)
            window[i] = trace.r[static_cast<std::size_t>(k - cfg.window + 1 + i)];
        TraceRow row;
        row.k = k;
        row.y = trace.y[static_cast<std::size_t>(k)];
        row.r = trace.r[static_cast<std::size_t>(k)];
        row.tau = window_statistic(window);
        row.gamma = trace.gamma;
        row.alarm = row.tau > trace.gamma;
        trace.rows.push_back(row);
    }
    return trace;
}

namespace {

SweepCell run_cell(Index window, double snr, Index trials, double alpha,
                   const SweepOptions& opts, std::uint64_t cell_index) {
    SweepCell cell;
    cell.window = window;
    cell.snr_db = snr;
    cell.trials = trials;

    const double gamma = threshold_for({window - 1, alpha});
    const Index n_id = window;
    const double id_level = u_level_for_snr(snr, n_id, opts.sigma_e);
    const double detect_level = opts.detect_u_level.value_or(id_level);

    for (Index trial = 0; trial < trials; ++trial) {
        RngStream rng = RngStream(opts.seed).derive(cell_index, static_cast<std::uint64_t>(trial));

        BaselineConfig cfg;
        cfg.gain = opts.gain;
        cfg.sigma_e = opts.sigma_e;
        cfg.alpha = alpha;
        cfg.window = window;
        cfg.n_id = n_id;

        BaselineConfig id_cfg = cfg;
        id_cfg.u_level = id_level;
        id_cfg.run_length = n_id;
        const IoRecord id_rec = simulate(id_cfg, rng);
        const double gain_hat = estimate_gain(id_rec);

        BaselineConfig run_cfg = cfg;
        run_cfg.u_level = detect_level;
        run_cfg.run_length = opts.run_length;
        const IoRecord rec = simulate(run_cfg, rng);

        Vector r(opts.run_length);
        for (Index k = 0; k < opts.run_length; ++k)
            r[k] = rec.y(0, k) - gain_hat * rec.u(0, k);

        for (Index k = window - 1; k < opts.run_length; k += opts.stride) {
            const double tau = window_statistic(r.segment(k - window + 1, window));
            ++cell.windows;
            if (tau > gamma) ++cell.alarms;
        }
    }
    cell.far = cell.windows > 0 ? static_cast<double>(cell.alarms) / static_cast<double>(cell.windows) : 0.0;
    return cell;
}

} // namespace

SweepResult far_sweep(const std::vector<Index>& windows, const std::vector<double>& snr_list,
                      Index trials, double alpha, const SweepOptions& opts) {
    if (windows.empty() || snr_list.empty())
        throw std::invalid_argument("far_sweep: grid must be non-empty");
    if (trials < 1) throw std::invalid_argument("far_sweep: trials must be >= 1");

    std::vector<std::future<SweepCell>> futures;
    std::uint64_t cell_index = 0;
    for (Index window : windows)
        for (double snr : snr_list) {
            futures.push_back(std::async(std::launch::async, run_cell, window, snr, trials, alpha,
                                         opts, cell_index));
            ++cell_index;
        }

    SweepResult result;
    for (auto& f : futures) result.cells.push_back(f.get());
    return result;
}

std::vector<SnrErrorRow> snr_error_table(const std::vector<double>& snr_list, Index trials,
                                         Index n_id, double sigma_e, std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("snr_error_table: trials must be >= 2");
    std::vector<SnrErrorRow> rows;
    std::uint64_t cell_index = 0;
    for (double snr : snr_list) {
        const double level = u_level_for_snr(snr, n_id, sigma_e);
        double sum = 0.0;
        double sum_sq = 0.0;
        for (Index trial = 0; trial < trials; ++trial) {
            RngStream rng = RngStream(seed).derive(cell_index, static_cast<std::uint64_t>(trial));
            BaselineConfig cfg;
            cfg.sigma_e = sigma_e;
            cfg.u_level = level;
            cfg.run_length = n_id;
            cfg.n_id = n_id;
            const IoRecord rec = simulate(cfg, rng);
            const double err = std::abs(estimate_gain(rec) - cfg.gain);
            sum += err;
            sum_sq += err * err;
        }
        const double n = static_cast<double>(trials);
        const double mean = sum / n;
        const double var = (sum_sq - n * mean * mean) / (n - 1.0);
        rows.push_back({snr, mean, std::sqrt(var > 0.0 ? var / n : 0.0)});
        ++cell_index;
    }
    return rows;
}

} // namespace rrgen
