#include "rrgen/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "rrgen/baseline.hpp"
#include "rrgen/chi2.hpp"
#include "rrgen/fx_detector.hpp"
#include "rrgen/io.hpp"
#include "rrgen/residual.hpp"

namespace rrgen::cli {

namespace {

using nlohmann::json;

json load_config(const CommonOptions& opts) {
    if (!std::filesystem::exists(opts.config)) throw io::FileMissing(opts.config);
    std::ifstream in(opts.config);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw io::ParseError("malformed config " + opts.config.string() + ": " + e.what());
    }
}

// Flags win over the config file; a seed must come from one of them.
std::uint64_t resolve_seed(const json& cfg, const CommonOptions& opts) {
    if (opts.seed) return *opts.seed;
    if (cfg.contains("seed")) return cfg.at("seed").get<std::uint64_t>();
    throw std::invalid_argument("a seed is required (config \"seed\" or --seed); no wall-clock default");
}

const json& section(const json& cfg, const std::string& name) {
    if (!cfg.contains(name))
        throw std::invalid_argument("config is missing the \"" + name + "\" section");
    return cfg.at(name);
}

std::filesystem::path resolve_input(const json& sec, const std::string& key,
                                    const std::filesystem::path& config_path) {
    if (!sec.contains(key))
        throw std::invalid_argument("config is missing \"" + key + "\"");
    std::filesystem::path p = sec.at(key).get<std::string>();
    if (p.is_relative()) p = config_path.parent_path() / p;
    return p;
}

int guard(const std::function<void()>& body) {
    try {
        body();
        return kOk;
    } catch (const io::FileMissing& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFileMissing;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}

BaselineConfig baseline_from_json(const json& sec, std::uint64_t seed) {
    BaselineConfig cfg;
    cfg.seed = seed;
    if (sec.contains("gain")) cfg.gain = sec.at("gain").get<double>();
    if (sec.contains("sigma_e")) cfg.sigma_e = sec.at("sigma_e").get<double>();
    if (sec.contains("u_level")) cfg.u_level = sec.at("u_level").get<double>();
    if (sec.contains("u_id")) cfg.u_id = sec.at("u_id").get<double>();
    if (sec.contains("n_id")) cfg.n_id = sec.at("n_id").get<Index>();
    if (sec.contains("window")) cfg.window = sec.at("window").get<Index>();
    if (sec.contains("alpha")) cfg.alpha = sec.at("alpha").get<double>();
    if (sec.contains("run_length")) cfg.run_length = sec.at("run_length").get<Index>();
    if (sec.contains("fault")) {
        const auto& f = sec.at("fault");
        cfg.fault.start = f.at("start").get<Index>();
        cfg.fault.end = f.at("end").get<Index>();
        cfg.fault.height = f.at("height").get<double>();
    }
    cfg.validate();
    return cfg;
}

} // namespace

int cmd_identify(const CommonOptions& opts) {
    return guard([&] {
        const json cfg = load_config(opts);
        (void)resolve_seed(cfg, opts);  // commands are seeded even when not drawing
        const json& sec = section(cfg, "identify");

        const auto data_path = resolve_input(sec, "data", opts.config);
        const Index past = sec.at("past_horizon").get<Index>();

        const IoRecord rec = io::read_io_csv(data_path);
        const DataMatrices data = build_data_matrices(rec, past);
        const MarkovEstimate est = estimate_markov(data);
        const Matrix sigma_e_hat = estimate_innovation_cov(data.y, data.z, est);

        std::filesystem::create_directories(opts.out_dir);
        io::write_markov_json(opts.out_dir / "markov.json", est, sigma_e_hat);

        // A singular Gram (exactly consistent, collinear data) still leaves
        // a usable coefficient artifact behind; the exit code reports that
        // the covariance artifact could not be produced.
        const GramInverse gram = gram_inverse(data.z);
        io::write_gram_json(opts.out_dir / "gram.json", gram);
    });
}

int cmd_detect(const CommonOptions& opts) {
    return guard([&] {
        const json cfg = load_config(opts);
        (void)resolve_seed(cfg, opts);
        const json& sec = section(cfg, "detect");

        const auto markov_path = resolve_input(sec, "markov", opts.config);
        const auto gram_path = resolve_input(sec, "gram", opts.config);
        const auto data_path = resolve_input(sec, "data", opts.config);

        Matrix sigma_e_hat;
        const MarkovEstimate est = io::read_markov_json(markov_path, &sigma_e_hat);
        const GramInverse gram = io::read_gram_json(gram_path);
        const IoRecord rec = io::read_io_csv(data_path);

        DetectorConfig det;
        det.window = sec.at("window").get<Index>();
        det.past = est.past;
        det.alpha = sec.value("alpha", 0.005);
        det.n_in = est.n_in;
        det.n_out = est.n_out;
        if (sec.contains("sigma_e")) {
            const auto& s = sec.at("sigma_e");
            if (s.is_number()) {
                det.innovation_cov = Matrix::Identity(est.n_out, est.n_out) *
                                     (s.get<double>() * s.get<double>());
            } else {
                det.innovation_cov.resize(est.n_out, est.n_out);
                for (Index i = 0; i < est.n_out; ++i)
                    for (Index j = 0; j < est.n_out; ++j)
                        det.innovation_cov(i, j) = s.at(static_cast<std::size_t>(i))
                                                       .at(static_cast<std::size_t>(j)).get<double>();
            }
        } else if (sigma_e_hat.size() > 0) {
            det.innovation_cov = sigma_e_hat;
        } else {
            throw std::invalid_argument("detect: sigma_e missing and no estimate present in markov artifact");
        }
        det.validate();

        if (rec.samples() < det.window + det.past)
            throw std::invalid_argument("detect: record shorter than window + past horizon");
        if (rec.n_in() != det.n_in || rec.n_out() != det.n_out)
            throw std::invalid_argument("detect: record dimensions do not match the identified model");

        const VarxBlocks blocks = assemble_blocks(est, det);
        const double gamma = threshold_for({det.dof(), det.alpha});

        std::vector<TraceRow> rows;
        ResidualState state(det);
        for (Index k = 0; k < rec.samples(); ++k) {
            state = push_sample(std::move(state), rec.u.col(k), rec.y.col(k));
            if (!state.ready()) continue;
            const Vector r = compute_residual(state, blocks);
            const Matrix sigma = residual_covariance(state, gram, det);
            TraceRow row;
            row.k = k;
            row.tau = test_statistic(r, sigma);
            row.gamma = gamma;
            row.alarm = detect(row.tau, gamma);
            rows.push_back(row);
        }

        std::filesystem::create_directories(opts.out_dir);
        io::write_trace_csv(opts.out_dir / "trace.csv", rows);
    });
}

int cmd_sweep(const CommonOptions& opts) {
    return guard([&] {
        const json cfg = load_config(opts);
        const std::uint64_t seed = resolve_seed(cfg, opts);
        const json& sec = section(cfg, "sweep");

        const auto windows = sec.at("windows").get<std::vector<Index>>();
        const auto snr_list = sec.at("snr_db").get<std::vector<double>>();
        const Index trials = sec.value("trials", Index{50});
        const double alpha = sec.value("alpha", 0.005);

        SweepOptions sweep_opts;
        sweep_opts.seed = seed;
        sweep_opts.run_length = sec.value("run_length", Index{2000});
        sweep_opts.stride = sec.value("stride", Index{1});
        sweep_opts.sigma_e = sec.value("sigma_e", 1.0);
        sweep_opts.gain = sec.value("gain", 2.0);
        if (sec.contains("detect_u_level"))
            sweep_opts.detect_u_level = sec.at("detect_u_level").get<double>();

        const SweepResult result = far_sweep(windows, snr_list, trials, alpha, sweep_opts);

        const Index snr_trials = sec.value("snr_trials", Index{200});
        const Index n_id = sec.value("n_id", Index{20});
        const auto table = snr_error_table(snr_list, snr_trials, n_id, sweep_opts.sigma_e, seed + 1);

        std::filesystem::create_directories(opts.out_dir);
        io::write_far_sweep_csv(opts.out_dir / "far_sweep.csv", result);
        io::write_snr_table_csv(opts.out_dir / "snr_table.csv", table);
    });
}

int cmd_fx(const CommonOptions& opts) {
    return guard([&] {
        const json cfg = load_config(opts);
        const std::uint64_t seed = resolve_seed(cfg, opts);
        const json& sec = section(cfg, "fx");

        const BaselineConfig base = baseline_from_json(sec, seed);
        const int target_frac = sec.value("target_frac", 6);

        std::filesystem::create_directories(opts.out_dir);

        FormatMap formats;
        if (sec.contains("formats")) {
            // Single-pass mode: formats supplied by the caller.
            StaticBoundsMap static_bounds;
            formats = io::read_formats_json(resolve_input(sec, "formats", opts.config), &static_bounds);
        } else {
            // Two-pass mode: float run collects ranges, then propose.
            const RangePass pass = collect_ranges(base);
            StaticBoundsMap static_bounds;
            formats = propose_formats(pass.ranges, target_frac, static_bounds);
            io::write_ranges_csv(opts.out_dir / "ranges.csv", pass.ranges, formats);
            io::write_formats_json(opts.out_dir / "formats.json", formats);
            io::write_baseline_trace_csv(opts.out_dir / "trace.csv", pass.trace);
        }

        const FxRunResult run = fx_run_detector(base, formats);
        io::write_fx_trace_csv(opts.out_dir / "fx_trace.csv", run);
        io::write_op_count_json(opts.out_dir / "op_count.json", op_count_report(run));
    });
}

} // namespace rrgen::cli
