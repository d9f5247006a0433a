#include "rrgen/fx_detector.hpp"

#include <stdexcept>

#include "rrgen/chi2.hpp"

namespace rrgen {

namespace {

// Static per-window operator census of the detector graph:
//   multipliers: dhat*u, r_sub_avg^2, r^2
//   adders/subtractors: r = ym - dhat*u, r_sum +=, r_sub_avg = r - r_avg,
//                       r_sub_avg_sq_sum +=, r_sq_sum +=
//   dividers: r_avg, r_var, chi_sq
constexpr int kMultipliers = 3;
constexpr int kAddersSubtractors = 5;
constexpr int kDividers = 3;

struct SharedRun {
    double gain_hat = 0.0;
    double gamma = 0.0;
    IoRecord rec;
};

SharedRun prepare_run(const BaselineConfig& cfg) {
    cfg.validate();
    SharedRun shared;

    RngStream id_rng = RngStream(cfg.seed).derive(0, 0);
    BaselineConfig id_cfg = cfg;
    id_cfg.u_level = cfg.id_level();
    id_cfg.run_length = cfg.n_id;
    id_cfg.fault = FaultProfile{};
    shared.gain_hat = estimate_gain(simulate(id_cfg, id_rng));

    shared.gamma = threshold_for({cfg.window - 1, cfg.alpha});

    RngStream run_rng = RngStream(cfg.seed).derive(1, 0);
    shared.rec = simulate(cfg, run_rng);
    return shared;
}

} // namespace

const std::vector<std::string>& dataflow_variables() {
    static const std::vector<std::string> names = {
        "chi_sq", "N", "count", "dhat", "i", "r", "r_avg", "r_sq", "r_sq_sum",
        "r_sub_avg", "r_sub_avg_sq", "r_sub_avg_sq_sum", "r_sum", "r_var", "u", "ym"};
    return names;
}

RangePass collect_ranges(const BaselineConfig& cfg) {
    const SharedRun shared = prepare_run(cfg);
    const Index L = cfg.window;

    RangePass pass;
    for (const auto& name : dataflow_variables()) pass.ranges[name].name = name;
    auto rec = [&pass](const std::string& name, double x) {
        pass.ranges[name] = record(pass.ranges[name], x);
    };

    pass.trace.gain_hat = shared.gain_hat;
    pass.trace.gamma = shared.gamma;
    pass.trace.y.resize(static_cast<std::size_t>(cfg.run_length));
    pass.trace.r.resize(static_cast<std::size_t>(cfg.run_length));

    std::vector<double> window(static_cast<std::size_t>(L), 0.0);
    for (Index k = 0; k < cfg.run_length; ++k) {
        rec("count", static_cast<double>(k + 1));
        rec("N", static_cast<double>(L));
        rec("u", cfg.u_level);
        rec("dhat", shared.gain_hat);

        const double ym = shared.rec.y(0, k);
        rec("ym", ym);
        const double r = ym - shared.gain_hat * cfg.u_level;
        rec("r", r);
        pass.trace.y[static_cast<std::size_t>(k)] = ym;
        pass.trace.r[static_cast<std::size_t>(k)] = r;
        window[static_cast<std::size_t>(k % L)] = r;
        if (k < L - 1) continue;

        double r_sum = 0.0;
        rec("r_sum", r_sum);
        for (Index i = 0; i < L; ++i) {
            rec("i", static_cast<double>(i + 1));
            r_sum += window[static_cast<std::size_t>(i)];
            rec("r_sum", r_sum);
        }
        const double r_avg = r_sum / static_cast<double>(L);
        rec("r_avg", r_avg);

        double r_sub_avg_sq_sum = 0.0;
        rec("r_sub_avg_sq_sum", r_sub_avg_sq_sum);
        double r_sq_sum = 0.0;
        rec("r_sq_sum", r_sq_sum);
        for (Index i = 0; i < L; ++i) {
            const double ri = window[static_cast<std::size_t>(i)];
            const double r_sub_avg = ri - r_avg;
            rec("r_sub_avg", r_sub_avg);
            const double r_sub_avg_sq = r_sub_avg * r_sub_avg;
            rec("r_sub_avg_sq", r_sub_avg_sq);
            r_sub_avg_sq_sum += r_sub_avg_sq;
            rec("r_sub_avg_sq_sum", r_sub_avg_sq_sum);
            const double r_sq = ri * ri;
            rec("r_sq", r_sq);
            r_sq_sum += r_sq;
            rec("r_sq_sum", r_sq_sum);
        }
        const double r_var = r_sub_avg_sq_sum / static_cast<double>(L - 1);
        rec("r_var", r_var);
        if (!(r_var > 0.0)) throw std::domain_error("collect_ranges: zero sample variance in window");
        const double chi_sq = r_sq_sum / r_var;
        rec("chi_sq", chi_sq);

        TraceRow row;
        row.k = k;
        row.y = ym;
        row.r = r;
        row.tau = chi_sq;
        row.gamma = shared.gamma;
        row.alarm = chi_sq > shared.gamma;
        pass.trace.rows.push_back(row);
    }
    return pass;
}

FormatMap propose_formats(const RangeMap& ranges, int target_frac,
                          const StaticBoundsMap& static_bounds) {
    FormatMap formats;
    for (const auto& [name, range] : ranges) {
        RangeRecord widened = range;
        if (auto it = static_bounds.find(name); it != static_bounds.end()) {
            if (it->second.min) widened = record(widened, *it->second.min);
            if (it->second.max) widened = record(widened, *it->second.max);
        }
        formats[name] = propose_format(widened, target_frac);
    }
    return formats;
}

FxRunResult fx_run_detector(const BaselineConfig& cfg, const FormatMap& formats) {
    for (const auto& name : dataflow_variables())
        if (!formats.contains(name))
            throw std::invalid_argument("fx_run_detector: missing format for variable '" + name + "'");

    const SharedRun shared = prepare_run(cfg);
    const Index L = cfg.window;

    FxRunResult out;
    out.gain_hat = shared.gain_hat;
    out.gamma = shared.gamma;
    for (const auto& name : dataflow_variables()) out.ranges[name].name = name;

    bool window_saturated = false;
    auto rec = [&out, &window_saturated](const std::string& name, const FxValue& v) {
        out.ranges[name] = record(out.ranges[name], v.to_double());
        ++out.quantizations;
        window_saturated = window_saturated || v.saturated();
        return v;
    };
    auto fmt = [&formats](const std::string& name) -> const FxFormat& { return formats.at(name); };

    const FxValue u_fx = quantize(cfg.u_level, fmt("u"));
    const FxValue dhat_fx = quantize(shared.gain_hat, fmt("dhat"));
    const FxValue n_fx = quantize(static_cast<double>(L), fmt("N"));
    const FxValue n_minus_one_fx = quantize(static_cast<double>(L - 1), fmt("N"));

    std::vector<FxValue> window(static_cast<std::size_t>(L));
    for (Index k = 0; k < cfg.run_length; ++k) {
        window_saturated = false;
        rec("count", quantize(static_cast<double>(k + 1), fmt("count")));
        rec("N", n_fx);
        rec("u", u_fx);
        rec("dhat", dhat_fx);

        const FxValue ym = rec("ym", quantize(shared.rec.y(0, k), fmt("ym")));
        const FxValue r = rec("r", fx_msub(ym, dhat_fx, u_fx, fmt("r")));
        window[static_cast<std::size_t>(k % L)] = r;
        if (k < L - 1) continue;

        FxValue r_sum = rec("r_sum", quantize(0.0, fmt("r_sum")));
        for (Index i = 0; i < L; ++i) {
            rec("i", quantize(static_cast<double>(i + 1), fmt("i")));
            r_sum = rec("r_sum", fx_add(r_sum, window[static_cast<std::size_t>(i)], fmt("r_sum")));
        }
        const FxValue r_avg = rec("r_avg", fx_div(r_sum, n_fx, fmt("r_avg")));

        FxValue r_sub_avg_sq_sum = rec("r_sub_avg_sq_sum", quantize(0.0, fmt("r_sub_avg_sq_sum")));
        FxValue r_sq_sum = rec("r_sq_sum", quantize(0.0, fmt("r_sq_sum")));
        for (Index i = 0; i < L; ++i) {
            const FxValue& ri = window[static_cast<std::size_t>(i)];
            const FxValue r_sub_avg = rec("r_sub_avg", fx_sub(ri, r_avg, fmt("r_sub_avg")));
            const FxValue r_sub_avg_sq =
                rec("r_sub_avg_sq", fx_mul(r_sub_avg, r_sub_avg, fmt("r_sub_avg_sq")));
            r_sub_avg_sq_sum =
                rec("r_sub_avg_sq_sum", fx_add(r_sub_avg_sq_sum, r_sub_avg_sq, fmt("r_sub_avg_sq_sum")));
            const FxValue r_sq = rec("r_sq", fx_mul(ri, ri, fmt("r_sq")));
            r_sq_sum = rec("r_sq_sum", fx_add(r_sq_sum, r_sq, fmt("r_sq_sum")));
        }
        const FxValue r_var = rec("r_var", fx_div(r_sub_avg_sq_sum, n_minus_one_fx, fmt("r_var")));
        const FxValue chi_sq = rec("chi_sq", fx_div(r_sq_sum, r_var, fmt("chi_sq")));

        FxTraceRow row;
        row.k = k;
        row.tau = chi_sq.to_double();
        row.alarm = row.tau > shared.gamma;
        row.saturated = window_saturated;
        out.rows.push_back(row);
    }
    return out;
}

OpCountReport op_count_report(const FxRunResult& run) {
    OpCountReport report;
    if (run.rows.empty() && run.quantizations == 0) return report;
    report.fx_multipliers = kMultipliers;
    report.fx_adders_subtractors = kAddersSubtractors;
    report.fx_dividers = kDividers;
    report.float_multipliers = kMultipliers;
    report.float_adders_subtractors = kAddersSubtractors;
    report.float_dividers = kDividers;
    report.quantizations = run.quantizations;
    return report;
}

} // namespace rrgen
