#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rrgen/baseline.hpp"
#include "rrgen/fixedpoint.hpp"

namespace rrgen {

/// The named variables of the windowed detector dataflow, in a fixed order.
/// These names key the format map and the range report.
const std::vector<std::string>& dataflow_variables();

/// Optional hand-specified bounds that widen a proposal beyond what the
/// simulation saw.
struct StaticBounds {
    std::optional<double> min;
    std::optional<double> max;
};

using FormatMap = std::map<std::string, FxFormat>;
using RangeMap = std::map<std::string, RangeRecord>;
using StaticBoundsMap = std::map<std::string, StaticBounds>;

/// Floating-point pass: run the detector while recording every named
/// variable's range. The trace doubles as the reference the fixed-point
/// pass is compared against.
struct RangePass {
    RangeMap ranges;
    BaselineTrace trace;
};
RangePass collect_ranges(const BaselineConfig& cfg);

/// Format proposals for every named variable at the common fractional
/// length, optionally widened by static bounds.
FormatMap propose_formats(const RangeMap& ranges, int target_frac,
                          const StaticBoundsMap& static_bounds = {});

struct FxTraceRow {
    Index k = 0;
    double tau = 0.0;
    bool alarm = false;
    bool saturated = false;  // any saturation while forming this window's statistic
};

/// Static per-window operator census of the detector dataflow graph plus
/// the dynamic quantization count of a completed run. The graph is the same
/// for the floating and fixed executions, so both columns are reported.
struct OpCountReport {
    int fx_multipliers = 0;
    int fx_adders_subtractors = 0;
    int fx_dividers = 0;
    int float_multipliers = 0;
    int float_adders_subtractors = 0;
    int float_dividers = 0;
    std::int64_t quantizations = 0;
};

struct FxRunResult {
    double gain_hat = 0.0;   // floating identification result fed to the datapath
    double gamma = 0.0;
    std::vector<FxTraceRow> rows;
    RangeMap ranges;         // ranges observed by the fixed-point execution
    std::int64_t quantizations = 0;
};

/// Execute the detector with every named assignment quantized into its
/// declared format. Throws when a required variable has no format.
FxRunResult fx_run_detector(const BaselineConfig& cfg, const FormatMap& formats);

/// Operator census for a completed run.
OpCountReport op_count_report(const FxRunResult& run);

} // namespace rrgen
