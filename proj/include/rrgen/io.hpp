#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rrgen/baseline.hpp"
#include "rrgen/fx_detector.hpp"
#include "rrgen/sysid.hpp"

namespace rrgen::io {

/// Thrown when a referenced file does not exist (distinct exit code at the CLI).
class FileMissing : public std::runtime_error {
public:
    explicit FileMissing(const std::filesystem::path& path)
        : std::runtime_error("file not found: " + path.string()), path_(path) {}
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Thrown on malformed file content.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// I/O record CSV: header u_1..u_m,y_1..y_l, one row per sample.
IoRecord read_io_csv(const std::filesystem::path& path);
void write_io_csv(const std::filesystem::path& path, const IoRecord& rec);

/// Detection trace: k,tau,gamma,alarm.
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
/// Extended trace with the per-sample signal: k,y,r,tau,gamma,alarm.
void write_baseline_trace_csv(const std::filesystem::path& path, const BaselineTrace& trace);
/// Fixed-point trace: k,tau_fx,gamma,alarm,saturated.
void write_fx_trace_csv(const std::filesystem::path& path, const FxRunResult& run);

/// Sweep outputs.
void write_far_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_snr_table_csv(const std::filesystem::path& path, const std::vector<SnrErrorRow>& rows);

/// Range report: name,sim_min,sim_max,whole,count,proposed_signed,proposed_word,proposed_frac.
void write_ranges_csv(const std::filesystem::path& path, const RangeMap& ranges, const FormatMap& formats);

/// Identified-model artifacts.
void write_markov_json(const std::filesystem::path& path, const MarkovEstimate& est, const Matrix& sigma_e_hat);
MarkovEstimate read_markov_json(const std::filesystem::path& path, Matrix* sigma_e_hat = nullptr);
void write_gram_json(const std::filesystem::path& path, const GramInverse& gram);
GramInverse read_gram_json(const std::filesystem::path& path);

/// Format map: {"schema_version":1, "formats": {name: {signed, word, frac,
/// static_min?, static_max?}}}. A bare top-level map is accepted on read.
void write_formats_json(const std::filesystem::path& path, const FormatMap& formats);
FormatMap read_formats_json(const std::filesystem::path& path, StaticBoundsMap* static_bounds = nullptr);

void write_op_count_json(const std::filesystem::path& path, const OpCountReport& report);

} // namespace rrgen::io
