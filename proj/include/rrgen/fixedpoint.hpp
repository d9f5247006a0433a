#pragma once

#include <cstdint>
#include <string>

#include "rrgen/types.hpp"

namespace rrgen {

/// Q(word, frac) fixed-point format. A stored integer raw represents the
/// real value raw * 2^(-frac). word counts all bits including the sign bit
/// when signed.
struct FxFormat {
    bool is_signed = false;
    int word = 16;
    int frac = 0;

    void validate() const;

    /// Stored-integer bounds.
    __int128 raw_min() const;
    __int128 raw_max() const;

    /// Real-value bounds.
    double value_min() const;
    double value_max() const;

    bool operator==(const FxFormat&) const = default;
};

/// A quantized value: format, stored integer, and a flag recording whether
/// any operation producing it had to saturate.
class FxValue {
public:
    FxValue() = default;
    FxValue(FxFormat fmt, __int128 raw, bool saturated = false)
        : fmt_(fmt), raw_(raw), saturated_(saturated) {}

    const FxFormat& format() const { return fmt_; }
    __int128 raw() const { return raw_; }
    bool saturated() const { return saturated_; }
    double to_double() const;

private:
    FxFormat fmt_{};
    __int128 raw_ = 0;
    bool saturated_ = false;
};

/// Round x to the format's grid (ties toward +infinity), saturating at the
/// representable bounds. Saturation sets the value's flag instead of failing.
FxValue quantize(double x, const FxFormat& fmt);

/// Exact-arithmetic operations: the real-valued result of the operation on
/// the operands' real values is computed exactly in wide integers, then
/// rounded and saturated into out_fmt.
FxValue fx_add(const FxValue& a, const FxValue& b, const FxFormat& out_fmt);
FxValue fx_sub(const FxValue& a, const FxValue& b, const FxFormat& out_fmt);
FxValue fx_mul(const FxValue& a, const FxValue& b, const FxFormat& out_fmt);
FxValue fx_div(const FxValue& a, const FxValue& b, const FxFormat& out_fmt);

/// Fused multiply-subtract c - a*b, rounded once into out_fmt. Matches a
/// hardware MAC: the product never passes through an intermediate format.
FxValue fx_msub(const FxValue& c, const FxValue& a, const FxValue& b, const FxFormat& out_fmt);

/// Per-variable simulation range: observed extremes, integrality, count.
struct RangeRecord {
    std::string name;
    double sim_min = 0.0;
    double sim_max = 0.0;
    bool whole = true;
    std::int64_t count = 0;
};

/// Fold one observation into the record.
RangeRecord record(RangeRecord rec, double x);

/// Smallest format covering the recorded range: signed iff anything
/// negative was seen, frac = 0 for whole-number variables and target_frac
/// otherwise, and just enough integer bits that neither extreme saturates.
FxFormat propose_format(const RangeRecord& rec, int target_frac);

} // namespace rrgen
