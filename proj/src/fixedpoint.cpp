#include "rrgen/fixedpoint.hpp"

#include <cmath>
#include <stdexcept>

namespace rrgen {

namespace {

// Widest intermediate we form exactly; anything needing more bits is a
// format combination outside the supported envelope.
constexpr int kMaxBits = 126;

int bit_width(__int128 v) {
    if (v < 0) v = -v;
    int bits = 0;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

__int128 checked_shift_left(__int128 v, int shift) {
    if (shift < 0 || bit_width(v) + shift > kMaxBits)
        throw std::overflow_error("fx: intermediate exceeds the supported bit width");
    return v << shift;
}

// floor(n / d) for d > 0.
__int128 floor_div(__int128 n, __int128 d) {
    __int128 q = n / d;
    if (n % d != 0 && n < 0) --q;
    return q;
}

// round(n / d) with ties toward +infinity, d > 0.
__int128 round_div(__int128 n, __int128 d) {
    return floor_div(2 * n + d, 2 * d);
}

FxValue saturate_raw(__int128 raw, const FxFormat& fmt, bool already_saturated) {
    bool sat = already_saturated;
    if (raw > fmt.raw_max()) {
        raw = fmt.raw_max();
        sat = true;
    } else if (raw < fmt.raw_min()) {
        raw = fmt.raw_min();
        sat = true;
    }
    return FxValue(fmt, raw, sat);
}

// Exact intermediate num * 2^(-scale) rounded into fmt.
FxValue quantize_exact(__int128 num, int scale, const FxFormat& fmt) {
    fmt.validate();
    __int128 raw;
    if (fmt.frac >= scale) {
        raw = checked_shift_left(num, fmt.frac - scale);
    } else {
        const int shift = scale - fmt.frac;
        if (shift > kMaxBits) throw std::overflow_error("fx: intermediate exceeds the supported bit width");
        // Adding half then flooring implements round-half-toward-+inf.
        const __int128 half = static_cast<__int128>(1) << (shift - 1);
        raw = (num + half) >> shift;
    }
    return saturate_raw(raw, fmt, false);
}

} // namespace

void FxFormat::validate() const {
    if (word < 1 || word > 64) throw std::invalid_argument("FxFormat: word must lie in [1, 64]");
    const int sign_bits = is_signed ? 1 : 0;
    if (frac < 0 || frac > word - sign_bits)
        throw std::invalid_argument("FxFormat: frac must lie in [0, word - signed]");
}

__int128 FxFormat::raw_min() const {
    if (!is_signed) return 0;
    return -(static_cast<__int128>(1) << (word - 1));
}

__int128 FxFormat::raw_max() const {
    if (!is_signed) return (static_cast<__int128>(1) << word) - 1;
    return (static_cast<__int128>(1) << (word - 1)) - 1;
}

double FxFormat::value_min() const { return std::ldexp(static_cast<double>(raw_min()), -frac); }
double FxFormat::value_max() const { return std::ldexp(static_cast<double>(raw_max()), -frac); }

double FxValue::to_double() const { return std::ldexp(static_cast<double>(raw_), -fmt_.frac); }

FxValue quantize(double x, const FxFormat& fmt) {
    fmt.validate();
    if (std::isnan(x)) throw std::invalid_argument("quantize: NaN input");

    const long double t = ldexpl(static_cast<long double>(x), fmt.frac);
    long double rounded;
    if (fabsl(t) >= 0x1p63L) {
        // Spacing is at least one: t is already integral (or infinite).
        rounded = t;
    } else {
        rounded = floorl(t + 0.5L);
    }

    const long double lo = static_cast<long double>(fmt.raw_min());
    const long double hi = static_cast<long double>(fmt.raw_max());
    if (rounded > hi) return FxValue(fmt, fmt.raw_max(), true);
    if (rounded < lo) return FxValue(fmt, fmt.raw_min(), true);
    return FxValue(fmt, static_cast<__int128>(rounded), false);
}

FxValue fx_add(const FxValue& a, const FxValue& b, const FxFormat& out_fmt) {
    const int scale = std::max(a.format().frac, b.format().frac);
    const __int128 na = checked_shift_left(a.raw(), scale - a.format().frac);
    const __int128 nb = checked_shift_left(b.raw(), scale - b.format().frac);
    return quantize_exact(na + nb, scale, out_fmt);
}

FxValue fx_sub(const FxValue& a, const FxValue& b, const FxFormat& out_fmt) {
    const int scale = std::max(a.format().frac, b.format().frac);
    const __int128 na = checked_shift_left(a.raw(), scale - a.format().frac);
    const __int128 nb = checked_shift_left(b.raw(), scale - b.format().frac);
    return quantize_exact(na - nb, scale, out_fmt);
}

FxValue fx_mul(const FxValue& a, const FxValue& b, const FxFormat& out_fmt) {
    if (bit_width(a.raw()) + bit_width(b.raw()) > kMaxBits)
        throw std::overflow_error("fx: intermediate exceeds the supported bit width");
    return quantize_exact(a.raw() * b.raw(), a.format().frac + b.format().frac, out_fmt);
}

FxValue fx_msub(const FxValue& c, const FxValue& a, const FxValue& b, const FxFormat& out_fmt) {
    if (bit_width(a.raw()) + bit_width(b.raw()) > kMaxBits)
        throw std::overflow_error("fx: intermediate exceeds the supported bit width");
    const __int128 prod = a.raw() * b.raw();
    const int prod_scale = a.format().frac + b.format().frac;
    const int scale = std::max(prod_scale, c.format().frac);
    const __int128 nc = checked_shift_left(c.raw(), scale - c.format().frac);
    const __int128 np = checked_shift_left(prod, scale - prod_scale);
    return quantize_exact(nc - np, scale, out_fmt);
}

FxValue fx_div(const FxValue& a, const FxValue& b, const FxFormat& out_fmt) {
    out_fmt.validate();
    if (b.raw() == 0) throw std::domain_error("fx_div: division by zero");

    // a/b = a.raw * 2^(fb - fa) / b.raw; fold the output scale in and round once.
    const int shift = b.format().frac - a.format().frac + out_fmt.frac;
    __int128 num = a.raw();
    __int128 den = b.raw();
    if (shift >= 0)
        num = checked_shift_left(num, shift);
    else
        den = checked_shift_left(den, -shift);
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return saturate_raw(round_div(num, den), out_fmt, false);
}

RangeRecord record(RangeRecord rec, double x) {
    if (rec.count == 0) {
        rec.sim_min = x;
        rec.sim_max = x;
    } else {
        rec.sim_min = std::min(rec.sim_min, x);
        rec.sim_max = std::max(rec.sim_max, x);
    }
    if (x != std::floor(x)) rec.whole = false;
    ++rec.count;
    return rec;
}

FxFormat propose_format(const RangeRecord& rec, int target_frac) {
    if (rec.count < 1) throw std::invalid_argument("propose_format: empty record");
    if (target_frac < 0) throw std::invalid_argument("propose_format: negative fractional length");

    FxFormat fmt;
    fmt.is_signed = rec.sim_min < 0.0;
    fmt.frac = rec.whole ? 0 : target_frac;

    const double step = std::ldexp(1.0, -fmt.frac);
    int int_bits = 0;
    // Smallest I with 2^I - 2^(-frac) >= sim_max ...
    while (rec.sim_max > 0.0 && std::ldexp(1.0, int_bits) < rec.sim_max + step) ++int_bits;
    // ... and -2^I <= sim_min.
    int neg_bits = 0;
    while (rec.sim_min < 0.0 && -std::ldexp(1.0, neg_bits) > rec.sim_min) ++neg_bits;
    int_bits = std::max(int_bits, neg_bits);

    fmt.word = (fmt.is_signed ? 1 : 0) + int_bits + fmt.frac;
    if (fmt.word < 1) fmt.word = 1;
    if (fmt.word > 64)
        throw std::invalid_argument("propose_format: range requires a word longer than 64 bits");
    fmt.validate();
    return fmt;
}

} // namespace rrgen
