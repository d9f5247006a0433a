#include <doctest.h>

#include <cmath>

#include "rrgen/fixedpoint.hpp"
#include "rrgen/random.hpp"

using namespace rrgen;

TEST_SUITE("fixedpoint") {

TEST_CASE("quantize hits the exact grid") {
    const FxFormat dhat_fmt{false, 8, 6};
    const FxValue v = quantize(2.04, dhat_fmt);
    CHECK(v.raw() == 131);  // round(2.04 * 64) = round(130.56)
    CHECK(v.to_double() == 2.046875);
    CHECK_FALSE(v.saturated());

    CHECK(quantize(0.0, FxFormat{true, 12, 6}).raw() == 0);
}

TEST_CASE("quantize saturates out-of-range values") {
    const FxFormat chi_fmt{false, 17, 6};
    const FxValue v = quantize(1e6, chi_fmt);
    CHECK(v.saturated());
    CHECK(v.to_double() == 2047.984375);  // 2^11 - 2^-6

    const FxValue neg = quantize(-1.0, chi_fmt);
    CHECK(neg.saturated());
    CHECK(neg.raw() == 0);

    const FxValue lo = quantize(-1e9, FxFormat{true, 12, 6});
    CHECK(lo.saturated());
    CHECK(lo.to_double() == -32.0);
}

TEST_CASE("quantize ties round toward positive infinity") {
    const FxFormat fmt{true, 12, 6};
    CHECK(quantize(129.5 / 64.0, fmt).raw() == 130);
    CHECK(quantize(-129.5 / 64.0, fmt).raw() == -129);
}

TEST_CASE("format validation and bounds") {
    const FxFormat zero_word{false, 0, 0};
    const FxFormat too_wide{false, 65, 6};
    const FxFormat frac_overflow{true, 8, 8};  // frac > word - 1
    CHECK_THROWS_AS(zero_word.validate(), std::invalid_argument);
    CHECK_THROWS_AS(too_wide.validate(), std::invalid_argument);
    CHECK_THROWS_AS(frac_overflow.validate(), std::invalid_argument);

    const FxFormat u{false, 2, 0};
    CHECK(u.value_min() == 0.0);
    CHECK(u.value_max() == 3.0);
    const FxFormat s{true, 12, 6};
    CHECK(s.value_min() == -32.0);
    CHECK(s.value_max() == 32.0 - 1.0 / 64.0);
}

TEST_CASE("addition of exactly representable values is exact") {
    const FxFormat fmt{true, 12, 6};
    const FxValue sum = fx_add(quantize(1.5, fmt), quantize(0.25, fmt), fmt);
    CHECK(sum.to_double() == 1.75);
    CHECK_FALSE(sum.saturated());
}

TEST_CASE("adding zero is the identity") {
    const FxFormat fmt{true, 14, 6};
    RngStream rng(71);
    for (int t = 0; t < 50; ++t) {
        const FxValue a = quantize(rng.next_gauss(20.0), fmt);
        if (a.saturated()) continue;
        const FxValue sum = fx_add(a, quantize(0.0, fmt), fmt);
        CHECK(sum.raw() == a.raw());
    }
}

TEST_CASE("multiplication follows the exact rational product") {
    const FxValue dhat = quantize(2.04, FxFormat{false, 8, 6});  // 2.046875
    const FxValue u = quantize(2.0, FxFormat{false, 2, 0});
    const FxValue prod = fx_mul(dhat, u, FxFormat{true, 12, 6});
    CHECK(prod.to_double() == 4.09375);
}

TEST_CASE("mixed-format arithmetic rounds once at the destination") {
    // 1/3-ish value times itself: compare against a long-double oracle of
    // the exact rational result.
    const FxFormat in{true, 20, 10};
    const FxFormat out{true, 16, 8};
    const FxValue a = quantize(0.33333, in);
    const FxValue b = quantize(1.77777, in);
    const FxValue prod = fx_mul(a, b, out);

    const long double exact = static_cast<long double>(a.raw()) * static_cast<long double>(b.raw()) /
                              1048576.0L;  // 2^20
    const long double expected_raw = floorl(exact * 256.0L + 0.5L);
    CHECK(static_cast<long double>(prod.raw()) == expected_raw);
}

TEST_CASE("division quantizes the exact quotient") {
    const FxFormat num_fmt{false, 15, 6};
    const FxFormat den_fmt{false, 4, 0};
    const FxFormat out{false, 12, 6};
    const FxValue num = quantize(454.84, num_fmt);
    const FxValue den = quantize(9.0, den_fmt);
    const FxValue q = fx_div(num, den, out);
    const long double exact = static_cast<long double>(num.raw()) / 64.0L / 9.0L;
    CHECK(static_cast<long double>(q.raw()) == floorl(exact * 64.0L + 0.5L));

    CHECK_THROWS_AS(fx_div(num, quantize(0.0, den_fmt), out), std::domain_error);
}

TEST_CASE("fused multiply-subtract equals the two-step exact path") {
    const FxValue ym = quantize(7.321, FxFormat{true, 12, 6});
    const FxValue dhat = quantize(2.04, FxFormat{false, 8, 6});
    const FxValue u = quantize(2.0, FxFormat{false, 2, 0});
    const FxFormat out{true, 12, 6};
    const FxValue r = fx_msub(ym, dhat, u, out);
    const double exact = ym.to_double() - dhat.to_double() * u.to_double();
    CHECK(r.to_double() == doctest::Approx(exact).epsilon(1e-12));
    CHECK(std::abs(r.to_double() - exact) <= 1.0 / 128.0);
}

TEST_CASE("quantization error bound inside the range") {
    RngStream rng(72);
    const FxFormat fmt{true, 16, 6};
    for (int t = 0; t < 200; ++t) {
        const double x = rng.next_gauss(50.0);
        if (x < fmt.value_min() || x > fmt.value_max()) continue;
        const FxValue v = quantize(x, fmt);
        CHECK(std::abs(v.to_double() - x) <= std::ldexp(1.0, -fmt.frac - 1));
    }
}

TEST_CASE("quantization is monotone") {
    RngStream rng(73);
    const FxFormat fmt{true, 14, 5};
    for (int t = 0; t < 200; ++t) {
        const double x = rng.next_gauss(100.0);
        const double y = rng.next_gauss(100.0);
        const FxValue qx = quantize(std::min(x, y), fmt);
        const FxValue qy = quantize(std::max(x, y), fmt);
        CHECK(qx.to_double() <= qy.to_double());
    }
}

TEST_CASE("quantize round-trips representable values") {
    RngStream rng(74);
    const FxFormat fmt{true, 24, 10};
    for (int t = 0; t < 200; ++t) {
        const FxValue v = quantize(rng.next_gauss(500.0), fmt);
        const FxValue again = quantize(v.to_double(), v.format());
        CHECK(again.raw() == v.raw());
    }
}

TEST_CASE("record tracks extremes, integrality and count") {
    RangeRecord rec{"N"};
    rec = record(rec, 10.0);
    rec = record(rec, 10.0);
    CHECK(rec.sim_min == 10.0);
    CHECK(rec.sim_max == 10.0);
    CHECK(rec.whole);
    CHECK(rec.count == 2);

    rec = record(rec, 2.5);
    CHECK_FALSE(rec.whole);
    CHECK(rec.sim_min == 2.5);
}

TEST_CASE("record is order independent") {
    const std::vector<double> values = {3.0, -1.5, 7.25, 0.0, 2.0};
    RangeRecord fwd{"a"}, rev{"a"};
    for (std::size_t i = 0; i < values.size(); ++i) fwd = record(fwd, values[i]);
    for (std::size_t i = values.size(); i > 0; --i) rev = record(rev, values[i - 1]);
    CHECK(fwd.sim_min == rev.sim_min);
    CHECK(fwd.sim_max == rev.sim_max);
    CHECK(fwd.whole == rev.whole);
    CHECK(fwd.count == rev.count);
}

TEST_CASE("propose_format reproduces tabulated proposals") {
    RangeRecord chi{"chi_sq", 0.7077598627653921, 1557.604152595377, false, 100};
    const FxFormat chi_fmt = propose_format(chi, 6);
    CHECK_FALSE(chi_fmt.is_signed);
    CHECK(chi_fmt.word == 17);
    CHECK(chi_fmt.frac == 6);

    RangeRecord r{"r", -8.063083634712106, 16.23254809745425, false, 100};
    const FxFormat r_fmt = propose_format(r, 6);
    CHECK(r_fmt.is_signed);
    CHECK(r_fmt.word == 12);
    CHECK(r_fmt.frac == 6);

    RangeRecord count{"count", 1.0, 2001.0, true, 100};
    const FxFormat count_fmt = propose_format(count, 6);
    CHECK_FALSE(count_fmt.is_signed);
    CHECK(count_fmt.word == 11);
    CHECK(count_fmt.frac == 0);

    CHECK_THROWS_AS(propose_format(RangeRecord{"empty"}, 6), std::invalid_argument);
}

TEST_CASE("propose_format is minimal: one fewer bit saturates an extreme") {
    const std::vector<RangeRecord> rows = {
        {"chi_sq", 0.7077598627653921, 1557.604152595377, false, 1},
        {"dhat", 2.04, 2.04, false, 1},
        {"r", -8.063083634712106, 16.23254809745425, false, 1},
        {"r_sum", -36.5277233214348, 106.92100391687019, false, 1},
        {"u", 2.0, 2.0, true, 1},
        {"count", 1.0, 2001.0, true, 1},
    };
    for (const auto& row : rows) {
        const FxFormat fmt = propose_format(row, 6);
        CHECK_FALSE(quantize(row.sim_min, fmt).saturated());
        CHECK_FALSE(quantize(row.sim_max, fmt).saturated());

        FxFormat narrower = fmt;
        narrower.word -= 1;
        if (narrower.word < narrower.frac + (narrower.is_signed ? 1 : 0) || narrower.word < 1) continue;
        const bool sat_min = quantize(row.sim_min, narrower).saturated();
        const bool sat_max = quantize(row.sim_max, narrower).saturated();
        CHECK((sat_min || sat_max));
    }
}

TEST_CASE("saturation flag propagates through arithmetic") {
    const FxFormat small{false, 6, 4};  // max 3.9375
    const FxValue a = quantize(3.5, small);
    const FxValue b = quantize(1.0, small);
    const FxValue sum = fx_add(a, b, small);
    CHECK(sum.saturated());
    CHECK(sum.to_double() == small.value_max());
}

} // TEST_SUITE
