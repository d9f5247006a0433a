#include "rrgen/chi2.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace rrgen {

namespace {

constexpr double kTermTol = 1e-14;
constexpr Index kMaxDof = 1000000;

// Regularized lower incomplete gamma P(a, x), split the usual way:
// series for x < a + 1, continued fraction for the complement otherwise.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kTermTol) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    const double tiny = std::numeric_limits<double>::min() / kTermTol;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kTermTol) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_p(double a, double x) {
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double chi2_pdf(double x, double dof) {
    if (x <= 0.0) return 0.0;
    const double half = dof / 2.0;
    return std::exp((half - 1.0) * std::log(x) - x / 2.0 - half * std::numbers::ln2 - std::lgamma(half));
}

// Inverse standard normal CDF (Acklam's rational approximation), used only
// to seed the Newton iteration.
double norm_inv(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

void check_dof(Index dof) {
    if (dof < 1) throw std::invalid_argument("chi2: dof must be >= 1");
    if (dof > kMaxDof) throw std::invalid_argument("chi2: dof above 1e6 unsupported");
}

} // namespace

double chi2_cdf(double x, Index dof) {
    check_dof(dof);
    if (x < 0.0) throw std::invalid_argument("chi2_cdf: x must be non-negative");
    return gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double chi2_inv(double p, Index dof) {
    check_dof(dof);
    if (!(p >= 0.0) || !(p < 1.0))
        throw std::invalid_argument("chi2_inv: p must lie in [0, 1)");
    if (p == 0.0) return 0.0;

    const double k = static_cast<double>(dof);
    const double a = k / 2.0;

    // Wilson-Hilferty cube seed; far-left tail falls back to the leading
    // series term x ~ 2*(p * a * Gamma(a))^(1/a).
    const double z = norm_inv(p);
    const double t = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    double x = k * t * t * t;
    if (!(x > 0.0) || !std::isfinite(x))
        x = 2.0 * std::exp((std::log(p) + std::log(a) + std::lgamma(a)) / a);
    if (!(x > 0.0) || !std::isfinite(x)) x = k;

    // Bracket the root, then alternate Newton and bisection inside it.
    double lo = 0.0;
    double hi = x;
    while (chi2_cdf(hi, dof) < p) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw std::runtime_error("chi2_inv: bracketing failed");
    }
    if (x >= hi) x = 0.5 * (lo + hi);

    for (int it = 0; it < 300; ++it) {
        const double f = chi2_cdf(x, dof) - p;
        if (f == 0.0) break;
        if (f > 0.0) hi = x; else lo = x;
        if (hi - lo <= 1e-12 * hi) break;
        const double deriv = chi2_pdf(x, k);
        double next = (deriv > 0.0 && std::isfinite(deriv)) ? x - f / deriv : x;
        if (!(next > lo) || !(next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }
    return x;
}

double threshold_for(const Chi2Params& params) {
    if (!(params.alpha > 0.0) || !(params.alpha < 1.0))
        throw std::invalid_argument("threshold_for: alpha must lie in (0, 1)");
    return chi2_inv(1.0 - params.alpha, params.dof);
}

} // namespace rrgen
