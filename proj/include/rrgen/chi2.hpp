#pragma once

#include "rrgen/types.hpp"

namespace rrgen {

/// Degrees of freedom and false-alarm-rate target for threshold selection.
struct Chi2Params {
    Index dof = 1;
    double alpha = 0.005;
};

/// P(X <= x) for X ~ chi-squared with dof degrees of freedom, via the
/// regularized lower incomplete gamma function P(dof/2, x/2).
double chi2_cdf(double x, Index dof);

/// Quantile: the x with chi2_cdf(x, dof) == p, accurate to 1e-8 in p.
/// p must lie in [0, 1). Newton refinement seeded by the Wilson-Hilferty
/// cube approximation, with a bisection fallback.
double chi2_inv(double p, Index dof);

/// Detection threshold gamma_alpha = chi2_inv(1 - alpha, dof).
double threshold_for(const Chi2Params& params);

} // namespace rrgen
