#pragma once

#include "rrgen/random.hpp"
#include "rrgen/sysid.hpp"
#include "rrgen/types.hpp"

namespace rrgen {

/// One-step output predictor in closed form:
///   x(k+1) = phi * x(k) + b * u(k) + k_gain * y(k)
///   y(k)   = c * x(k) + d * u(k) + e(k)
/// with white innovation e. Used as the data generator for identification
/// and detection experiments.
struct PredictorModel {
    Matrix phi;     // n x n, stable
    Matrix b;       // n x m
    Matrix k_gain;  // n x l
    Matrix c;       // l x n
    Matrix d;       // l x m

    Index n_state() const { return phi.rows(); }
    Index n_in() const { return b.cols(); }
    Index n_out() const { return c.rows(); }

    /// Lag-j impulse-response block from the input path: c * phi^j * b.
    Matrix markov_from_input(Index lag) const;
    /// Lag-j impulse-response block from the output path: c * phi^j * k_gain.
    Matrix markov_from_output(Index lag) const;
};

/// Simulate the predictor from x(0) = 0 over the given input, drawing the
/// innovation sequence e ~ N(0, sigma_e^2) per output channel.
IoRecord simulate_predictor(const PredictorModel& model, const Matrix& u, double sigma_e, RngStream& rng);

/// Deterministic filter pass: run the recursion on externally supplied
/// (u, y) signals and return the noise-free predicted output c*x + d*u.
/// Useful for generating exactly consistent identification data.
Matrix filter_predictor(const PredictorModel& model, const Matrix& u, const Matrix& y);

} // namespace rrgen
