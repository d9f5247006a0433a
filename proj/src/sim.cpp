#include "rrgen/sim.hpp"

namespace rrgen {

Matrix PredictorModel::markov_from_input(Index lag) const {
    Matrix acc = b;
    for (Index i = 0; i < lag; ++i) acc = phi * acc;
    return c * acc;
}

Matrix PredictorModel::markov_from_output(Index lag) const {
    Matrix acc = k_gain;
    for (Index i = 0; i < lag; ++i) acc = phi * acc;
    return c * acc;
}

IoRecord simulate_predictor(const PredictorModel& model, const Matrix& u, double sigma_e, RngStream& rng) {
    const Index n = u.cols();
    const Index l = model.n_out();
    IoRecord rec;
    rec.u = u;
    rec.y.resize(l, n);
    Vector x = Vector::Zero(model.n_state());
    for (Index k = 0; k < n; ++k) {
        Vector e = sigma_e > 0.0 ? Vector(gauss_draw(rng, l, sigma_e)) : Vector(Vector::Zero(l));
        rec.y.col(k) = model.c * x + model.d * u.col(k) + e;
        x = model.phi * x + model.b * u.col(k) + model.k_gain * rec.y.col(k);
    }
    return rec;
}

Matrix filter_predictor(const PredictorModel& model, const Matrix& u, const Matrix& y) {
    if (u.cols() != y.cols()) throw std::invalid_argument("filter_predictor: u and y lengths differ");
    const Index n = u.cols();
    Matrix out(model.n_out(), n);
    Vector x = Vector::Zero(model.n_state());
    for (Index k = 0; k < n; ++k) {
        out.col(k) = model.c * x + model.d * u.col(k);
        x = model.phi * x + model.b * u.col(k) + model.k_gain * y.col(k);
    }
    return out;
}

} // namespace rrgen
