#include "ratchet/observables.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ratchet/bessel.hpp"

namespace ratchet {
namespace {

double ramp_half_angle(const LatticeModel& model, double z) { return 0.5 * model.ramp * z; }

// The interference term of the site moment, written so the 1/ramp prefactor is
// absorbed into the Bessel argument X(z) = 2 C z sinc(ramp z / 2); continuous
// through ramp = 0.
double moment_cross_term(const LatticeModel& model, const InputSpec& input, double z) {
    const double u = ramp_half_angle(model, z);
    return input.alpha * green_bessel_argument(model, z) * std::sin(u - input.phi);
}

}  // namespace

std::vector<double> intensity_profile(const FieldState& state) {
    std::vector<double> profile(state.amplitudes.size());
    for (size_t i = 0; i < profile.size(); ++i) profile[i] = std::norm(state.amplitudes[i]);
    return profile;
}

double intensity_closed_form(const LatticeModel& model, const InputSpec& input, int j, double z,
                             int cross_sign) {
    if (j < -model.half_width || j > model.half_width)
        throw std::out_of_range("site index outside [-M, M]");
    if (!std::isfinite(z) || z < 0.0)
        throw std::invalid_argument("distance must be finite and >= 0");

    const double x = green_bessel_argument(model, z);
    const double jm = bessel_j(-j, x);
    const double jm1 = bessel_j(1 - j, x);
    const double u = ramp_half_angle(model, z);
    const double cross = std::sin(u + cross_sign * input.phi);
    return jm * jm + input.alpha * input.alpha * jm1 * jm1 -
           2.0 * input.alpha * jm * jm1 * cross;
}

double intensity_closed_form(const LatticeModel& model, const InputSpec& input, int j, double z,
                             int cross_sign, const BesselRow& row) {
    const double jm = row(-j);
    const double jm1 = row(1 - j);
    const double u = ramp_half_angle(model, z);
    const double cross = std::sin(u + cross_sign * input.phi);
    return jm * jm + input.alpha * input.alpha * jm1 * jm1 -
           2.0 * input.alpha * jm * jm1 * cross;
}

double mean_site(const FieldState& state, bool normalized) {
    const int M = state.half_width();
    double sum = 0.0;
    for (int j = -M; j <= M; ++j) sum += j * std::norm(state.at(j));
    return normalized ? sum / total_power(state) : sum;
}

double mean_site_sq(const FieldState& state, bool normalized) {
    const int M = state.half_width();
    double sum = 0.0;
    for (int j = -M; j <= M; ++j) sum += static_cast<double>(j) * j * std::norm(state.at(j));
    return normalized ? sum / total_power(state) : sum;
}

double mean_site_closed_form(const LatticeModel& model, const InputSpec& input, double z) {
    if (!std::isfinite(z) || z < 0.0)
        throw std::invalid_argument("distance must be finite and >= 0");
    return input.alpha * input.alpha + moment_cross_term(model, input, z);
}

double mean_site_sq_closed_form(const LatticeModel& model, const InputSpec& input, double z) {
    const double x = green_bessel_argument(model, z);
    return mean_site_closed_form(model, input, z) +
           0.5 * (1.0 + input.alpha * input.alpha) * x * x;
}

double small_z_slope(const LatticeModel& model, const InputSpec& input) {
    return -2.0 * input.alpha * model.coupling * std::sin(input.phi);
}

std::optional<double> bloch_period(const LatticeModel& model) {
    if (model.ramp <= 0.0) return std::nullopt;
    return 2.0 * std::numbers::pi / model.ramp;
}

ObservableSeries compute_series(const LatticeModel& model, const InputSpec& input, Method method,
                                std::span<const double> z_grid, const PropagateOptions& opts,
                                bool normalized) {
    ObservableSeries series;
    series.model = model;
    series.input = input;
    series.method = method;
    series.z_grid.assign(z_grid.begin(), z_grid.end());

    for (size_t i = 1; i < series.z_grid.size(); ++i)
        if (series.z_grid[i] < series.z_grid[i - 1])
            throw std::invalid_argument("z grid must be non-decreasing");

    series.intensity.reserve(series.z_grid.size());
    series.power.reserve(series.z_grid.size());
    series.mean_site.reserve(series.z_grid.size());
    series.mean_site_sq.reserve(series.z_grid.size());

    // RK4 advances one trajectory through the grid; the exact methods evaluate
    // each point independently.
    FieldState running = initial_state(model, input);
    for (double z : series.z_grid) {
        FieldState state;
        if (method == Method::rk4) {
            const int steps = default_rk4_steps(model, z - running.z, opts.rk4_step);
            running = propagate_rk4(model, running, z, steps);
            state = running;
        } else {
            state = propagate(model, input, method, z, opts);
        }

        series.intensity.push_back(intensity_profile(state));
        series.power.push_back(total_power(state));
        series.mean_site.push_back(mean_site(state, normalized));
        series.mean_site_sq.push_back(mean_site_sq(state, normalized));
        series.max_edge_leakage = std::max(series.max_edge_leakage, state.edge_leakage);
        series.truncation_flagged = series.truncation_flagged || state.truncation_flagged;
    }
    return series;
}

}  // namespace ratchet
