#include "ratchet/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ratchet {

LatticeModel build_model(int half_width, double coupling, double ramp) {
    if (half_width < 1)
        throw std::invalid_argument("half_width must be >= 1, got " + std::to_string(half_width));
    if (!std::isfinite(coupling) || coupling <= 0.0)
        throw std::invalid_argument("coupling must be positive and finite, got " +
                                    std::to_string(coupling));
    if (!std::isfinite(ramp) || ramp < 0.0)
        throw std::invalid_argument("ramp must be non-negative and finite, got " +
                                    std::to_string(ramp));

    LatticeModel model;
    model.half_width = half_width;
    model.coupling = coupling;
    model.ramp = ramp;
    if (ramp > 0.0) {
        const int needed = static_cast<int>(std::ceil(4.0 * coupling / ramp)) + 10;
        model.truncation_adequate = half_width >= needed;
    }
    return model;
}

double propagation_constant(const LatticeModel& model, int j) {
    if (j < -model.half_width || j > model.half_width)
        throw std::out_of_range("site index " + std::to_string(j) + " outside [-M, M], M = " +
                                std::to_string(model.half_width));
    return static_cast<double>(j) * model.ramp;
}

InputSpec make_input(double alpha, double phi) {
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::invalid_argument("alpha must be non-negative and finite, got " +
                                    std::to_string(alpha));
    if (!std::isfinite(phi))
        throw std::invalid_argument("phi must be finite");

    constexpr double two_pi = 2.0 * std::numbers::pi;
    double reduced = std::fmod(phi, two_pi);
    if (reduced < 0.0) reduced += two_pi;
    return InputSpec{alpha, reduced};
}

FieldState initial_state(const LatticeModel& model, const InputSpec& input) {
    if (model.half_width < 1)
        throw std::invalid_argument("array too small: site j = 1 must exist");

    FieldState state;
    state.z = 0.0;
    state.amplitudes.assign(static_cast<size_t>(2 * model.half_width + 1), cdouble{0.0, 0.0});
    state.at(0) = cdouble{1.0, 0.0};
    state.at(1) = std::polar(input.alpha, input.phi);
    return state;
}

double total_power(const FieldState& state) {
    double power = 0.0;
    for (const auto& a : state.amplitudes) power += std::norm(a);
    return power;
}

}  // namespace ratchet
