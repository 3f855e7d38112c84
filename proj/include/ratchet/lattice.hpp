#pragma once

#include <complex>
#include <vector>

namespace ratchet {

using cdouble = std::complex<double>;

// Ramped waveguide array: sites j = -half_width .. half_width, nearest-neighbor
// coupling `coupling`, on-site propagation constant j * ramp.
struct LatticeModel {
    int half_width = 1;
    double coupling = 1.0;
    double ramp = 0.0;
    // half_width >= ceil(4 C / ramp) + 10 when ramp > 0; propagation results
    // from an inadequate model carry a leakage flag.
    bool truncation_adequate = true;
};

// Two-site excitation: a_0 = 1, a_1 = alpha * exp(i phi).
struct InputSpec {
    double alpha = 0.0;
    double phi = 0.0;  // radians, stored in [0, 2*pi)
};

// Complex amplitude per site at propagation distance z.
struct FieldState {
    double z = 0.0;
    std::vector<cdouble> amplitudes;  // index 0 <-> site -M
    double edge_leakage = 0.0;        // |a_-M|^2 + |a_M|^2 of the last propagation
    bool truncation_flagged = false;

    int half_width() const { return static_cast<int>((amplitudes.size() - 1) / 2); }
    cdouble& at(int j) { return amplitudes[static_cast<size_t>(j + half_width())]; }
    const cdouble& at(int j) const { return amplitudes[static_cast<size_t>(j + half_width())]; }
};

LatticeModel build_model(int half_width, double coupling, double ramp);

// On-site propagation constant j * ramp; throws std::out_of_range for |j| > M.
double propagation_constant(const LatticeModel& model, int j);

// Validates alpha >= 0 and reduces phi into [0, 2*pi).
InputSpec make_input(double alpha, double phi);

// a_0 = 1, a_1 = alpha e^{i phi}, everything else zero, z = 0.
FieldState initial_state(const LatticeModel& model, const InputSpec& input);

// Sum of |a_j|^2 over the array.
double total_power(const FieldState& state);

}  // namespace ratchet
