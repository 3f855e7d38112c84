#pragma once

#include <string>
#include <vector>

#include "ratchet/lattice.hpp"

namespace ratchet {

enum class Method { green, rk4, spectral };

std::string method_name(Method method);
Method parse_method(const std::string& name);

// Fourier dual of FieldState on a uniform k-grid over [-pi, pi).
struct SpectralField {
    double z = 0.0;
    std::vector<double> k_grid;
    std::vector<cdouble> values;
};

// Global phase sign of the transfer-coefficient prefactor. Resolved by a
// finite-difference probe (see green_satisfies_coupled_equations and the
// propagator tests): with sign = -1 the coefficient satisfies
//   da_j/dz = -i j ramp a_j - i C (a_{j+1} + a_{j-1});
// sign = +1 generates the complex-conjugate evolution instead.
inline constexpr int kGreenPhaseSign = -1;

// Argument of the Bessel factor, (4C/ramp) sin(ramp z / 2), evaluated as
// 2 C z sinc(ramp z / 2) so the ramp -> 0 limit 2 C z comes out smoothly.
double green_bessel_argument(const LatticeModel& model, double z);

// Site-to-site transfer amplitude after distance z:
//   G_{j,j'} = exp[i s (j' b z + (j - j')(b z - pi)/2)] J_{j'-j}[(4C/b) sin(b z/2)]
// with b = model.ramp and s = sign. The exact solution of the coupled-mode
// equations is the sign = kGreenPhaseSign branch.
cdouble green_coefficient_signed(const LatticeModel& model, int j, int j_src, double z, int sign);
cdouble green_coefficient(const LatticeModel& model, int j, int j_src, double z);

// a_j(z) = G_{j,0} + alpha e^{i phi} G_{j,1}; only the two source columns the
// input populates are evaluated.
FieldState propagate_green(const LatticeModel& model, const InputSpec& input, double z);

// Fixed-step RK4 integration of the coupled-mode equations with hard-wall
// truncation (amplitudes beyond +-M pinned to zero).
FieldState propagate_rk4(const LatticeModel& model, const FieldState& state0, double z_target,
                         int steps);

// Step count giving h <= max(step_hint, tiny) over the interval; step_hint
// defaults to 0.001 / coupling when <= 0.
int default_rk4_steps(const LatticeModel& model, double dz, double step_hint = 0.0);

// Sampled transform pair: forward is (1/sqrt(2 pi)) sum_j a_j e^{-i k j} on a
// K-point grid, inverse is the exact quadrature back to sites -M..M. K must be
// odd and >= 2M+1 so the trigonometric polynomial is fully resolved.
SpectralField forward_transform(const FieldState& state, int K);
FieldState inverse_transform(const SpectralField& spectral, int M);

// Closed-form k-space solution by the method of characteristics:
//   a~(k, z) = a~(k + b z, 0) * exp(-i X(z) cos(k + b z / 2)),
// X(z) = green_bessel_argument. Exact in z; only the k-grid is discrete.
SpectralField spectral_solution(const LatticeModel& model, const InputSpec& input, double z, int K);

// spectral_solution followed by inverse_transform.
FieldState propagate_spectral(const LatticeModel& model, const InputSpec& input, double z, int K);

// Max-norm residual of the k-space evolution equation
//   d a~/dz + 2 i C cos(k) a~ - b (d a~/dk) = 0
// with d/dz by central difference (O(dz^2)) and d/dk spectrally exact.
double spectral_residual(const LatticeModel& model, const InputSpec& input, double z, double dz,
                         int K);

// One-shot dispatch used by the runner and the verification driver.
struct PropagateOptions {
    double rk4_step = 0.0;  // <= 0 -> default
    int spectral_k = 0;     // <= 0 -> 2M+1
};
FieldState propagate(const LatticeModel& model, const InputSpec& input, Method method, double z,
                     const PropagateOptions& opts = {});

}  // namespace ratchet
