#include "ratchet/propagators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ratchet/bessel.hpp"
#include "ratchet/errors.hpp"

namespace ratchet {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLeakageFlagThreshold = 1e-8;

// sin(u)/u, series below 1e-4 where cancellation would bite.
double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

void check_site(const LatticeModel& model, int j, const char* what) {
    if (j < -model.half_width || j > model.half_width)
        throw std::out_of_range(std::string(what) + " index " + std::to_string(j) +
                                " outside [-M, M], M = " + std::to_string(model.half_width));
}

void check_distance(double z) {
    if (!std::isfinite(z) || z < 0.0)
        throw std::invalid_argument("propagation distance must be finite and >= 0, got " +
                                    std::to_string(z));
}

void check_grid(const LatticeModel& model, int K) {
    const int min_k = 2 * model.half_width + 1;
    if (K < min_k)
        throw std::invalid_argument("k-grid too small: K = " + std::to_string(K) +
                                    " would alias sites, need K >= " + std::to_string(min_k));
    if (K % 2 == 0)
        throw std::invalid_argument("k-grid size must be odd, got " + std::to_string(K));
}

void finish_state(const LatticeModel& model, FieldState& state) {
    const int M = model.half_width;
    state.edge_leakage = std::norm(state.at(-M)) + std::norm(state.at(M));
    state.truncation_flagged = state.edge_leakage > kLeakageFlagThreshold;
}

// Initial spectrum of the two-site input, (1 + alpha e^{i phi} e^{-i k}) / sqrt(2 pi).
cdouble input_spectrum(const InputSpec& input, double k) {
    const cdouble secondary = std::polar(input.alpha, input.phi - k);
    return (cdouble{1.0, 0.0} + secondary) / std::sqrt(2.0 * kPi);
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::green: return "green";
        case Method::rk4: return "rk4";
        case Method::spectral: return "spectral";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "green") return Method::green;
    if (name == "rk4") return Method::rk4;
    if (name == "spectral") return Method::spectral;
    throw usage_error("unknown method '" + name + "', expected green|rk4|spectral");
}

double green_bessel_argument(const LatticeModel& model, double z) {
    return 2.0 * model.coupling * z * sinc(0.5 * model.ramp * z);
}

cdouble green_coefficient_signed(const LatticeModel& model, int j, int j_src, double z, int sign) {
    check_site(model, j, "target");
    check_site(model, j_src, "source");
    check_distance(z);

    const double bz = model.ramp * z;
    const double phase =
        sign * (j_src * bz + 0.5 * static_cast<double>(j - j_src) * (bz - kPi));
    const double x = green_bessel_argument(model, z);
    return std::polar(1.0, phase) * bessel_j(j_src - j, x);
}

cdouble green_coefficient(const LatticeModel& model, int j, int j_src, double z) {
    return green_coefficient_signed(model, j, j_src, z, kGreenPhaseSign);
}

FieldState propagate_green(const LatticeModel& model, const InputSpec& input, double z) {
    check_distance(z);
    const int M = model.half_width;
    const double bz = model.ramp * z;
    const double x = green_bessel_argument(model, z);

    // Orders j' - j for j' in {0, 1}, j in -M..M.
    const BesselRow row = bessel_row(-M, M + 1, x);
    const cdouble secondary = std::polar(input.alpha, input.phi);
    const double s = kGreenPhaseSign;

    FieldState state;
    state.z = z;
    state.amplitudes.resize(static_cast<size_t>(2 * M + 1));
    for (int j = -M; j <= M; ++j) {
        const cdouble g0 = std::polar(1.0, s * 0.5 * j * (bz - kPi)) * row(-j);
        const cdouble g1 = std::polar(1.0, s * (bz + 0.5 * (j - 1) * (bz - kPi))) * row(1 - j);
        state.at(j) = g0 + secondary * g1;
    }
    finish_state(model, state);
    return state;
}

FieldState propagate_rk4(const LatticeModel& model, const FieldState& state0, double z_target,
                         int steps) {
    if (steps < 1)
        throw std::invalid_argument("rk4 step count must be >= 1");
    if (!std::isfinite(z_target) || z_target < state0.z)
        throw std::invalid_argument("rk4 target distance must be >= starting distance");
    if (static_cast<int>(state0.amplitudes.size()) != 2 * model.half_width + 1)
        throw std::invalid_argument("state size does not match the model");

    const double h = (z_target - state0.z) / steps;
    if (h > 0.1 / model.coupling)
        throw std::invalid_argument("rk4 step too large: h = " + std::to_string(h) +
                                    " exceeds 0.1/C");

    const int M = model.half_width;
    const size_t n = state0.amplitudes.size();
    const double C = model.coupling;
    const double b = model.ramp;

    // da_j/dz = -i j b a_j - i C (a_{j+1} + a_{j-1}), hard walls beyond +-M.
    auto derivative = [&](const std::vector<cdouble>& a, std::vector<cdouble>& out) {
        for (size_t i = 0; i < n; ++i) {
            const double beta_j = (static_cast<double>(i) - M) * b;
            cdouble coupled{0.0, 0.0};
            if (i + 1 < n) coupled += a[i + 1];
            if (i > 0) coupled += a[i - 1];
            out[i] = cdouble{0.0, -1.0} * (beta_j * a[i] + C * coupled);
        }
    };

    std::vector<cdouble> a = state0.amplitudes;
    std::vector<cdouble> k1(n), k2(n), k3(n), k4(n), tmp(n);

    for (int step = 0; step < steps; ++step) {
        derivative(a, k1);
        for (size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * h * k1[i];
        derivative(tmp, k2);
        for (size_t i = 0; i < n; ++i) tmp[i] = a[i] + 0.5 * h * k2[i];
        derivative(tmp, k3);
        for (size_t i = 0; i < n; ++i) tmp[i] = a[i] + h * k3[i];
        derivative(tmp, k4);
        for (size_t i = 0; i < n; ++i)
            a[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        if ((step & 127) == 0 || step == steps - 1) {
            for (const auto& v : a)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    throw numerical_error("rk4 integration produced a non-finite amplitude at z = " +
                                          std::to_string(state0.z + (step + 1) * h));
        }
    }

    FieldState state;
    state.z = z_target;
    state.amplitudes = std::move(a);
    finish_state(model, state);
    return state;
}

int default_rk4_steps(const LatticeModel& model, double dz, double step_hint) {
    const double h = step_hint > 0.0 ? step_hint : 0.001 / model.coupling;
    if (dz <= 0.0) return 1;
    return std::max(1, static_cast<int>(std::ceil(dz / h)));
}

SpectralField forward_transform(const FieldState& state, int K) {
    const int M = state.half_width();
    if (K < 2 * M + 1 || K % 2 == 0)
        throw std::invalid_argument("forward_transform: K must be odd and >= 2M+1");

    SpectralField spectral;
    spectral.z = state.z;
    spectral.k_grid.resize(static_cast<size_t>(K));
    spectral.values.resize(static_cast<size_t>(K));
    const double norm = 1.0 / std::sqrt(2.0 * kPi);
    for (int m = 0; m < K; ++m) {
        const double k = -kPi + 2.0 * kPi * m / K;
        spectral.k_grid[static_cast<size_t>(m)] = k;
        cdouble sum{0.0, 0.0};
        for (int j = -M; j <= M; ++j) sum += state.at(j) * std::polar(1.0, -k * j);
        spectral.values[static_cast<size_t>(m)] = norm * sum;
    }
    return spectral;
}

FieldState inverse_transform(const SpectralField& spectral, int M) {
    const int K = static_cast<int>(spectral.k_grid.size());
    if (spectral.values.size() != spectral.k_grid.size())
        throw std::invalid_argument("inverse_transform: grid/value size mismatch");
    if (K < 2 * M + 1 || K % 2 == 0)
        throw std::invalid_argument("inverse_transform: K must be odd and >= 2M+1");

    FieldState state;
    state.z = spectral.z;
    state.amplitudes.resize(static_cast<size_t>(2 * M + 1));
    const double norm = std::sqrt(2.0 * kPi) / K;
    for (int j = -M; j <= M; ++j) {
        cdouble sum{0.0, 0.0};
        for (int m = 0; m < K; ++m)
            sum += spectral.values[static_cast<size_t>(m)] *
                   std::polar(1.0, spectral.k_grid[static_cast<size_t>(m)] * j);
        state.at(j) = norm * sum;
    }
    return state;
}

SpectralField spectral_solution(const LatticeModel& model, const InputSpec& input, double z,
                                int K) {
    check_distance(z);
    check_grid(model, K);

    const double bz = model.ramp * z;
    const double x = green_bessel_argument(model, z);

    SpectralField spectral;
    spectral.z = z;
    spectral.k_grid.resize(static_cast<size_t>(K));
    spectral.values.resize(static_cast<size_t>(K));
    for (int m = 0; m < K; ++m) {
        const double k = -kPi + 2.0 * kPi * m / K;
        spectral.k_grid[static_cast<size_t>(m)] = k;
        const double phase = -x * std::cos(k + 0.5 * bz);
        spectral.values[static_cast<size_t>(m)] =
            input_spectrum(input, k + bz) * std::polar(1.0, phase);
    }
    return spectral;
}

FieldState propagate_spectral(const LatticeModel& model, const InputSpec& input, double z, int K) {
    const SpectralField spectral = spectral_solution(model, input, z, K);
    FieldState state = inverse_transform(spectral, model.half_width);
    finish_state(model, state);
    // Aliasing shows up as missing power once tails wrap past +-M.
    const double expected = 1.0 + input.alpha * input.alpha;
    if (std::abs(total_power(state) - expected) > 1e-6) state.truncation_flagged = true;
    return state;
}

double spectral_residual(const LatticeModel& model, const InputSpec& input, double z, double dz,
                         int K) {
    if (!(dz > 0.0) || !std::isfinite(dz))
        throw std::invalid_argument("spectral_residual: dz must be positive");
    if (z < dz)
        throw std::invalid_argument("spectral_residual: need z >= dz for the central difference");
    check_grid(model, K);

    const SpectralField mid = spectral_solution(model, input, z, K);
    const SpectralField fwd = spectral_solution(model, input, z + dz, K);
    const SpectralField bwd = spectral_solution(model, input, z - dz, K);

    // d/dk via the site representation: a~(k) is the generating function of the
    // a_j, so multiplying a_j by -i j differentiates it exactly on the grid.
    const int m_full = (K - 1) / 2;
    FieldState sites = inverse_transform(mid, m_full);
    for (int j = -m_full; j <= m_full; ++j) sites.at(j) *= cdouble{0.0, -static_cast<double>(j)};
    const SpectralField dk = forward_transform(sites, K);

    const double two_c = 2.0 * model.coupling;
    double worst = 0.0;
    for (int m = 0; m < K; ++m) {
        const size_t i = static_cast<size_t>(m);
        const cdouble dzdt = (fwd.values[i] - bwd.values[i]) / (2.0 * dz);
        const cdouble residual = dzdt +
                                 cdouble{0.0, two_c * std::cos(mid.k_grid[i])} * mid.values[i] -
                                 model.ramp * dk.values[i];
        worst = std::max(worst, std::abs(residual));
    }
    return worst;
}

FieldState propagate(const LatticeModel& model, const InputSpec& input, Method method, double z,
                     const PropagateOptions& opts) {
    switch (method) {
        case Method::green:
            return propagate_green(model, input, z);
        case Method::rk4:
            return propagate_rk4(model, initial_state(model, input), z,
                                 default_rk4_steps(model, z, opts.rk4_step));
        case Method::spectral: {
            const int K = opts.spectral_k > 0 ? opts.spectral_k : 2 * model.half_width + 1;
            return propagate_spectral(model, input, z, K);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace ratchet
