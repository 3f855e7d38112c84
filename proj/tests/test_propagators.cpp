#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ratchet/observables.hpp"
#include "ratchet/propagators.hpp"
#include "series_oracle.hpp"

using namespace ratchet;
using ratchet::testing::bessel_series_oracle;

namespace {

constexpr double kPi = std::numbers::pi;

LatticeModel reference_model() { return build_model(40, 1.0, 0.73); }

double max_amp_diff(const FieldState& a, const FieldState& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(a.amplitudes[i] - b.amplitudes[i]));
    return worst;
}

// Residual of the coupled-mode equation for one Green column, probed by a
// central difference in z. This is the sign-resolution procedure: only one
// phase-sign branch satisfies the equation.
double coupled_equation_residual(const LatticeModel& model, int j_src, double z, int sign) {
    const double dz = 1e-5;
    double worst = 0.0;
    for (int j = -6; j <= 6; ++j) {
        const cdouble fwd = green_coefficient_signed(model, j, j_src, z + dz, sign);
        const cdouble bwd = green_coefficient_signed(model, j, j_src, z - dz, sign);
        const cdouble dzdt = (fwd - bwd) / (2.0 * dz);

        const cdouble here = green_coefficient_signed(model, j, j_src, z, sign);
        const cdouble up = green_coefficient_signed(model, j + 1, j_src, z, sign);
        const cdouble down = green_coefficient_signed(model, j - 1, j_src, z, sign);
        const cdouble rhs = cdouble{0.0, -1.0} * (propagation_constant(model, j) * here +
                                                  model.coupling * (up + down));
        worst = std::max(worst, std::abs(dzdt - rhs));
    }
    return worst;
}

}  // namespace

TEST_CASE("green coefficient is the identity at z = 0") {
    const LatticeModel model = reference_model();
    for (int j = -3; j <= 3; ++j)
        for (int js = -3; js <= 3; ++js) {
            const cdouble g = green_coefficient(model, j, js, 0.0);
            if (j == js)
                CHECK(std::abs(g - cdouble{1.0, 0.0}) < 1e-15);
            else
                CHECK(std::abs(g) < 1e-15);
        }
}

TEST_CASE("green coefficient moduli at the revival and half-period") {
    const LatticeModel model = reference_model();
    const double period = 2.0 * kPi / model.ramp;

    CHECK(std::abs(green_coefficient(model, 0, 0, period)) == doctest::Approx(1.0).epsilon(1e-12));

    const double expected = std::abs(bessel_series_oracle(0, 4.0 / 0.73));
    CHECK(std::abs(green_coefficient(model, 0, 0, period / 2)) ==
          doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("phase sign resolution: only the adopted sign solves the coupled equations") {
    const LatticeModel model = reference_model();
    for (int j_src : {0, 1}) {
        for (double z : {0.4, 1.7}) {
            CAPTURE(j_src);
            CAPTURE(z);
            CHECK(coupled_equation_residual(model, j_src, z, kGreenPhaseSign) < 1e-7);
            CHECK(coupled_equation_residual(model, j_src, z, -kGreenPhaseSign) > 1e-2);
        }
    }
}

TEST_CASE("green errors") {
    const LatticeModel model = reference_model();
    CHECK_THROWS_AS(green_coefficient(model, 41, 0, 1.0), std::out_of_range);
    CHECK_THROWS_AS(green_coefficient(model, 0, -41, 1.0), std::out_of_range);
    CHECK_THROWS_AS(green_coefficient(model, 0, 0, -1.0), std::invalid_argument);
}

TEST_CASE("green propagation at z = 0 reproduces the input") {
    const LatticeModel model = reference_model();
    const InputSpec input = make_input(1.0, 37.0 * kPi / 180.0);
    CHECK(max_amp_diff(propagate_green(model, input, 0.0), initial_state(model, input)) < 1e-14);
}

TEST_CASE("single-site input gives the symmetric Bessel profile") {
    const LatticeModel model = reference_model();
    const InputSpec input = make_input(0.0, 0.0);
    const double z = kPi / model.ramp;
    const FieldState state = propagate_green(model, input, z);

    const double x = 4.0 / 0.73;  // (4C/beta) sin(beta z / 2) at the half period
    for (int j = -12; j <= 12; ++j) {
        const double expected = bessel_series_oracle(-j, x);
        CHECK(std::norm(state.at(j)) == doctest::Approx(expected * expected).epsilon(1e-9));
        CHECK(std::norm(state.at(j)) == doctest::Approx(std::norm(state.at(-j))).epsilon(1e-12));
    }
}

TEST_CASE("rk4 agrees with the green propagator") {
    const LatticeModel model = reference_model();
    const InputSpec input = make_input(1.0, 37.0 * kPi / 180.0);
    const double z = kPi / model.ramp;

    const FieldState green = propagate_green(model, input, z);
    const FieldState rk4 =
        propagate_rk4(model, initial_state(model, input), z, default_rk4_steps(model, z));
    CHECK(max_amp_diff(green, rk4) < 1e-6);
    CHECK(total_power(rk4) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("rk4 edge behavior") {
    const LatticeModel model = reference_model();
    const FieldState start = initial_state(model, make_input(0.0, 0.0));

    SUBCASE("zero-length integration is the identity") {
        const FieldState same = propagate_rk4(model, start, start.z, 5);
        CHECK(max_amp_diff(same, start) == 0.0);
    }
    SUBCASE("full Bloch revival") {
        const double period = 2.0 * kPi / model.ramp;
        const FieldState back =
            propagate_rk4(model, start, period, default_rk4_steps(model, period));
        CHECK(std::norm(back.at(0)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("oversized steps are rejected") {
        CHECK_THROWS_AS(propagate_rk4(model, start, 10.0, 5), std::invalid_argument);
        CHECK_THROWS_AS(propagate_rk4(model, start, 1.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(propagate_rk4(model, start, start.z - 1.0, 5), std::invalid_argument);
    }
}

TEST_CASE("transforms: flat spectrum of a delta and Parseval") {
    const LatticeModel model = reference_model();
    const int K = 2 * model.half_width + 1;

    const SpectralField flat = forward_transform(initial_state(model, make_input(0.0, 0.0)), K);
    for (const cdouble& v : flat.values)
        CHECK(std::abs(v - cdouble{1.0 / std::sqrt(2.0 * kPi), 0.0}) < 1e-12);

    const FieldState two_site = initial_state(model, make_input(1.0, 37.0 * kPi / 180.0));
    const SpectralField spectrum = forward_transform(two_site, K);
    double power = 0.0;
    for (const cdouble& v : spectrum.values) power += std::norm(v);
    power *= 2.0 * kPi / K;
    CHECK(power == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("transform round trip is the identity") {
    const LatticeModel model = build_model(12, 1.0, 0.5);
    std::mt19937 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);

    FieldState state = initial_state(model, make_input(0.0, 0.0));
    for (auto& a : state.amplitudes) a = cdouble{gauss(rng), gauss(rng)};

    for (int K : {25, 37}) {
        const FieldState back = inverse_transform(forward_transform(state, K), model.half_width);
        CHECK(max_amp_diff(back, state) < 1e-12);
    }

    CHECK_THROWS_AS(forward_transform(state, 23), std::invalid_argument);  // K < 2M+1
    CHECK_THROWS_AS(forward_transform(state, 26), std::invalid_argument);  // even
}

TEST_CASE("spectral propagator matches green") {
    const LatticeModel model = reference_model();
    const InputSpec input = make_input(1.0, 37.0 * kPi / 180.0);
    const int K = 2 * model.half_width + 1;
    for (double z : {0.3, kPi / model.ramp, 7.0}) {
        const FieldState spectral = propagate_spectral(model, input, z, K);
        CHECK(max_amp_diff(propagate_green(model, input, z), spectral) < 1e-6);
        CHECK(total_power(spectral) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("vanishing coupling freezes the intensities to ramp phases") {
    const LatticeModel model = build_model(10, 1e-12, 1.0);
    const InputSpec input = make_input(0.7, 1.1);
    const double z = 2.5;
    const FieldState state = propagate_spectral(model, input, z, 2 * model.half_width + 1);

    const FieldState start = initial_state(model, input);
    for (int j = -10; j <= 10; ++j) {
        const cdouble expected = start.at(j) * std::polar(1.0, -j * model.ramp * z);
        CHECK(std::abs(state.at(j) - expected) < 1e-9);
    }
}

TEST_CASE("ramp-free array shows discrete diffraction") {
    const LatticeModel model = build_model(30, 1.0, 0.0);
    const InputSpec input = make_input(0.0, 0.0);
    const double z = 3.0;

    for (const FieldState& state :
         {propagate_spectral(model, input, z, 2 * model.half_width + 1),
          propagate_green(model, input, z)}) {
        for (int j = -12; j <= 12; ++j) {
            const double expected = std::abs(bessel_series_oracle(j, 2.0 * z));
            CHECK(std::abs(state.at(j)) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("spectral residual is small and shrinks quadratically in dz") {
    const LatticeModel model = reference_model();
    const InputSpec input = make_input(1.0, 37.0 * kPi / 180.0);
    const int K = 129;
    const double z = 1.3;

    const double r1 = spectral_residual(model, input, z, 1e-3, K);
    const double r2 = spectral_residual(model, input, z, 5e-4, K);
    CHECK(r1 < 1e-4);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("spectral residual for near-pure advection") {
    const LatticeModel model = build_model(40, 1e-12, 0.73);
    SUBCASE("single-site input has a z-independent spectrum") {
        CHECK(spectral_residual(model, make_input(0.0, 0.0), 1.0, 1e-3, 129) < 1e-9);
    }
    SUBCASE("two-site input leaves only the differencing error") {
        CHECK(spectral_residual(model, make_input(1.0, 0.3), 1.0, 1e-3, 129) < 1e-7);
    }
}

TEST_CASE("three propagators agree on random configurations") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> alpha_d(0.0, 1.0), phi_d(0.0, 2.0 * kPi),
        boc_d(0.5, 2.0);

    for (int trial = 0; trial < 5; ++trial) {
        const double boc = boc_d(rng);
        const LatticeModel model = build_model(40, 1.0, boc);
        const InputSpec input = make_input(alpha_d(rng), phi_d(rng));
        std::uniform_real_distribution<double> z_d(0.0, 2.0 * kPi / model.ramp);
        const double z = z_d(rng);
        CAPTURE(boc);
        CAPTURE(z);

        const FieldState green = propagate_green(model, input, z);
        const FieldState rk4 =
            propagate_rk4(model, initial_state(model, input), z, default_rk4_steps(model, z));
        const FieldState spectral = propagate_spectral(model, input, z, 2 * model.half_width + 1);
        CHECK(max_amp_diff(green, rk4) < 1e-6);
        CHECK(max_amp_diff(green, spectral) < 1e-6);
    }
}
