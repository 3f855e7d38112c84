#include "ratchet/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "ratchet/bessel.hpp"
#include "ratchet/observables.hpp"
#include "ratchet/runner.hpp"

namespace ratchet {
namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

// Removes the one global phase the methods are allowed to differ by, then
// takes the max-abs amplitude difference.
double aligned_amplitude_diff(const FieldState& ref, const FieldState& other) {
    cdouble overlap{0.0, 0.0};
    for (size_t i = 0; i < ref.amplitudes.size(); ++i)
        overlap += std::conj(ref.amplitudes[i]) * other.amplitudes[i];
    const cdouble rot = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cdouble{1.0, 0.0};

    double worst = 0.0;
    for (size_t i = 0; i < ref.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(other.amplitudes[i] / rot - ref.amplitudes[i]));
    return worst;
}

double intensity_diff(const FieldState& a, const FieldState& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.amplitudes.size(); ++i)
        worst = std::max(worst, std::abs(std::norm(a.amplitudes[i]) - std::norm(b.amplitudes[i])));
    return worst;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = lo + (hi - lo) * i / static_cast<double>(n - 1);
    return out;
}

struct GridScan {
    // maxima over the whole grid
    double amp_diff_rk4 = 0.0, amp_diff_spectral = 0.0;
    double int_diff_rk4 = 0.0, int_diff_spectral = 0.0;
    double power_err_exact = 0.0, power_err_rk4 = 0.0;
    double moment_err = 0.0, moment_sq_err = 0.0, leakage = 0.0;
    double bloch_symmetry = 0.0, bloch_mean = 0.0;
    double audit_minus = 0.0, audit_plus_max = 0.0;
    double flip_err = 0.0, locking_spread = 0.0;
    double runtime_seconds = 0.0;
};

GridScan scan_grid(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    GridScan scan;

    const double C = cfg.coupling;
    const std::vector<double> alphas{0.0, 0.5, 1.0};
    const std::vector<double> phis_deg{0.0, 37.0, 90.0, 217.0};
    const std::vector<double> bocs{0.3, 0.73, 2.0};
    const PropagateOptions opts{cfg.rk4_step, cfg.spectral_k};

    for (double boc : bocs) {
        const LatticeModel model = build_model(cfg.half_width, C, boc * C);
        const std::vector<double> z_grid = linspace(0.0, 4.0 * kPi / model.ramp, 20);
        const int M = model.half_width;

        for (double alpha : alphas) {
            // mean/mean_sq per phi (including the +180 partners) for the
            // antisymmetry and locking checks, green route.
            std::map<double, std::vector<double>> mean_by_phi, mean_sq_by_phi;
            const std::vector<double> all_phis{0.0, 37.0, 90.0, 180.0, 217.0, 270.0};
            for (double phi_deg : all_phis) {
                const InputSpec input = make_input(alpha, deg2rad(phi_deg));
                auto& means = mean_by_phi[phi_deg];
                auto& means_sq = mean_sq_by_phi[phi_deg];
                for (double z : z_grid) {
                    const FieldState state = propagate_green(model, input, z);
                    means.push_back(mean_site(state));
                    means_sq.push_back(mean_site_sq(state));
                    scan.leakage = std::max(scan.leakage, state.edge_leakage);

                    const double a2 = alpha * alpha;
                    scan.moment_err = std::max(
                        scan.moment_err,
                        std::abs(means.back() - mean_site_closed_form(model, input, z)));
                    scan.moment_sq_err = std::max(
                        scan.moment_sq_err,
                        std::abs(means_sq.back() - mean_site_sq_closed_form(model, input, z)));

                    if (alpha == 0.0) {
                        scan.bloch_mean = std::max(scan.bloch_mean, std::abs(means.back()));
                        for (int j = 1; j <= M; ++j)
                            scan.bloch_symmetry = std::max(
                                scan.bloch_symmetry,
                                std::abs(std::norm(state.at(j)) - std::norm(state.at(-j))));
                    }
                    scan.power_err_exact = std::max(
                        scan.power_err_exact, std::abs(total_power(state) - (1.0 + a2)));

                    // intensity-formula audit against both phase conventions
                    const BesselRow row =
                        bessel_row(-M, M + 1, green_bessel_argument(model, z));
                    for (int j = -M; j <= M; ++j) {
                        const double ij = std::norm(state.at(j));
                        scan.audit_minus = std::max(
                            scan.audit_minus,
                            std::abs(ij - intensity_closed_form(model, input, j, z, -1, row)));
                        scan.audit_plus_max = std::max(
                            scan.audit_plus_max,
                            std::abs(ij - intensity_closed_form(model, input, j, z, +1, row)));
                    }
                }
            }

            // phase-flip antisymmetry: <j>(phi + 180) - a^2 == -(<j>(phi) - a^2)
            const double a2 = alpha * alpha;
            for (auto [phi, partner] :
                 std::initializer_list<std::pair<double, double>>{{0.0, 180.0}, {37.0, 217.0},
                                                                  {90.0, 270.0}}) {
                const auto& m1 = mean_by_phi[phi];
                const auto& m2 = mean_by_phi[partner];
                for (size_t i = 0; i < m1.size(); ++i)
                    scan.flip_err =
                        std::max(scan.flip_err, std::abs((m1[i] - a2) + (m2[i] - a2)));
            }

            // locking: <j^2> - <j> is the same for every phi
            for (size_t i = 0; i < z_grid.size(); ++i) {
                double lo = 1e300, hi = -1e300;
                for (double phi_deg : phis_deg) {
                    const double d = mean_sq_by_phi[phi_deg][i] - mean_by_phi[phi_deg][i];
                    lo = std::min(lo, d);
                    hi = std::max(hi, d);
                }
                scan.locking_spread = std::max(scan.locking_spread, hi - lo);
            }

            // triple-oracle equivalence, rk4 advancing once per (alpha, phi)
            for (double phi_deg : phis_deg) {
                const InputSpec input = make_input(alpha, deg2rad(phi_deg));
                FieldState running = initial_state(model, input);
                for (double z : z_grid) {
                    const FieldState green = propagate_green(model, input, z);
                    const FieldState spectral =
                        propagate(model, input, Method::spectral, z, opts);
                    running = propagate_rk4(model, running, z,
                                            default_rk4_steps(model, z - running.z, opts.rk4_step));

                    scan.amp_diff_rk4 =
                        std::max(scan.amp_diff_rk4, aligned_amplitude_diff(green, running));
                    scan.amp_diff_spectral =
                        std::max(scan.amp_diff_spectral, aligned_amplitude_diff(green, spectral));
                    scan.int_diff_rk4 = std::max(scan.int_diff_rk4, intensity_diff(green, running));
                    scan.int_diff_spectral =
                        std::max(scan.int_diff_spectral, intensity_diff(green, spectral));

                    const double expected = 1.0 + alpha * alpha;
                    scan.power_err_exact =
                        std::max(scan.power_err_exact,
                                 std::abs(total_power(spectral) - expected));
                    scan.power_err_rk4 = std::max(scan.power_err_rk4,
                                                  std::abs(total_power(running) - expected));
                }
            }
        }
    }

    scan.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return scan;
}

CheckResult revival_check(const RunConfig& cfg) {
    CheckResult check{"bloch limit and revival"};
    double revival = 0.0;

    for (double boc : {0.3, 0.73, 2.0}) {
        const LatticeModel model = build_model(cfg.half_width, cfg.coupling, boc * cfg.coupling);
        const double period = 2.0 * kPi / model.ramp;
        for (double alpha : {0.0, 1.0}) {
            const InputSpec input = make_input(alpha, deg2rad(37.0));
            const FieldState start = initial_state(model, input);
            FieldState running = start;
            for (int m = 1; m <= 2; ++m) {
                const double z = m * period;
                running = propagate_rk4(model, running, z,
                                        default_rk4_steps(model, z - running.z, cfg.rk4_step));
                revival = std::max(revival, intensity_diff(start, running));
                revival = std::max(revival, intensity_diff(start, propagate_green(model, input, z)));
                revival = std::max(
                    revival, intensity_diff(start, propagate(model, input, Method::spectral, z,
                                                             PropagateOptions{cfg.rk4_step,
                                                                              cfg.spectral_k})));
            }
        }
    }
    check.subs.push_back({"revival |I - I_input|", revival, 1e-8});
    return check;
}

CheckResult slope_check(const RunConfig& cfg) {
    CheckResult check{"ratchet direction and slope"};
    const LatticeModel model = build_model(cfg.half_width, cfg.coupling, 0.73 * cfg.coupling);
    const double dz = 2e-5;

    auto measured_slope = [&](double phi_deg) {
        const InputSpec input = make_input(1.0, deg2rad(phi_deg));
        const double fwd = mean_site(propagate_green(model, input, 2.0 * dz));
        const double here = mean_site(propagate_green(model, input, 0.0));
        return (fwd - here) / (2.0 * dz);
    };

    const double s37 = measured_slope(37.0);
    const double s217 = measured_slope(217.0);
    const double expect37 = small_z_slope(model, make_input(1.0, deg2rad(37.0)));
    const double expect217 = small_z_slope(model, make_input(1.0, deg2rad(217.0)));

    check.subs.push_back({"slope(37 deg) negative", s37 < 0.0 ? 0.0 : 1.0, 0.5});
    check.subs.push_back({"slope(217 deg) positive", s217 > 0.0 ? 0.0 : 1.0, 0.5});
    check.subs.push_back({"|slope| symmetry", std::abs(std::abs(s37) - std::abs(s217)), 1e-6});
    check.subs.push_back(
        {"rel err vs -2 alpha C sin(phi)",
         std::max(std::abs(s37 - expect37) / std::abs(expect37),
                  std::abs(s217 - expect217) / std::abs(expect217)),
         1e-4});
    return check;
}

CheckResult bessel_check() {
    CheckResult check{"bessel identities"};
    double reflection = 0.0, normalization = 0.0, sum_sq = 0.0;
    for (double x : {0.5, 2.0, 5.4795, 10.0}) {
        const int span = std::max(60, static_cast<int>(2.0 * x) + 40);
        const BesselRow row = bessel_row(-span, span, x);
        for (int n = 1; n <= span; ++n)
            reflection = std::max(
                reflection, std::abs(row(-n) - ((n & 1) ? -row(n) : row(n))));

        double norm = row(0);
        for (int k = 2; k <= span; k += 2) norm += 2.0 * row(k);
        normalization = std::max(normalization, std::abs(norm - 1.0));

        double squares = 0.0;
        for (int n = -span; n <= span; ++n) squares += row(n) * row(n);
        sum_sq = std::max(sum_sq, std::abs(squares - 1.0));
    }
    check.subs.push_back({"reflection", reflection, 0.0});
    check.subs.push_back({"normalization", normalization, 1e-10});
    check.subs.push_back({"sum of squares", sum_sq, 1e-10});
    return check;
}

CheckResult determinism_check() {
    CheckResult check{"csv determinism and schema"};

    RunConfig fig;
    fig.command = Command::figure;
    fig.figure = "3b";
    fig.alpha = 1.0;
    fig.phi_deg = 37.0;
    fig.ramp = 0.73;
    fig.z_max = 4.0 * 2.0 * kPi / fig.ramp;
    fig.z_steps = 101;  // trimmed z grid; determinism is about bytes, not size

    std::ostringstream first, second;
    write_propagation_csv(fig, first);
    write_propagation_csv(fig, second);
    check.subs.push_back({"byte-identical runs", first.str() == second.str() ? 0.0 : 1.0, 0.5});
    check.subs.push_back(
        {"profile header", first.str().find("z,j,intensity\n") != std::string::npos ? 0.0 : 1.0,
         0.5});

    RunConfig obs = fig;
    obs.command = Command::observables;
    obs.z_steps = 2;
    std::ostringstream scan;
    write_observable_csv(obs, scan);
    check.subs.push_back(
        {"observables header",
         scan.str().find("z,mean_j,mean_j2,power,method\n") != std::string::npos ? 0.0 : 1.0, 0.5});
    return check;
}

}  // namespace

bool CheckResult::pass() const {
    return std::all_of(subs.begin(), subs.end(), [](const SubCheck& s) { return s.pass(); });
}

bool VerifyReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.pass(); });
}

VerifyReport run_verification(const RunConfig& cfg) {
    VerifyReport report;
    const GridScan scan = scan_grid(cfg);

    CheckResult c1{"triple-oracle equivalence"};
    c1.subs.push_back({"amp diff green vs rk4", scan.amp_diff_rk4, 1e-6});
    c1.subs.push_back({"amp diff green vs spectral", scan.amp_diff_spectral, 1e-6});
    c1.subs.push_back({"intensity diff green vs rk4", scan.int_diff_rk4, 1e-6});
    c1.subs.push_back({"intensity diff green vs spectral", scan.int_diff_spectral, 1e-6});
    c1.subs.push_back({"grid runtime [s]", scan.runtime_seconds, 30.0});
    report.checks.push_back(c1);

    CheckResult c2{"power conservation"};
    c2.subs.push_back({"green/spectral", scan.power_err_exact, 1e-9});
    c2.subs.push_back({"rk4", scan.power_err_rk4, 1e-8});
    report.checks.push_back(c2);

    CheckResult c3 = revival_check(cfg);
    c3.subs.insert(c3.subs.begin(),
                   {SubCheck{"alpha=0 profile symmetry", scan.bloch_symmetry, 1e-10},
                    SubCheck{"alpha=0 mean site", scan.bloch_mean, 1e-9}});
    report.checks.push_back(c3);

    CheckResult c4{"closed-form moments"};
    c4.subs.push_back({"<j> closed vs direct", scan.moment_err, 1e-8});
    c4.subs.push_back({"<j^2> closed vs direct", scan.moment_sq_err, 1e-8});
    c4.subs.push_back({"edge leakage", scan.leakage, 1e-10});
    report.checks.push_back(c4);

    report.checks.push_back(slope_check(cfg));

    CheckResult c6{"phase-flip antisymmetry"};
    c6.subs.push_back({"<j> negation residual", scan.flip_err, 1e-10});
    report.checks.push_back(c6);

    CheckResult c7{"energy-momentum locking"};
    c7.subs.push_back({"<j^2>-<j> spread over phi", scan.locking_spread, 1e-10});
    report.checks.push_back(c7);

    CheckResult c8{"intensity-formula convention audit"};
    c8.subs.push_back({"sin(bz/2 - phi) form", scan.audit_minus, 1e-10});
    c8.subs.push_back({"sin(bz/2 + phi) form rejected", scan.audit_plus_max, 1e-6, true});
    c8.note = "matched convention: sin(bz/2 - phi)";
    report.checks.push_back(c8);

    report.checks.push_back(bessel_check());
    report.checks.push_back(determinism_check());
    return report;
}

void print_report(const VerifyReport& report, std::ostream& out) {
    int index = 0;
    for (const CheckResult& check : report.checks) {
        ++index;
        out << (check.pass() ? "[PASS] " : "[FAIL] ") << index << " " << check.name << " (";
        bool first = true;
        for (const SubCheck& sub : check.subs) {
            if (!first) out << "; ";
            first = false;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s %.3g %s %.3g", sub.label.c_str(), sub.measured,
                          sub.at_least ? ">=" : "<=", sub.tolerance);
            out << (sub.pass() ? "" : "! ") << buf;
        }
        out << ")";
        if (!check.note.empty()) out << " [" << check.note << "]";
        out << "\n";
    }
    out << (report.all_passed() ? "VERIFICATION PASSED" : "VERIFICATION FAILED") << "\n";
}

}  // namespace ratchet
