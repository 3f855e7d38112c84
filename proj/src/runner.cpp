#include "ratchet/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>

#include "ratchet/errors.hpp"
#include "ratchet/verify.hpp"

namespace ratchet {
namespace {

void echo_config(const RunConfig& cfg, std::ostream& out, const char* kind) {
    out << "# ratchet " << kind << "\n";
    out << "# half_width=" << cfg.half_width << " coupling=" << format_value(cfg.coupling)
        << " ramp=" << format_value(cfg.ramp) << " alpha=" << format_value(cfg.alpha)
        << " phi_deg=" << format_value(cfg.phi_deg) << "\n";
    out << "# z_max=" << format_value(cfg.z_max) << " z_steps=" << cfg.z_steps
        << " method=" << method_name(cfg.method) << " j_window=" << cfg.j_window
        << " normalized=" << (cfg.normalized ? 1 : 0) << "\n";
}

void warn_truncation(const RunConfig& cfg, const ObservableSeries& series, std::ostream& out) {
    if (!cfg.model().truncation_adequate)
        out << "# warning: half_width below the truncation-adequacy rule\n";
    if (series.truncation_flagged)
        out << "# warning: edge leakage " << format_value(series.max_edge_leakage)
            << " exceeds 1e-08; results near the boundary are unreliable\n";
}

PropagateOptions options_of(const RunConfig& cfg) {
    return PropagateOptions{cfg.rk4_step, cfg.spectral_k};
}

void observable_rows(const RunConfig& cfg, Method method, std::ostream& out) {
    const ObservableSeries series = compute_series(cfg.model(), cfg.input(), method,
                                                   make_z_grid(cfg.z_max, cfg.z_steps),
                                                   options_of(cfg), cfg.normalized);
    warn_truncation(cfg, series, out);
    for (size_t m = 0; m < series.z_grid.size(); ++m) {
        out << format_value(series.z_grid[m]) << ',' << format_value(series.mean_site[m]) << ','
            << format_value(series.mean_site_sq[m]) << ',' << format_value(series.power[m]) << ','
            << method_name(method) << "\n";
    }
}

}  // namespace

std::vector<double> make_z_grid(double z_max, int steps) {
    if (steps < 2) throw std::invalid_argument("z grid needs at least 2 samples");
    std::vector<double> grid(static_cast<size_t>(steps));
    for (int m = 0; m < steps; ++m)
        grid[static_cast<size_t>(m)] = z_max * m / static_cast<double>(steps - 1);
    return grid;
}

std::string format_value(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

void write_propagation_csv(const RunConfig& cfg, std::ostream& out) {
    echo_config(cfg, out, "propagate");
    const ObservableSeries series =
        compute_series(cfg.model(), cfg.input(), cfg.method,
                       make_z_grid(cfg.z_max, cfg.z_steps), options_of(cfg));
    warn_truncation(cfg, series, out);

    out << "z,j,intensity\n";
    const int M = cfg.half_width;
    const int w = cfg.j_window;
    for (size_t m = 0; m < series.z_grid.size(); ++m) {
        for (int j = -w; j <= w; ++j) {
            out << format_value(series.z_grid[m]) << ',' << j << ','
                << format_value(series.intensity[m][static_cast<size_t>(j + M)]) << "\n";
        }
    }
}

void write_observable_csv(const RunConfig& cfg, std::ostream& out) {
    echo_config(cfg, out, "observables");
    out << "z,mean_j,mean_j2,power,method\n";
    if (cfg.compare_methods) {
        for (Method method : {Method::green, Method::rk4, Method::spectral})
            observable_rows(cfg, method, out);
    } else {
        observable_rows(cfg, cfg.method, out);
    }
}

void write_sweep_csv(const RunConfig& cfg, std::ostream& out) {
    echo_config(cfg, out, "sweep");
    out << "# sweep param=" << cfg.sweep_param << " from=" << format_value(cfg.sweep_from)
        << " to=" << format_value(cfg.sweep_to) << " count=" << cfg.sweep_count << "\n";
    out << "z,mean_j,mean_j2,power,method\n";
    for (int i = 0; i < cfg.sweep_count; ++i) {
        const double t = cfg.sweep_count == 1
                             ? 0.0
                             : static_cast<double>(i) / (cfg.sweep_count - 1);
        const double value = cfg.sweep_from + t * (cfg.sweep_to - cfg.sweep_from);

        RunConfig point = cfg;
        if (cfg.sweep_param == "alpha") {
            point.alpha = value;
        } else if (cfg.sweep_param == "phi-deg") {
            point.phi_deg = value;
        } else {
            point.ramp = value * cfg.coupling;
        }
        out << "# " << cfg.sweep_param << "=" << format_value(value) << "\n";
        observable_rows(point, point.method, out);
    }
}

int run_command(const RunConfig& cfg) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (cfg.output != "-") {
        file.open(cfg.output, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open output file: " + cfg.output);
        out = &file;
    }

    switch (cfg.command) {
        case Command::propagate:
            write_propagation_csv(cfg, *out);
            return exit_ok;
        case Command::observables:
            write_observable_csv(cfg, *out);
            return exit_ok;
        case Command::sweep:
            write_sweep_csv(cfg, *out);
            return exit_ok;
        case Command::figure:
            if (cfg.figure == "3a" || cfg.figure == "3b")
                write_propagation_csv(cfg, *out);
            else
                write_observable_csv(cfg, *out);
            return exit_ok;
        case Command::verify: {
            const VerifyReport report = run_verification(cfg);
            print_report(report, *out);
            return report.all_passed() ? exit_ok : exit_verification;
        }
    }
    return exit_ok;
}

}  // namespace ratchet
