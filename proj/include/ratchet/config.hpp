#pragma once

#include <optional>
#include <string>

#include "ratchet/propagators.hpp"

namespace ratchet {

enum class Command { propagate, observables, sweep, figure, verify };

// Fully validated run configuration. Angles are degrees at this boundary
// (matching the CLI) and converted to radians where physics starts.
struct RunConfig {
    Command command = Command::propagate;
    std::string figure;  // 3a|3b|4|5 when command == figure

    int half_width = 40;
    double coupling = 1.0;
    double ramp = 0.73;

    double alpha = 1.0;
    double phi_deg = 37.0;

    double z_max = 0.0;
    int z_steps = 801;

    Method method = Method::green;
    bool compare_methods = false;
    bool normalized = false;
    int j_window = 12;
    double rk4_step = 0.0;  // absolute step; 0 -> 0.001 / coupling
    int spectral_k = 0;     // 0 -> 2M+1

    std::string output = "-";

    std::string sweep_param;  // alpha | phi-deg | beta-over-c
    double sweep_from = 0.0;
    double sweep_to = 0.0;
    int sweep_count = 0;

    double phi() const;  // radians, reduced
    LatticeModel model() const;
    InputSpec input() const;
};

// Parses flags (and an optional key=value config file, given by --config or
// the RATCHET_CONFIG environment variable; flags override the file). Returns
// nullopt when help was requested. Throws usage_error on bad input.
std::optional<RunConfig> parse_config(int argc, const char* const* argv);

}  // namespace ratchet
