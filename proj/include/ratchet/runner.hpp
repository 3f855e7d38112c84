#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ratchet/config.hpp"
#include "ratchet/observables.hpp"

namespace ratchet {

// Uniform grid 0 .. z_max with `steps` samples (steps >= 2).
std::vector<double> make_z_grid(double z_max, int steps);

// 12 significant digits, locale-independent.
std::string format_value(double value);

// CSV emitters. Headers are fixed: `z,j,intensity` for profiles and
// `z,mean_j,mean_j2,power,method` for observable scans; `#` lines carry the
// config echo and truncation warnings.
void write_propagation_csv(const RunConfig& config, std::ostream& out);
void write_observable_csv(const RunConfig& config, std::ostream& out);
void write_sweep_csv(const RunConfig& config, std::ostream& out);

// Full dispatch including output-file handling; returns the process exit code.
int run_command(const RunConfig& config);

}  // namespace ratchet
