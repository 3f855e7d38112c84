#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ratchet/bessel.hpp"
#include "ratchet/lattice.hpp"
#include "ratchet/propagators.hpp"

namespace ratchet {

// I_j = |a_j|^2 per site.
std::vector<double> intensity_profile(const FieldState& state);

// Closed-form output intensity of the two-site input,
//   J_{-j}[X]^2 + alpha^2 J_{1-j}[X]^2
//     - 2 alpha J_{-j}[X] J_{1-j}[X] sin(b z / 2 - phi),
// X = (4C/b) sin(b z / 2). cross_sign = -1 selects this form; +1 selects the
// sin(b z / 2 + phi) variant kept around for the convention audit.
double intensity_closed_form(const LatticeModel& model, const InputSpec& input, int j, double z,
                             int cross_sign = -1);

// Batch variant reusing a precomputed row of J_n[X(z)] covering orders -j and
// 1-j for every site of interest.
double intensity_closed_form(const LatticeModel& model, const InputSpec& input, int j, double z,
                             int cross_sign, const BesselRow& row);

// Intensity-weighted site moments. Unnormalized: the total weight is the input
// power 1 + alpha^2. Pass normalized = true to divide by the total power.
double mean_site(const FieldState& state, bool normalized = false);
double mean_site_sq(const FieldState& state, bool normalized = false);

// <j>(z) = alpha^2 + (4 alpha C / b) sin(b z / 2) sin(b z / 2 - phi), with the
// b -> 0 limit evaluated smoothly (the prefactor folds into 2 alpha C z sinc).
double mean_site_closed_form(const LatticeModel& model, const InputSpec& input, double z);

// <j^2>(z) = <j>(z) + ((1 + alpha^2)/2) X(z)^2.
double mean_site_sq_closed_form(const LatticeModel& model, const InputSpec& input, double z);

// d<j>/dz at z = 0: -2 alpha C sin(phi). Negative phases steer left.
double small_z_slope(const LatticeModel& model, const InputSpec& input);

// 2 pi / ramp; empty when ramp = 0 (no finite revival).
std::optional<double> bloch_period(const LatticeModel& model);

// Per-z observables of one propagation run.
struct ObservableSeries {
    std::vector<double> z_grid;
    std::vector<std::vector<double>> intensity;  // [z index][site index], site 0 <-> j = -M
    std::vector<double> power;
    std::vector<double> mean_site;
    std::vector<double> mean_site_sq;
    double max_edge_leakage = 0.0;
    bool truncation_flagged = false;

    LatticeModel model;
    InputSpec input;
    Method method = Method::green;
};

ObservableSeries compute_series(const LatticeModel& model, const InputSpec& input, Method method,
                                std::span<const double> z_grid,
                                const PropagateOptions& opts = {}, bool normalized = false);

}  // namespace ratchet
