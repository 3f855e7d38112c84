#pragma once

#include <vector>

namespace ratchet {

// Integer-order Bessel functions J_n(x) for a contiguous range of orders at a
// common argument.
struct BesselRow {
    double argument = 0.0;
    int min_order = 0;
    int max_order = 0;
    std::vector<double> values;  // values[n - min_order] = J_n(argument)

    double operator()(int n) const { return values[static_cast<size_t>(n - min_order)]; }
};

// J_order(x). Negative orders and arguments are mapped through the reflection
// identities J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
double bessel_j(int order, double x);

// Batch evaluation of J_n(x) for n = min_order .. max_order with a single
// backward recurrence.
BesselRow bessel_row(int min_order, int max_order, double x);

}  // namespace ratchet
