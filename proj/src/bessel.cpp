#include "ratchet/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ratchet {
namespace {

constexpr double kMaxArgument = 1e6;

// Leading-order series for very small arguments, where the backward
// recurrence would overflow. Truncation error is O(x^2/4) < 1e-20 here.
std::vector<double> tiny_row(int nmax, double x) {
    std::vector<double> row(static_cast<size_t>(nmax) + 1, 0.0);
    row[0] = 1.0 - 0.25 * x * x;
    if (nmax >= 1) row[1] = 0.5 * x;
    return row;
}

// Miller backward recurrence for J_0(x) .. J_nmax(x), x > 0. The recurrence
// J_{n-1} = (2n/x) J_n - J_{n+1} is run downward from a seed well above both
// nmax and x, then normalized with J_0 + 2 sum_{k>=1} J_{2k} = 1.
std::vector<double> miller_row(int nmax, double x) {
    if (x < 1e-10) return tiny_row(nmax, x);
    const int turning = static_cast<int>(std::ceil(x));
    const int guard = 20 + static_cast<int>(std::ceil(std::sqrt(x))) + 20;
    const int n_start = std::max(nmax, turning) + guard;

    std::vector<double> f(static_cast<size_t>(n_start) + 2, 0.0);
    f[static_cast<size_t>(n_start) + 1] = 0.0;
    f[static_cast<size_t>(n_start)] = 1e-30;

    constexpr double rescale_limit = 1e250;
    for (int n = n_start; n >= 1; --n) {
        f[static_cast<size_t>(n) - 1] =
            (2.0 * n / x) * f[static_cast<size_t>(n)] - f[static_cast<size_t>(n) + 1];
        if (std::abs(f[static_cast<size_t>(n) - 1]) > rescale_limit) {
            for (size_t m = static_cast<size_t>(n) - 1; m < f.size(); ++m)
                f[m] /= rescale_limit;
        }
    }

    double norm = f[0];
    for (int k = 2; k <= n_start; k += 2) norm += 2.0 * f[static_cast<size_t>(k)];

    std::vector<double> row(static_cast<size_t>(nmax) + 1);
    for (int n = 0; n <= nmax; ++n) row[static_cast<size_t>(n)] = f[static_cast<size_t>(n)] / norm;
    return row;
}

void check_argument(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("bessel argument must be finite");
    if (std::abs(x) > kMaxArgument)
        throw std::domain_error("bessel argument out of sanity bound |x| <= 1e6, got " +
                                std::to_string(x));
}

}  // namespace

double bessel_j(int order, double x) {
    check_argument(x);
    const int n = std::abs(order);
    const double ax = std::abs(x);
    if (ax == 0.0) return n == 0 ? 1.0 : 0.0;

    double value = miller_row(n, ax).back();
    // J_{-n}(x) = (-1)^n J_n(x), J_n(-x) = (-1)^n J_n(x); applied symbolically.
    if (order < 0 && (n & 1)) value = -value;
    if (x < 0.0 && (n & 1)) value = -value;
    return value;
}

BesselRow bessel_row(int min_order, int max_order, double x) {
    check_argument(x);
    if (min_order > max_order)
        throw std::invalid_argument("bessel_row: min_order > max_order");

    BesselRow row;
    row.argument = x;
    row.min_order = min_order;
    row.max_order = max_order;
    row.values.resize(static_cast<size_t>(max_order - min_order) + 1);

    const int nmax = std::max(std::abs(min_order), std::abs(max_order));
    const double ax = std::abs(x);

    if (ax == 0.0) {
        for (int n = min_order; n <= max_order; ++n)
            row.values[static_cast<size_t>(n - min_order)] = (n == 0) ? 1.0 : 0.0;
        return row;
    }

    const std::vector<double> base = miller_row(nmax, ax);
    for (int n = min_order; n <= max_order; ++n) {
        const int an = std::abs(n);
        double value = base[static_cast<size_t>(an)];
        if (n < 0 && (an & 1)) value = -value;
        if (x < 0.0 && (an & 1)) value = -value;
        row.values[static_cast<size_t>(n - min_order)] = value;
    }
    return row;
}

}  // namespace ratchet
