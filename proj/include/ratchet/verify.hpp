#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ratchet/config.hpp"

namespace ratchet {

struct SubCheck {
    std::string label;
    double measured = 0.0;
    double tolerance = 0.0;
    bool at_least = false;  // pass when measured >= tolerance instead of <=

    SubCheck(std::string label_, double measured_, double tolerance_, bool at_least_ = false)
        : label(std::move(label_)),
          measured(measured_),
          tolerance(tolerance_),
          at_least(at_least_) {}

    bool pass() const { return at_least ? measured >= tolerance : measured <= tolerance; }
};

struct CheckResult {
    std::string name;
    std::vector<SubCheck> subs;
    std::string note;

    explicit CheckResult(std::string name_) : name(std::move(name_)) {}

    bool pass() const;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    bool all_passed() const;
};

// Runs the cross-method check suite: oracle equivalence over the parameter
// grid, conservation, Bloch limit, closed-form moments, ratchet slope,
// phase-flip antisymmetry, moment locking, the intensity-formula convention
// audit, Bessel identities, and CSV determinism. Honors the config's
// half_width, coupling and rk4_step overrides.
VerifyReport run_verification(const RunConfig& config);

// One line per check: "[PASS] name (label measured<=tol; ...)".
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace ratchet
