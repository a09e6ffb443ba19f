#pragma once

#include <functional>
#include <string>
#include <vector>

namespace mrt {

// One fixture row: `metric` is |computed-expected|/|expected| for value
// checks and the worst absolute deviation (or violation count) for property
// suites, as described by the row's source string.
struct ValidationCheck {
    std::string name;
    std::string source;
    double expected = 0.0;
    double computed = 0.0;
    double metric = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    bool all_passed() const;
    const ValidationCheck* find(const std::string& name) const;
};

struct ValidationOptions {
    // Sensitivity hook: replaces the Bessel kernel used by the
    // frequency-parameter fixtures so tests can confirm those rows react.
    std::function<double(int, double)> bessel_override;
};

// Runs the embedded fixture list: frequency-parameter table, reference-disk
// extraction chain, published-device spot checks, closed-form motional
// resistance, filter closed forms and network split, Q-budget properties,
// and the numerics kernel checks against an independent double-double
// series reference.
ValidationReport run_validation(const ValidationOptions& opts = {});

std::string report_to_json(const ValidationReport& report);
ValidationReport report_from_json(const std::string& text);
std::string report_to_csv(const ValidationReport& report);

} // namespace mrt
