#pragma once

#include <string>
#include <vector>

namespace ehk {

// One named numerical check: residual against a tolerance, plus a short
// reference string naming the identity or transformation law it verifies.
struct Check {
    std::string name;
    std::string ref;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline Check make_check(std::string name, std::string ref, double residual, double tolerance) {
    Check c;
    c.name = std::move(name);
    c.ref = std::move(ref);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = residual <= tolerance;
    return c;
}

inline bool all_pass(const std::vector<Check>& checks) {
    for (auto& c : checks)
        if (!c.pass) return false;
    return true;
}

inline double max_residual(const std::vector<Check>& checks) {
    double m = 0.0;
    for (auto& c : checks) m = std::max(m, c.residual);
    return m;
}

}  // namespace ehk
