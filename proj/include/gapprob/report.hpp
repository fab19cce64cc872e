#pragma once

#include <algorithm>
#include <cmath>
#include <string>

namespace gapprob {

/// Outcome of one numerical identity check.
struct IdentityReport {
    std::string identity_name;
    std::string parameters;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_diff = 0.0;
    double rel_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    /// Largest Fredholm error estimate among the determinants entering lhs/rhs (0 if none).
    double fredholm_error = 0.0;
    std::string diagnostics;
};

/// pass iff abs_diff <= tolerance or rel_diff <= tolerance.
inline IdentityReport make_report(std::string name, std::string parameters, double lhs, double rhs,
                                  double tolerance, double fredholm_error = 0.0,
                                  std::string diagnostics = {}) {
    IdentityReport r;
    r.identity_name = std::move(name);
    r.parameters = std::move(parameters);
    r.lhs = lhs;
    r.rhs = rhs;
    r.abs_diff = std::abs(lhs - rhs);
    r.rel_diff = r.abs_diff / std::max(std::abs(lhs), std::abs(rhs));
    if (!std::isfinite(r.rel_diff)) {
        r.rel_diff = r.abs_diff == 0.0 ? 0.0 : r.rel_diff;
    }
    r.tolerance = tolerance;
    r.pass = std::isfinite(r.abs_diff) && (r.abs_diff <= tolerance || r.rel_diff <= tolerance);
    r.fredholm_error = fredholm_error;
    r.diagnostics = std::move(diagnostics);
    return r;
}

}  // namespace gapprob
