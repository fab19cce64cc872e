#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace gapprob::cli {

struct RunConfig {
    int quadrature_order = 64;
    double ode_tolerance = 1e-11;
    /// Unset means each identity uses its own default tolerance.
    std::optional<double> identity_tolerance;
    std::string output_format = "csv";
    std::uint64_t seed = 0;
};

/// Overlay key=value lines from `text` onto cfg. Blank lines and '#' comments are skipped.
/// Throws std::invalid_argument on unknown keys or malformed values.
void apply_config_text(const std::string& text, RunConfig& cfg);

void validate(const RunConfig& cfg);

/// Exit codes: 0 success, 1 verification failure or numerical failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gapprob::cli
