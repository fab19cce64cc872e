#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapprob/painleve.hpp"
#include "gapprob/report.hpp"

namespace gapprob {

enum class Regime { bulk, soft, hard };
enum class Route { fredholm, painleve, both };
enum class Suite { bulk, soft, hard, xi, lemmas, all };

/// Interval conventions: bulk s is the length of the gap interval (0, s); soft s is the
/// left end of (s, inf); hard s is the right end of (0, s) and a is the exponent of the
/// weight x^a of the ensemble with the given beta.
struct GapQuery {
    Regime regime = Regime::bulk;
    int beta = 2;
    double s = 0.0;
    std::optional<double> a;
    double xi = 1.0;
    Route route = Route::fredholm;
};

struct GapOptions {
    int quadrature_order = 64;
    OdeOptions ode;
};

struct GapResult {
    double value = 1.0;
    double error_estimate = 0.0;
    /// Route that produced value ("fredholm" or "painleve").
    std::string route;
    /// Painleve value when route = both.
    std::optional<double> painleve_value;
    /// Which formula was evaluated, in words.
    std::string formula;
};

/// Throws DomainError for invalid queries and CapabilityError for combinations with no
/// available formula (beta = 1, 4 generating functions at xi < 1 on the determinant side).
GapResult evaluate_gap(const GapQuery& query, const GapOptions& opts = {});

double gap_bulk(int beta, double s, double xi = 1.0, Route route = Route::fredholm, const GapOptions& opts = {});
double gap_soft(int beta, double s, double xi = 1.0, Route route = Route::fredholm, const GapOptions& opts = {});
double gap_hard(int beta, double s, double a, double xi = 1.0, Route route = Route::fredholm,
                const GapOptions& opts = {});

/// beta = 1 bulk nearest-neighbour spacing density: second difference of E_1(0; (0, s)).
double spacing_density_bulk(double s, double h = 1e-3, const GapOptions& opts = {});

/// (pi s / 2) exp(-pi s^2 / 4).
double wigner_surmise(double s);

struct VerifyOptions {
    GapOptions gap;
    /// Overrides every per-identity default tolerance when set.
    std::optional<double> tolerance;
};

/// One report per (identity, parameter point), sorted by (identity_name, parameters).
std::vector<IdentityReport> verify_identities(Suite suite, const VerifyOptions& opts = {});

/// E_1 at the hard edge with parameter (a-1)/2 on (0, a^2 - (2a^2)^(2/3) s) against the soft-edge E_1(s).
/// Report k passes when its discrepancy is below that of report k-1.
std::vector<IdentityReport> hard_to_soft_limit(const std::vector<double>& a_list, double s,
                                               const GapOptions& opts = {});

std::string to_string(Regime r);
std::string to_string(Route r);
std::string to_string(Suite s);
Regime parse_regime(const std::string& text);
Route parse_route(const std::string& text);
Suite parse_suite(const std::string& text);

}  // namespace gapprob
