#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gapprob {

enum class Sign { plus, minus };

inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

enum class PainleveFamily { pii_q, sigma_piii, hii, qtilde_v, sigma_pv };

struct OdeOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-11;
};

/// Tabulated solution of one of the Painleve-type connection problems.
///
/// grid is in the natural independent variable of the family: s for PII q and h_II,
/// t for sigma-PIII' and q-tilde, x = sqrt(t) for sigma-PV.
struct PainleveSolution {
    PainleveFamily family = PainleveFamily::pii_q;
    double a = 0.0;
    double xi = 1.0;
    std::optional<Sign> sign;
    std::vector<double> grid;
    std::vector<double> values;
    std::vector<double> derivatives;
    /// log tau on the grid. Families with a fixed sign fill only the matching vector;
    /// sigma-PIII' uses log_tau_plus.
    std::vector<double> log_tau_plus;
    std::vector<double> log_tau_minus;
    std::string seed_descriptor;
    /// Largest scaled residual of the defining equation over the grid.
    double max_residual = 0.0;
};

struct TauValue {
    double value = 1.0;
    double quadrature_error = 0.0;
};

/// q'' = s q + 2 q^3 with q ~ sqrt(xi) Ai(s) at s_max, integrated down to s_min.
PainleveSolution solve_pii_q(double xi, double s_min, double s_max = 10.0, const OdeOptions& opts = {});

/// exp(-1/2 int_s^inf (t-s) q^2) exp(-+ 1/2 int_s^inf q).
TauValue tau_ii(Sign sign, double s, double xi, const OdeOptions& opts = {});

/// sigma-PII Hamiltonian h = H + t^2/8 with h ~ +-(sqrt(xi)/2) Ai(t) at t_max.
PainleveSolution solve_hii(Sign sign, double xi, double s_min = -6.0, double t_max = 10.0,
                           const OdeOptions& opts = {});

/// exp(-int_s^inf h).
TauValue tau_ii_sigma(Sign sign, double s, double xi, const OdeOptions& opts = {});

/// sigma-PIII' with a = +-1/2 and sigma ~ xi t^{1+a} / (2^{2+2a} Gamma(1+a) Gamma(2+a)) as t -> 0.
PainleveSolution solve_sigma_piii(double a, double xi, double t_max, const OdeOptions& opts = {});

/// exp(-int_0^s sigma(t)/t dt).
TauValue tau_iii(double s, double a, double xi, const OdeOptions& opts = {});

/// Transformed PV transcendent with q-tilde ~ sqrt(xi) t^{a/2} / (2^a Gamma(1+a)) as t -> 0.
PainleveSolution solve_qtilde(double a, double xi, double t_max, const OdeOptions& opts = {});

/// exp(-1/8 int_0^s log(s/t) q~^2 dt) exp(-+ 1/4 int_0^s q~ / sqrt(t) dt).
TauValue tau_v(Sign sign, double s, double a, double xi, const OdeOptions& opts = {});

/// exp(-1/4 int_0^s log(s/t) q~^2 dt), the hard-edge beta = 2 generating function.
TauValue tau_v_product(double s, double a, double xi, const OdeOptions& opts = {});

/// sigma-PV route: values are h-tilde(x), log_tau is int_0^x h-tilde.
PainleveSolution solve_sigma_pv(Sign sign, double a, double xi, double x_max, const OdeOptions& opts = {});

/// exp(int_0^{sqrt s} h-tilde(x) dx).
TauValue tau_v_sigma(Sign sign, double s, double a, double xi, const OdeOptions& opts = {});

/// Scaled residual of the sigma-PV relation in x for Y = x h-tilde and its x-derivatives.
double sigma_pv_relation(double x, double a, double Y, double Y1, double Y2);

/// Scaled residual of the sigma-PIII' relation (t s'')^2 - a^2 s'^2 + s'(4 s' - 1)(s - t s').
double sigma_piii_relation(double t, double a, double sigma, double d1, double d2);

/// Scaled residual of (H'')^2 + 4 H'^3 + 2 H'(t H' - H) - 1/16 with H = h - t^2/8.
double sigma_pii_relation(double t, double h, double h1, double h2);

}  // namespace gapprob
