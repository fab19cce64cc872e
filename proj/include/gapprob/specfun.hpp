#pragma once

// Real-argument special functions used by the kernels and the Painleve seeds.
// All functions are pure; non-finite or out-of-domain input throws DomainError.

namespace gapprob::specfun {

struct SpecFunConfig {
    double target_abs_tol = 1e-12;
    /// Largest |x| for which Ai on the negative axis is expected to meet tolerance.
    double airy_negative_limit = 15.0;
    double bessel_max_order = 20.0;
    double bessel_max_argument = 1e4;
};

inline constexpr SpecFunConfig default_config{};

double airy_ai(double x);
double airy_ai_prime(double x);

/// J_nu(x) for nu > -1, x >= 0.
double bessel_j(double nu, double x);

/// d/dx J_nu(x); at x = 0 uses the leading small-argument term.
double bessel_j_prime(double nu, double x);

/// Gamma(x) for x > 0.
double gamma_fn(double x);

/// sin(pi u) / (pi u) with the removable singularity at u = 0.
double sinc_pi(double u);

}  // namespace gapprob::specfun
