#include "gapprob/specfun.hpp"

#include "gapprob/errors.hpp"

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace gapprob::specfun {

namespace {

void require_finite(double x, const char* fn) {
    if (!std::isfinite(x)) {
        throw DomainError(std::string(fn) + ": non-finite argument");
    }
}

void require_bessel_domain(double nu, double x, const char* fn) {
    require_finite(nu, fn);
    require_finite(x, fn);
    if (nu <= -1.0) {
        throw DomainError(std::string(fn) + ": order must exceed -1");
    }
    if (x < 0.0) {
        throw DomainError(std::string(fn) + ": argument must be non-negative");
    }
}

}  // namespace

double airy_ai(double x) {
    require_finite(x, "airy_ai");
    // Ai decays like exp(-2/3 x^{3/2}); below double range past x ~ 104.
    if (x > 105.0) {
        return 0.0;
    }
    return boost::math::airy_ai(x);
}

double airy_ai_prime(double x) {
    require_finite(x, "airy_ai_prime");
    if (x > 105.0) {
        return 0.0;
    }
    return boost::math::airy_ai_prime(x);
}

double bessel_j(double nu, double x) {
    require_bessel_domain(nu, x, "bessel_j");
    if (x == 0.0) {
        if (nu == 0.0) {
            return 1.0;
        }
        return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return boost::math::cyl_bessel_j(nu, x);
}

double bessel_j_prime(double nu, double x) {
    require_bessel_domain(nu, x, "bessel_j_prime");
    if (x == 0.0) {
        if (nu == 1.0) {
            return 0.5;
        }
        if (nu == 0.0 || nu > 1.0) {
            return 0.0;
        }
        return std::numeric_limits<double>::infinity();
    }
    return boost::math::cyl_bessel_j_prime(nu, x);
}

double gamma_fn(double x) {
    require_finite(x, "gamma_fn");
    if (x <= 0.0) {
        throw DomainError("gamma_fn: argument must be positive");
    }
    return boost::math::tgamma(x);
}

double sinc_pi(double u) {
    require_finite(u, "sinc_pi");
    const double z = std::numbers::pi * u;
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return boost::math::sin_pi(u) / z;
}

}  // namespace gapprob::specfun
