#include "gapprob/painleve.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gapprob/errors.hpp"
#include "gapprob/operators.hpp"
#include "gapprob/quadrature.hpp"
#include "gapprob/specfun.hpp"

namespace gapprob {

namespace odeint = boost::numeric::odeint;

namespace {

template <std::size_t N>
using State = std::array<double, N>;

// Integrate forward through `times` (strictly increasing), calling obs(state, time) at each.
template <std::size_t N, class Sys, class Obs>
void integrate_on(Sys&& sys, State<N> x, const std::vector<double>& times, Obs&& obs, double abs_tol,
                  double rel_tol) {
    if (times.size() < 2) {
        obs(x, times.front());
        return;
    }
    auto stepper = odeint::make_controlled(abs_tol, rel_tol, odeint::runge_kutta_fehlberg78<State<N>>());
    const double dt = (times[1] - times[0]) / 4.0;
    odeint::integrate_times(stepper, std::forward<Sys>(sys), x, times.begin(), times.end(), dt,
                            std::forward<Obs>(obs), odeint::max_step_checker(200000));
}

std::vector<double> uniform_grid(double lo, double hi, double max_step) {
    const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_step)));
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) {
        g[i] = lo + (hi - lo) * i / n;
    }
    g[n] = hi;
    return g;
}

void require_xi(double xi, const char* what) {
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError(std::string(what) + ": xi must lie in [0, 1]");
    }
}

// Fourth-order centred derivative of uniformly sampled f; one-sided near the ends.
std::vector<double> fd_derivative(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 5) {
        return d;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
            d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
        } else if (i < 2) {
            d[i] = (-25.0 * f[i] + 48.0 * f[i + 1] - 36.0 * f[i + 2] + 16.0 * f[i + 3] - 3.0 * f[i + 4]) /
                   (12.0 * h);
        } else {
            d[i] = (25.0 * f[i] - 48.0 * f[i - 1] + 36.0 * f[i - 2] - 16.0 * f[i - 3] + 3.0 * f[i - 4]) /
                   (12.0 * h);
        }
    }
    return d;
}

double scaled(double value, double scale) { return std::abs(value) / (1e-300 + scale); }

// ---------------------------------------------------------------- PII (q route)

struct PiiTail {
    double q, dq, i0, i1, i2;
};

PiiTail pii_tail(double xi, double s) {
    const double r = std::sqrt(xi);
    const double ai = specfun::airy_ai(s);
    const double aip = specfun::airy_ai_prime(s);
    const MappedRule rule = remap(SemiInfiniteMap{s, 2.0}, 96);
    const double i2 = integrate(rule, [s](double t) {
        const double v = specfun::airy_ai(t);
        return (t - s) * v * v;
    });
    return {r * ai, r * aip, r * airy_tail_integral(s), xi * (aip * aip - s * ai * ai), xi * i2};
}

// Solve on a decreasing list of s values (first entry = s_max); obs(state, s).
template <class Obs>
void run_pii(double xi, const std::vector<double>& s_desc, double abs_tol, double rel_tol, Obs&& obs) {
    const double s_max = s_desc.front();
    const PiiTail tail = pii_tail(xi, s_max);
    State<5> x{tail.q, tail.dq, tail.i0, tail.i1, tail.i2};
    std::vector<double> u(s_desc.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = s_max - s_desc[i];
    }
    // Independent variable u = s_max - s; state (q, q_s, I0, I1, I2).
    auto sys = [s_max](const State<5>& y, State<5>& dy, double uu) {
        const double s = s_max - uu;
        const double q = y[0];
        if (!(std::abs(q) <= 1e6)) {
            throw IntegrationError("PII transcendent blew up", s);
        }
        dy[0] = -y[1];
        dy[1] = -(s * q + 2.0 * q * q * q);
        dy[2] = q;
        dy[3] = q * q;
        dy[4] = y[3];
    };
    integrate_on<5>(sys, x, u, [&](const State<5>& y, double uu) { obs(y, s_max - uu); }, abs_tol, rel_tol);
}

// ---------------------------------------------------------------- sigma-PII

struct HiiSeed {
    double h, h1, h2, J;
};

HiiSeed hii_seed(Sign sign, double xi, double t) {
    const double e = sign_value(sign) * 0.5 * std::sqrt(xi);
    const double ai = specfun::airy_ai(t);
    const double aip = specfun::airy_ai_prime(t);
    const MappedRule rule = remap(SemiInfiniteMap{t, 2.0}, 96);
    const double quad_tail = integrate(rule, [](double v) {
        const double f = specfun::airy_ai(v);
        const double fp = specfun::airy_ai_prime(v);
        return fp * fp - v * f * f;
    });
    return {e * ai + 0.5 * xi * (aip * aip - t * ai * ai), e * aip - 0.5 * xi * ai * ai,
            e * t * ai - xi * ai * aip, e * airy_tail_integral(t) + 0.5 * xi * quad_tail};
}

template <class Obs>
void run_hii(Sign sign, double xi, const std::vector<double>& t_desc, double abs_tol, double rel_tol, Obs&& obs) {
    const double t_max = t_desc.front();
    const HiiSeed seed = hii_seed(sign, xi, t_max);
    State<4> x{seed.h, seed.h1, seed.h2, seed.J};
    std::vector<double> u(t_desc.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = t_max - t_desc[i];
    }
    // h''' = t h' + h - 6 h'^2, integrated in u = t_max - t; J = int_t^inf h.
    auto sys = [t_max](const State<4>& y, State<4>& dy, double uu) {
        const double t = t_max - uu;
        if (!(std::abs(y[0]) <= 1e6)) {
            throw IntegrationError("sigma-PII Hamiltonian blew up", t);
        }
        dy[0] = -y[1];
        dy[1] = -y[2];
        dy[2] = -(t * y[1] + y[0] - 6.0 * y[1] * y[1]);
        dy[3] = y[0];
    };
    integrate_on<4>(sys, x, u, [&](const State<4>& y, double uu) { obs(y, t_max - uu); }, abs_tol, rel_tol);
}

// ---------------------------------------------------------------- sigma-PIII'

using Poly = std::vector<double>;

Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            r[i + j] += p[i] * q[j];
        }
    }
    return r;
}

Poly poly_deriv(const Poly& p) {
    Poly r(std::max<std::size_t>(1, p.size() - 1), 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        r[i - 1] = i * p[i];
    }
    return r;
}

Poly poly_axpy(double alpha, const Poly& p, const Poly& q) {
    Poly r(std::max(p.size(), q.size()), 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        r[i] += alpha * p[i];
    }
    for (std::size_t i = 0; i < q.size(); ++i) {
        r[i] += q[i];
    }
    return r;
}

// (u s_uu - s_u)^2 - 4 a^2 s_u^2 + 8 s_u (2 s_u - u)(s - u s_u / 2): the sigma-PIII' relation
// in u = sqrt(t), scaled by 16 u^2.
Poly piii_relation_u(const Poly& sigma, double a) {
    const Poly d1 = poly_deriv(sigma);
    const Poly d2 = poly_deriv(d1);
    const Poly u{0.0, 1.0};
    const Poly a1 = poly_axpy(-1.0, d1, poly_mul(u, d2));
    const Poly b1 = poly_axpy(-1.0, u, poly_mul(Poly{2.0}, d1));
    const Poly c1 = poly_axpy(-0.5, poly_mul(u, d1), sigma);
    Poly r = poly_mul(a1, a1);
    r = poly_axpy(-4.0 * a * a, poly_mul(d1, d1), r);
    r = poly_axpy(8.0, poly_mul(poly_mul(d1, b1), c1), r);
    return r;
}

struct PiiiSeries {
    int k0;
    Poly coeffs;  // sigma = sum coeffs[k] u^k
};

PiiiSeries piii_series(double a, double xi, int extra_terms = 30) {
    const int k0 = static_cast<int>(std::lround(2.0 + 2.0 * a));
    Poly c(k0 + extra_terms + 1, 0.0);
    c[k0] = xi / (std::pow(2.0, 2.0 + 2.0 * a) * specfun::gamma_fn(1.0 + a) * specfun::gamma_fn(2.0 + a));
    for (int m = 1; m <= extra_terms; ++m) {
        const int idx = 2 * k0 + m - 2;
        Poly trial(c.begin(), c.begin() + k0 + m + 1);
        trial[k0 + m] = 0.0;
        const double f0 = piii_relation_u(trial, a)[idx];
        trial[k0 + m] = 1.0;
        const double f1 = piii_relation_u(trial, a)[idx];
        c[k0 + m] = -f0 / (f1 - f0);
    }
    return {k0, c};
}

// ---------------------------------------------------------------- q-tilde and sigma-PV

struct Monomial {
    double c;
    double p;
};

double kappa(double a) { return 1.0 / (std::pow(2.0, a) * specfun::gamma_fn(1.0 + a)); }

// Small-z starting point: beyond this the series truncation error exceeds ~1e-13.
double hard_seed_point(double a) { return std::min(1e-3, std::pow(10.0, -13.0 / (4.0 * (a + 1.0)))); }

bool qtilde_is_constant(double a, double xi) { return a == 0.0 && xi == 1.0; }

std::string pv_descriptor(double a, double xi, double z0, const char* route) {
    std::ostringstream d;
    d.precision(17);
    d << route << " seeded at z=sqrt(t)=" << z0 << " from the small-argument series in z^(a+2k)"
      << " (a=" << a << ", xi=" << xi << ")";
    return d.str();
}

// sigma-PV seed: Y = x h-tilde as a sum of monomials.
std::vector<Monomial> sigma_pv_seed(Sign sign, double a, double xi) {
    const double e = sign_value(sign);
    const double r = std::sqrt(xi);
    const double k = kappa(a);
    const double a1 = a + 1.0;
    return {
        {-e * r * k / 2.0, a + 1.0},
        {-xi * k * k / (4.0 * a1), 2.0 * a + 2.0},
        {e * r * k / (8.0 * a1), a + 3.0},
        {-e * xi * r * k * k * k / (8.0 * a1 * a1), 3.0 * a + 3.0},
        {xi * k * k / (4.0 * a1 * (2.0 * a + 4.0)), 2.0 * a + 4.0},
        {-xi * xi * k * k * k * k / (16.0 * a1 * a1 * a1), 4.0 * a + 4.0},
    };
}

void require_hard(double a, double xi, const char* what) {
    if (!(a > -1.0) || !std::isfinite(a)) {
        throw DomainError(std::string(what) + ": a must exceed -1");
    }
    require_xi(xi, what);
}

template <class F>
TauValue with_error(F&& f, const OdeOptions& opts) {
    OdeOptions loose = opts;
    loose.rel_tol = opts.rel_tol * 100.0;
    loose.abs_tol = opts.abs_tol * 100.0;
    const double v = f(opts);
    const double w = f(loose);
    return {v, std::abs(v - w)};
}

}  // namespace

double sigma_pii_relation(double t, double h, double h1, double h2) {
    const double H = h - t * t / 8.0;
    const double H1 = h1 - t / 4.0;
    const double H2 = h2 - 0.25;
    const double terms[] = {H2 * H2, 4.0 * H1 * H1 * H1, 2.0 * H1 * (t * H1 - H), -1.0 / 16.0};
    double sum = 0.0;
    double scale = 0.0;
    for (double v : terms) {
        sum += v;
        scale += std::abs(v);
    }
    return scaled(sum, scale);
}

double sigma_piii_relation(double t, double a, double sigma, double d1, double d2) {
    const double terms[] = {(t * d2) * (t * d2), -a * a * d1 * d1, d1 * (4.0 * d1 - 1.0) * (sigma - t * d1)};
    double sum = 0.0;
    double scale = 0.0;
    for (double v : terms) {
        sum += v;
        scale += std::abs(v);
    }
    return scaled(sum, scale);
}

double sigma_pv_relation(double x, double a, double Y, double Y1, double Y2) {
    const double terms[] = {-Y * Y,
                            -Y * Y1 * Y1,
                            Y * x * Y1,
                            Y * (x * x - a * a + 1.0) / 4.0,
                            x * Y1 * Y1 * Y1,
                            Y1 * Y1 * (x * x - a * a) / 4.0,
                            -x * Y1 / 4.0,
                            x * x * Y2 * Y2 / 4.0,
                            x * x * Y2 / 4.0};
    double sum = 0.0;
    double scale = 0.0;
    for (double v : terms) {
        sum += v;
        scale += std::abs(v);
    }
    return scaled(sum, scale);
}

// ---------------------------------------------------------------- PII q

PainleveSolution solve_pii_q(double xi, double s_min, double s_max, const OdeOptions& opts) {
    require_xi(xi, "solve_pii_q");
    if (!(s_min >= -6.0) || !(s_max >= 8.0) || !(s_min < s_max) || !std::isfinite(s_max)) {
        throw DomainError("solve_pii_q: require -6 <= s_min < s_max and s_max >= 8");
    }
    PainleveSolution sol;
    sol.family = PainleveFamily::pii_q;
    sol.xi = xi;
    std::ostringstream d;
    d.precision(17);
    d << "q = sqrt(xi) Ai(s), q' = sqrt(xi) Ai'(s) at s_max=" << s_max
      << "; tails of int q, int q^2, int (t-s) q^2 beyond s_max from q = sqrt(xi) Ai";
    sol.seed_descriptor = d.str();

    std::vector<double> asc = uniform_grid(s_min, s_max, 0.005);
    std::vector<double> desc(asc.rbegin(), asc.rend());
    std::vector<State<5>> states;
    states.reserve(desc.size());
    if (xi == 0.0) {
        states.assign(desc.size(), State<5>{});
    } else {
        run_pii(xi, desc, opts.abs_tol * 1e-14, opts.rel_tol,
                [&](const State<5>& y, double) { states.push_back(y); });
    }
    const std::size_t n = asc.size();
    sol.grid = asc;
    sol.values.resize(n);
    sol.derivatives.resize(n);
    sol.log_tau_plus.resize(n);
    sol.log_tau_minus.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const State<5>& y = states[n - 1 - i];
        sol.values[i] = y[0];
        sol.derivatives[i] = y[1];
        sol.log_tau_plus[i] = -0.5 * y[4] - 0.5 * y[2];
        sol.log_tau_minus[i] = -0.5 * y[4] + 0.5 * y[2];
    }
    const double h = asc[1] - asc[0];
    const std::vector<double> q2 = fd_derivative(sol.derivatives, h);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = asc[i];
        const double q = sol.values[i];
        const double rhs = s * q + 2.0 * q * q * q;
        const double scale = std::abs(q2[i]) + std::abs(s * q) + 2.0 * std::abs(q * q * q) + 1e-300;
        // Residuals are measured relative to the size of the terms, floored at the seed scale.
        sol.max_residual = std::max(sol.max_residual, std::abs(q2[i] - rhs) / std::max(scale, 1.0));
    }
    return sol;
}

TauValue tau_ii(Sign sign, double s, double xi, const OdeOptions& opts) {
    require_xi(xi, "tau_ii");
    if (!(s >= -6.0) || !std::isfinite(s)) {
        throw DomainError("tau_ii: s must be finite and >= -6");
    }
    if (xi == 0.0) {
        return {1.0, 0.0};
    }
    const double e = sign_value(sign);
    const double s_max = std::max(10.0, s);
    auto eval = [&](const OdeOptions& o) {
        if (s >= s_max) {
            const PiiTail t = pii_tail(xi, s);
            return std::exp(-0.5 * t.i2 - e * 0.5 * t.i0);
        }
        double log_tau = 0.0;
        run_pii(xi, {s_max, s}, o.abs_tol * 1e-14, o.rel_tol,
                [&](const State<5>& y, double) { log_tau = -0.5 * y[4] - e * 0.5 * y[2]; });
        return std::exp(log_tau);
    };
    return with_error(eval, opts);
}

// ---------------------------------------------------------------- sigma-PII

PainleveSolution solve_hii(Sign sign, double xi, double s_min, double t_max, const OdeOptions& opts) {
    require_xi(xi, "solve_hii");
    if (!(s_min >= -6.0) || !(t_max >= 8.0) || !(s_min < t_max)) {
        throw DomainError("solve_hii: require -6 <= s_min < t_max and t_max >= 8");
    }
    PainleveSolution sol;
    sol.family = PainleveFamily::hii;
    sol.xi = xi;
    sol.sign = sign;
    std::ostringstream d;
    d.precision(17);
    d << "h = +-(sqrt(xi)/2) Ai + (xi/2)(Ai'^2 - t Ai^2) and two derivatives at t=" << t_max
      << "; tail of int h from the same expansion";
    sol.seed_descriptor = d.str();
    std::vector<double> asc = uniform_grid(s_min, t_max, 0.01);
    std::vector<double> desc(asc.rbegin(), asc.rend());
    std::vector<State<4>> states;
    if (xi == 0.0) {
        states.assign(desc.size(), State<4>{});
    } else {
        run_hii(sign, xi, desc, opts.abs_tol * 1e-14, opts.rel_tol,
                [&](const State<4>& y, double) { states.push_back(y); });
    }
    const std::size_t n = asc.size();
    sol.grid = asc;
    sol.values.resize(n);
    sol.derivatives.resize(n);
    auto& lt = sign == Sign::plus ? sol.log_tau_plus : sol.log_tau_minus;
    lt.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const State<4>& y = states[n - 1 - i];
        sol.values[i] = y[0];
        sol.derivatives[i] = y[1];
        lt[i] = -y[3];
        sol.max_residual = std::max(sol.max_residual, sigma_pii_relation(asc[i], y[0], y[1], y[2]));
    }
    return sol;
}

TauValue tau_ii_sigma(Sign sign, double s, double xi, const OdeOptions& opts) {
    require_xi(xi, "tau_ii_sigma");
    if (!(s >= -6.0) || !std::isfinite(s)) {
        throw DomainError("tau_ii_sigma: s must be finite and >= -6");
    }
    if (xi == 0.0) {
        return {1.0, 0.0};
    }
    const double t_max = std::max(10.0, s);
    auto eval = [&](const OdeOptions& o) {
        if (s >= t_max) {
            return std::exp(-hii_seed(sign, xi, s).J);
        }
        double J = 0.0;
        run_hii(sign, xi, {t_max, s}, o.abs_tol * 1e-14, o.rel_tol, [&](const State<4>& y, double) { J = y[3]; });
        return std::exp(-J);
    };
    return with_error(eval, opts);
}

// ---------------------------------------------------------------- sigma-PIII'

namespace {

// Closer to 0 the leading terms of the relation grow like 1/t and cancel, and the rounding
// left behind at the seed shows up as a relation defect of order 1e-5 near t ~ 30.
constexpr double kPiiiSeedT = 1e-2;

// Run about three digits tighter than requested: at the default tolerance the a = -1/2
// determinant comparisons sit near 1e-11, with this they reach 1e-14.
double piii_rel_tol(double rel_tol) { return std::max(rel_tol * 1e-3, 1e-15); }

void require_piii(double a, double xi, const char* what) {
    if (a != -0.5 && a != 0.5) {
        throw DomainError(std::string(what) + ": a must be -1/2 or +1/2");
    }
    require_xi(xi, what);
}

// State (sigma, D sigma, D^2 sigma, Lambda) at t from the series, D = t d/dt, Lambda = int_0^t sigma/t'.
State<4> piii_series_state(const PiiiSeries& ser, double t) {
    const double u = std::sqrt(t);
    State<4> y{};
    double up = 1.0;
    for (std::size_t k = 0; k < ser.coeffs.size(); ++k) {
        const double term = ser.coeffs[k] * up;
        const double half_k = 0.5 * static_cast<double>(k);
        y[0] += term;
        y[1] += half_k * term;
        y[2] += half_k * half_k * term;
        if (k > 0) {
            y[3] += term / half_k;
        }
        up *= u;
    }
    return y;
}

template <class Obs>
void run_piii(double a, double xi, const std::vector<double>& x_grid, double abs_tol, double rel_tol, Obs&& obs) {
    const PiiiSeries ser = piii_series(a, xi);
    const State<4> y0 = piii_series_state(ser, std::exp(x_grid.front()));
    auto sys = [a](const State<4>& y, State<4>& dy, double x) {
        const double t = std::exp(x);
        const double s = y[0];
        const double p = y[1];
        dy[0] = p;
        dy[1] = y[2];
        dy[2] = 2.0 * y[2] - p + a * a * p - 0.5 * (8.0 * p - t) * (s - p) + 0.5 * p * (4.0 * p - t);
        dy[3] = s;
        if (!std::isfinite(dy[2])) {
            throw IntegrationError("sigma-PIII' integration produced a non-finite value", t);
        }
    };
    integrate_on<4>(sys, y0, x_grid, std::forward<Obs>(obs), abs_tol, rel_tol);
}

}  // namespace

PainleveSolution solve_sigma_piii(double a, double xi, double t_max, const OdeOptions& opts) {
    require_piii(a, xi, "solve_sigma_piii");
    if (!(t_max > kPiiiSeedT) || !(t_max <= 40.0)) {
        throw DomainError("solve_sigma_piii: t_max must lie in (1e-6, 40]");
    }
    PainleveSolution sol;
    sol.family = PainleveFamily::sigma_piii;
    sol.a = a;
    sol.xi = xi;
    std::ostringstream d;
    d.precision(17);
    d << "sigma = xi t^(1+a)/(2^(2+2a) Gamma(1+a) Gamma(2+a)) + ... (series in sqrt(t), 30 correction terms)"
      << " at t0=" << kPiiiSeedT << "; int_0^t0 sigma/t from the same series";
    sol.seed_descriptor = d.str();
    const std::vector<double> xg = uniform_grid(std::log(kPiiiSeedT), std::log(t_max), 0.02);
    std::vector<State<4>> states;
    if (xi == 0.0) {
        states.assign(xg.size(), State<4>{});
    } else {
        run_piii(a, xi, xg, opts.abs_tol * 1e-14, piii_rel_tol(opts.rel_tol),
                 [&](const State<4>& y, double) { states.push_back(y); });
    }
    for (std::size_t i = 0; i < xg.size(); ++i) {
        const double t = std::exp(xg[i]);
        const State<4>& y = states[i];
        sol.grid.push_back(t);
        sol.values.push_back(y[0]);
        sol.derivatives.push_back(y[1] / t);
        sol.log_tau_plus.push_back(-y[3]);
        if (xi != 0.0) {
            sol.max_residual = std::max(sol.max_residual,
                                        sigma_piii_relation(t, a, y[0], y[1] / t, (y[2] - y[1]) / (t * t)));
        }
    }
    return sol;
}

TauValue tau_iii(double s, double a, double xi, const OdeOptions& opts) {
    require_piii(a, xi, "tau_iii");
    if (!(s >= 0.0) || !(s <= 40.0)) {
        throw DomainError("tau_iii: s must lie in [0, 40]");
    }
    if (xi == 0.0 || s == 0.0) {
        return {1.0, 0.0};
    }
    if (s <= kPiiiSeedT) {
        return {std::exp(-piii_series_state(piii_series(a, xi), s)[3]), 0.0};
    }
    auto eval = [&](const OdeOptions& o) {
        double lambda = 0.0;
        run_piii(a, xi, {std::log(kPiiiSeedT), std::log(s)}, o.abs_tol * 1e-14, piii_rel_tol(o.rel_tol),
                 [&](const State<4>& y, double) { lambda = y[3]; });
        return std::exp(-lambda);
    };
    return with_error(eval, opts);
}

// ---------------------------------------------------------------- q-tilde

namespace {

// State (w, Dw, A, F, G) in x = log z, z = sqrt(t):
// A = int_0^t q~^2, F = int_0^t log(t/t') q~^2, G = int_0^t q~/sqrt(t').
State<5> qtilde_seed(double a, double xi, double z) {
    const double r = std::sqrt(xi);
    const double k = kappa(a);
    const double a1 = a + 1.0;
    const double cubic = xi * r * k * k * k / (4.0 * a1 * a1);
    State<5> y{};
    y[0] = r * specfun::bessel_j(a, z) + cubic * std::pow(z, 3.0 * a + 2.0);
    y[1] = r * z * specfun::bessel_j_prime(a, z) + (3.0 * a + 2.0) * cubic * std::pow(z, 3.0 * a + 2.0);
    // A as monomials; F adds 2 c z^p / p per monomial of A.
    const Monomial amon[] = {
        {2.0 * xi * k * k / (2.0 * a + 2.0), 2.0 * a + 2.0},
        {-2.0 * xi * k * k / (2.0 * a1 * (2.0 * a + 4.0)), 2.0 * a + 4.0},
        {2.0 * xi * xi * k * k * k * k / (2.0 * a1 * a1 * (4.0 * a + 4.0)), 4.0 * a + 4.0},
    };
    for (const auto& m : amon) {
        const double zp = std::pow(z, m.p);
        y[2] += m.c * zp;
        y[3] += 2.0 * m.c * zp / m.p;
    }
    y[4] = 2.0 * (r * k * std::pow(z, a + 1.0) / a1 - r * k * std::pow(z, a + 3.0) / (4.0 * a1 * (a + 3.0)) +
                  cubic * std::pow(z, 3.0 * a + 3.0) / (3.0 * a + 3.0));
    return y;
}

double qtilde_second(double a, double z, double w, double dw) {
    const double z2 = z * z;
    const double den = w * w - 1.0;
    if (std::abs(den) < 1e-9) {
        throw IntegrationError("q-tilde reached the degenerate value |q~| = 1", z2);
    }
    return (w * dw * dw + (z2 - a * a) * w + z2 * w * w * w * (w * w - 2.0)) / den;
}

template <class Obs>
void run_qtilde(double a, double xi, const std::vector<double>& x_grid, double abs_tol, double rel_tol, Obs&& obs) {
    const State<5> y0 = qtilde_seed(a, xi, std::exp(x_grid.front()));
    auto sys = [a](const State<5>& y, State<5>& dy, double x) {
        const double z = std::exp(x);
        dy[0] = y[1];
        dy[1] = qtilde_second(a, z, y[0], y[1]);
        dy[2] = 2.0 * z * z * y[0] * y[0];
        dy[3] = 2.0 * y[2];
        dy[4] = 2.0 * z * y[0];
    };
    integrate_on<5>(sys, y0, x_grid, std::forward<Obs>(obs), abs_tol, rel_tol);
}

// Closed form for a = 0, xi = 1, where q~ = 1 identically.
State<5> qtilde_constant_state(double t) { return {1.0, 0.0, t, t, 2.0 * std::sqrt(t)}; }

State<5> qtilde_at(double a, double xi, double t, const OdeOptions& o) {
    if (xi == 0.0) {
        return State<5>{};
    }
    if (qtilde_is_constant(a, xi)) {
        return qtilde_constant_state(t);
    }
    const double z0 = hard_seed_point(a);
    const double z = std::sqrt(t);
    if (z <= z0) {
        return qtilde_seed(a, xi, z);
    }
    State<5> out{};
    run_qtilde(a, xi, {std::log(z0), std::log(z)}, o.abs_tol * 1e-14, o.rel_tol,
               [&](const State<5>& y, double) { out = y; });
    return out;
}

}  // namespace

PainleveSolution solve_qtilde(double a, double xi, double t_max, const OdeOptions& opts) {
    require_hard(a, xi, "solve_qtilde");
    if (!(t_max > 0.0) || !(t_max <= 20.0)) {
        throw DomainError("solve_qtilde: t_max must lie in (0, 20]");
    }
    const double z0 = hard_seed_point(a);
    PainleveSolution sol;
    sol.family = PainleveFamily::qtilde_v;
    sol.a = a;
    sol.xi = xi;
    sol.seed_descriptor = qtilde_is_constant(a, xi) ? std::string("a=0, xi=1: q~ = 1 identically (closed form)")
                                                    : pv_descriptor(a, xi, z0, "q~ = sqrt(xi) J_a(sqrt t) + cubic term");
    const double zmax = std::sqrt(t_max);
    if (!(zmax > z0)) {
        throw DomainError("solve_qtilde: t_max below the seed point");
    }
    const std::vector<double> xg = uniform_grid(std::log(z0), std::log(zmax), 0.01);
    std::vector<State<5>> states;
    if (xi == 0.0) {
        states.assign(xg.size(), State<5>{});
    } else if (qtilde_is_constant(a, xi)) {
        for (double x : xg) {
            states.push_back(qtilde_constant_state(std::exp(2.0 * x)));
        }
    } else {
        run_qtilde(a, xi, xg, opts.abs_tol * 1e-14, opts.rel_tol,
                   [&](const State<5>& y, double) { states.push_back(y); });
    }
    std::vector<double> dw(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        dw[i] = states[i][1];
    }
    const std::vector<double> d2w = fd_derivative(dw, xg[1] - xg[0]);
    for (std::size_t i = 0; i < xg.size(); ++i) {
        const double z = std::exp(xg[i]);
        const double t = z * z;
        const State<5>& y = states[i];
        sol.grid.push_back(t);
        sol.values.push_back(y[0]);
        sol.derivatives.push_back(y[1] / (2.0 * t));
        sol.log_tau_plus.push_back(-y[3] / 8.0 - y[4] / 4.0);
        sol.log_tau_minus.push_back(-y[3] / 8.0 + y[4] / 4.0);
        const double w = y[0];
        const double lhs = (w * w - 1.0) * d2w[i];
        const double rhs = w * y[1] * y[1] + (t - a * a) * w + t * w * w * w * (w * w - 2.0);
        const double scale = std::abs(lhs) + std::abs(w * y[1] * y[1]) + std::abs((t - a * a) * w) +
                             std::abs(t * w * w * w * (w * w - 2.0));
        if (scale > 0.0) {
            sol.max_residual = std::max(sol.max_residual, std::abs(lhs - rhs) / scale);
        }
    }
    return sol;
}

TauValue tau_v(Sign sign, double s, double a, double xi, const OdeOptions& opts) {
    require_hard(a, xi, "tau_v");
    if (!(s >= 0.0) || !(s <= 20.0)) {
        throw DomainError("tau_v: s must lie in [0, 20]");
    }
    if (s == 0.0) {
        return {1.0, 0.0};
    }
    const double e = sign_value(sign);
    return with_error(
        [&](const OdeOptions& o) {
            const State<5> y = qtilde_at(a, xi, s, o);
            return std::exp(-y[3] / 8.0 - e * y[4] / 4.0);
        },
        opts);
}

TauValue tau_v_product(double s, double a, double xi, const OdeOptions& opts) {
    require_hard(a, xi, "tau_v_product");
    if (!(s >= 0.0) || !(s <= 20.0)) {
        throw DomainError("tau_v_product: s must lie in [0, 20]");
    }
    if (s == 0.0) {
        return {1.0, 0.0};
    }
    return with_error([&](const OdeOptions& o) { return std::exp(-qtilde_at(a, xi, s, o)[3] / 4.0); }, opts);
}

// ---------------------------------------------------------------- sigma-PV

namespace {

// State (Y, DY, D^2Y, Lambda) with D = x d/dx, Lambda = int_0^x Y/x' dx'.
State<4> sigma_pv_series_state(Sign sign, double a, double xi, double x) {
    State<4> y{};
    for (const auto& m : sigma_pv_seed(sign, a, xi)) {
        const double v = m.c * std::pow(x, m.p);
        y[0] += v;
        y[1] += m.p * v;
        y[2] += m.p * m.p * v;
        y[3] += v / m.p;
    }
    return y;
}

template <class Obs>
void run_sigma_pv(Sign sign, double a, double xi, const std::vector<double>& l_grid, double abs_tol,
                  double rel_tol, Obs&& obs) {
    const State<4> y0 = sigma_pv_series_state(sign, a, xi, std::exp(l_grid.front()));
    auto sys = [a](const State<4>& y, State<4>& dy, double l) {
        const double x = std::exp(l);
        const double Y = y[0];
        const double DY = y[1];
        dy[0] = DY;
        dy[1] = y[2];
        dy[2] = 2.0 * y[2] - DY * (1.0 + x * x - a * a) - 2.0 * x * x * Y + 4.0 * Y * DY - 6.0 * DY * DY;
        dy[3] = Y;
        if (!std::isfinite(dy[2]) || std::abs(Y) > 1e8) {
            throw IntegrationError("sigma-PV integration blew up", x * x);
        }
    };
    integrate_on<4>(sys, y0, l_grid, std::forward<Obs>(obs), abs_tol, rel_tol);
}

std::string sigma_pv_descriptor(double a, double xi, double x0) {
    std::ostringstream d;
    d.precision(17);
    d << "h~ = -+ x^(a+1)/(2^(a+1) Gamma(a+1)) sqrt(xi)/x + ... (six-term series) at x=" << x0
      << "; parameters nu0=0, nu1=" << a / 2.0 << ", nu2=" << (a - 1.0) / 2.0 << ", nu3=-0.5"
      << "; v1=-v3=" << -(a - 1.0) / 4.0 << ", v2=-v4=" << (a + 1.0) / 4.0 << " (a=" << a << ", xi=" << xi
      << ")";
    return d.str();
}

}  // namespace

PainleveSolution solve_sigma_pv(Sign sign, double a, double xi, double x_max, const OdeOptions& opts) {
    require_hard(a, xi, "solve_sigma_pv");
    const double x0 = hard_seed_point(a);
    if (!(x_max > x0) || !(x_max <= std::sqrt(20.0) + 1e-12)) {
        throw DomainError("solve_sigma_pv: x_max must lie in (x0, sqrt(20)]");
    }
    PainleveSolution sol;
    sol.family = PainleveFamily::sigma_pv;
    sol.a = a;
    sol.xi = xi;
    sol.sign = sign;
    sol.seed_descriptor = sigma_pv_descriptor(a, xi, x0);
    const std::vector<double> lg = uniform_grid(std::log(x0), std::log(x_max), 0.02);
    std::vector<State<4>> states;
    if (xi == 0.0) {
        states.assign(lg.size(), State<4>{});
    } else {
        run_sigma_pv(sign, a, xi, lg, opts.abs_tol * 1e-14, opts.rel_tol,
                     [&](const State<4>& y, double) { states.push_back(y); });
    }
    auto& lt = sign == Sign::plus ? sol.log_tau_plus : sol.log_tau_minus;
    for (std::size_t i = 0; i < lg.size(); ++i) {
        const double x = std::exp(lg[i]);
        const State<4>& y = states[i];
        sol.grid.push_back(x);
        sol.values.push_back(y[0] / x);
        sol.derivatives.push_back((y[1] - y[0]) / (x * x));
        lt.push_back(y[3]);
        if (xi != 0.0) {
            sol.max_residual =
                std::max(sol.max_residual, sigma_pv_relation(x, a, y[0], y[1] / x, (y[2] - y[1]) / (x * x)));
        }
    }
    return sol;
}

TauValue tau_v_sigma(Sign sign, double s, double a, double xi, const OdeOptions& opts) {
    require_hard(a, xi, "tau_v_sigma");
    if (!(s >= 0.0) || !(s <= 20.0)) {
        throw DomainError("tau_v_sigma: s must lie in [0, 20]");
    }
    if (s == 0.0 || xi == 0.0) {
        return {1.0, 0.0};
    }
    const double X = std::sqrt(s);
    const double x0 = hard_seed_point(a);
    if (X <= x0) {
        return {std::exp(sigma_pv_series_state(sign, a, xi, X)[3]), 0.0};
    }
    return with_error(
        [&](const OdeOptions& o) {
            double lambda = 0.0;
            run_sigma_pv(sign, a, xi, {std::log(x0), std::log(X)}, o.abs_tol * 1e-14, o.rel_tol,
                         [&](const State<4>& y, double) { lambda = y[3]; });
            return std::exp(lambda);
        },
        opts);
}

}  // namespace gapprob
