#include "gapprob/gap.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "detail.hpp"
#include "gapprob/errors.hpp"
#include "gapprob/fredholm.hpp"
#include "gapprob/operators.hpp"

namespace gapprob {

namespace detail {

MappedRule soft_v_rule(int n) { return remap(SemiInfiniteMap{0.0, 2.0}, n); }
MappedRule airy_rule(double s, int n) { return remap(SemiInfiniteMap{s, 2.0}, n); }
MappedRule bulk_rule(double h, int n) { return remap(FiniteMap{0.0, h}, n); }

FredholmEval bulk_parity_det(Parity parity, double h, double z, int n) {
    return det_id_minus(z, discretize(sine_kernel_pm(h, parity), bulk_rule(h, n)));
}

FredholmEval sine_det(double L, double z, int n) {
    return det_id_minus(z, discretize(sine_kernel(L), bulk_rule(L, n)));
}

FredholmEval soft_v_det(double s, double z, int n) { return det_id_minus(z, discretize(v_soft(s), soft_v_rule(n))); }

FredholmEval airy_det(double s, double z, int n) {
    return det_id_minus(z, discretize(airy_kernel(s), airy_rule(s, n)));
}

FredholmEval hard_v_det(double s, double a, double z, int n) {
    return det_id_minus(z, discretize(v_hard(s, a), hard_edge_rule(a, 1.0, n)));
}

FredholmEval bessel_det(double s, double a, double z, int n) {
    return det_id_minus(z, discretize(bessel_kernel(a, s), hard_edge_rule(a, s, n)));
}

FredholmEval product(const FredholmEval& x, const FredholmEval& y) {
    return {x.value * y.value, std::abs(x.value) * y.error_estimate + std::abs(y.value) * x.error_estimate,
            x.order_used};
}

}  // namespace detail

namespace {

using detail::product;

FredholmEval average(const FredholmEval& x, const FredholmEval& y) {
    return {0.5 * (x.value + y.value), 0.5 * (x.error_estimate + y.error_estimate), x.order_used};
}

TauValue tau_product(const TauValue& x, const TauValue& y) {
    return {x.value * y.value, x.value * y.quadrature_error + y.value * x.quadrature_error};
}

TauValue tau_average(const TauValue& x, const TauValue& y) {
    return {0.5 * (x.value + y.value), 0.5 * (x.quadrature_error + y.quadrature_error)};
}

[[noreturn]] void no_determinant(int beta, const char* regime) {
    std::ostringstream m;
    m << "no determinant formula for the beta=" << beta << " " << regime
      << "-edge generating function at xi < 1 (the underlying kernel is indefinite); "
         "use route=painleve for the tau-function form";
    throw CapabilityError(m.str());
}

void validate(const GapQuery& q) {
    if (q.beta != 1 && q.beta != 2 && q.beta != 4) {
        throw DomainError("beta must be 1, 2 or 4");
    }
    if (!std::isfinite(q.s)) {
        throw DomainError("s must be finite");
    }
    if (!(q.xi > 0.0 && q.xi <= 1.0)) {
        throw DomainError("xi must lie in (0, 1]");
    }
    if (q.regime == Regime::hard) {
        if (!q.a) {
            throw DomainError("hard-edge query requires the parameter a");
        }
        if (!std::isfinite(*q.a) || !(*q.a > -1.0)) {
            throw DomainError("a must be finite and exceed -1");
        }
    } else if (q.a) {
        throw DomainError("parameter a applies to the hard edge only");
    }
    if ((q.regime == Regime::bulk || q.regime == Regime::hard) && !(q.s > 0.0)) {
        throw DomainError("s must be positive for bulk and hard-edge queries");
    }
}

struct RouteValues {
    std::optional<FredholmEval> fredholm;
    std::optional<TauValue> painleve;
    std::string formula;
};

RouteValues bulk_values(const GapQuery& q, const GapOptions& o, bool want_f, bool want_p) {
    RouteValues r;
    const int n = o.quadrature_order;
    const double L = q.s;
    const double xi = q.xi;
    constexpr double pi = std::numbers::pi;
    switch (q.beta) {
        case 2: {
            const double h = 0.5 * L;
            r.formula = "det(I - xi K+) det(I - xi K-) on (0, s/2) | tau(-1/2) tau(+1/2) at (pi s/2)^2";
            if (want_f) {
                r.fredholm = product(detail::bulk_parity_det(Parity::even, h, xi, n),
                                     detail::bulk_parity_det(Parity::odd, h, xi, n));
            }
            if (want_p) {
                const double t = (pi * h) * (pi * h);
                r.painleve = tau_product(tau_iii(t, -0.5, xi, o.ode), tau_iii(t, 0.5, xi, o.ode));
            }
            break;
        }
        case 1: {
            const double h = 0.5 * L;
            r.formula = xi == 1.0 ? "det(I - K+) on (0, s/2) | tau(-1/2) at (pi s/2)^2"
                                  : "det(I - xi K+) on (0, s/2), even-parity generating function | tau(-1/2; xi)";
            if (want_f) {
                r.fredholm = detail::bulk_parity_det(Parity::even, h, xi, n);
            }
            if (want_p) {
                r.painleve = tau_iii((pi * h) * (pi * h), -0.5, xi, o.ode);
            }
            break;
        }
        default: {
            if (xi != 1.0) {
                throw CapabilityError("no bulk beta=4 generating function at xi < 1");
            }
            r.formula = "(det(I - K+) + det(I - K-))/2 on (0, s) | (tau(-1/2) + tau(+1/2))/2 at (pi s)^2";
            if (want_f) {
                r.fredholm = average(detail::bulk_parity_det(Parity::even, L, 1.0, n),
                                     detail::bulk_parity_det(Parity::odd, L, 1.0, n));
            }
            if (want_p) {
                const double t = (pi * L) * (pi * L);
                r.painleve = tau_average(tau_iii(t, -0.5, 1.0, o.ode), tau_iii(t, 0.5, 1.0, o.ode));
            }
        }
    }
    return r;
}

RouteValues soft_values(const GapQuery& q, const GapOptions& o, bool want_f, bool want_p) {
    RouteValues r;
    const int n = o.quadrature_order;
    const double s = q.s;
    const double xi = q.xi;
    switch (q.beta) {
        case 2:
            r.formula = "det(I - xi K_Airy) on (s, inf) | tau+ tau- (PII)";
            if (want_f) {
                r.fredholm = detail::airy_det(s, xi, n);
            }
            if (want_p) {
                r.painleve = tau_product(tau_ii(Sign::plus, s, xi, o.ode), tau_ii(Sign::minus, s, xi, o.ode));
            }
            break;
        case 1:
            r.formula = xi == 1.0 ? "det(I - V_soft) | tau+ (PII)" : "tau+ (PII) with xi boundary data";
            if (want_f) {
                if (xi != 1.0) {
                    no_determinant(1, "soft");
                }
                r.fredholm = detail::soft_v_det(s, 1.0, n);
            }
            if (want_p) {
                r.painleve = tau_ii(Sign::plus, s, xi, o.ode);
            }
            break;
        default:
            r.formula = xi == 1.0 ? "(det(I - V_soft) + det(I + V_soft))/2 | (tau+ + tau-)/2 (PII)"
                                  : "(tau+ + tau-)/2 (PII) with xi boundary data";
            if (want_f) {
                if (xi != 1.0) {
                    no_determinant(4, "soft");
                }
                r.fredholm = average(detail::soft_v_det(s, 1.0, n), detail::soft_v_det(s, -1.0, n));
            }
            if (want_p) {
                r.painleve = tau_average(tau_ii(Sign::plus, s, xi, o.ode), tau_ii(Sign::minus, s, xi, o.ode));
            }
    }
    return r;
}

RouteValues hard_values(const GapQuery& q, const GapOptions& o, bool want_f, bool want_p) {
    RouteValues r;
    const int n = o.quadrature_order;
    const double s = q.s;
    const double a = *q.a;
    const double xi = q.xi;
    switch (q.beta) {
        case 2:
            r.formula = "det(I - xi K_Bessel) on (0, s) | exp(-1/4 int log(s/t) q~^2) (transformed PV)";
            if (want_f) {
                r.fredholm = detail::bessel_det(s, a, xi, n);
            }
            if (want_p) {
                r.painleve = tau_v_product(s, a, xi, o.ode);
            }
            break;
        case 1: {
            const double av = 2.0 * a + 1.0;
            r.formula = xi == 1.0 ? "det(I - V_hard) with Bessel order 2a+1 | tau_V+ (order 2a+1)"
                                  : "tau_V+ (order 2a+1) with xi boundary data";
            if (want_f) {
                if (xi != 1.0) {
                    no_determinant(1, "hard");
                }
                r.fredholm = detail::hard_v_det(s, av, 1.0, n);
            }
            if (want_p) {
                r.painleve = tau_v(Sign::plus, s, av, xi, o.ode);
            }
            break;
        }
        default: {
            const double av = a - 1.0;
            if (!(av > -1.0)) {
                throw DomainError("beta=4 hard edge requires a > 0 (Bessel order a-1 > -1)");
            }
            r.formula = xi == 1.0 ? "(det(I - V_hard) + det(I + V_hard))/2 with Bessel order a-1 | (tau_V+ + tau_V-)/2"
                                  : "(tau_V+ + tau_V-)/2 (order a-1) with xi boundary data";
            if (want_f) {
                if (xi != 1.0) {
                    no_determinant(4, "hard");
                }
                r.fredholm = average(detail::hard_v_det(s, av, 1.0, n), detail::hard_v_det(s, av, -1.0, n));
            }
            if (want_p) {
                r.painleve = tau_average(tau_v(Sign::plus, s, av, xi, o.ode), tau_v(Sign::minus, s, av, xi, o.ode));
            }
        }
    }
    return r;
}

}  // namespace

GapResult evaluate_gap(const GapQuery& q, const GapOptions& opts) {
    validate(q);
    if (opts.quadrature_order < 1 || opts.quadrature_order > kMaxQuadratureOrder) {
        throw DomainError("quadrature order must lie in [1, 2048]");
    }
    const bool want_f = q.route != Route::painleve;
    const bool want_p = q.route != Route::fredholm;
    RouteValues v;
    switch (q.regime) {
        case Regime::bulk:
            v = bulk_values(q, opts, want_f, want_p);
            break;
        case Regime::soft:
            v = soft_values(q, opts, want_f, want_p);
            break;
        case Regime::hard:
            v = hard_values(q, opts, want_f, want_p);
            break;
    }
    GapResult out;
    out.formula = v.formula;
    if (v.fredholm) {
        out.value = v.fredholm->value;
        out.error_estimate = v.fredholm->error_estimate;
        out.route = "fredholm";
        if (v.painleve) {
            out.painleve_value = v.painleve->value;
        }
    } else {
        out.value = v.painleve->value;
        out.error_estimate = v.painleve->quadrature_error;
        out.route = "painleve";
    }
    return out;
}

double gap_bulk(int beta, double s, double xi, Route route, const GapOptions& opts) {
    return evaluate_gap({Regime::bulk, beta, s, std::nullopt, xi, route}, opts).value;
}

double gap_soft(int beta, double s, double xi, Route route, const GapOptions& opts) {
    return evaluate_gap({Regime::soft, beta, s, std::nullopt, xi, route}, opts).value;
}

double gap_hard(int beta, double s, double a, double xi, Route route, const GapOptions& opts) {
    return evaluate_gap({Regime::hard, beta, s, a, xi, route}, opts).value;
}

double spacing_density_bulk(double s, double h, const GapOptions& opts) {
    if (!(h > 0.0) || !(s > 2.0 * h) || !std::isfinite(s)) {
        throw DomainError("spacing_density_bulk: require s > 2h > 0");
    }
    // E_1(0; (0, L)) = det(I - K+) on (0, L/2).
    const auto e1 = [&](double L) {
        return detail::bulk_parity_det(Parity::even, 0.5 * L, 1.0, opts.quadrature_order).value;
    };
    return (e1(s + h) - 2.0 * e1(s) + e1(s - h)) / (h * h);
}

double wigner_surmise(double s) {
    constexpr double pi = std::numbers::pi;
    return 0.5 * pi * s * std::exp(-0.25 * pi * s * s);
}

std::vector<IdentityReport> hard_to_soft_limit(const std::vector<double>& a_list, double s, const GapOptions& opts) {
    std::vector<IdentityReport> out;
    const FredholmEval soft = detail::soft_v_det(s, 1.0, opts.quadrature_order);
    double previous = 0.0;
    for (std::size_t k = 0; k < a_list.size(); ++k) {
        const double a = a_list[k];
        if (k > 0 && !(a > a_list[k - 1])) {
            throw DomainError("hard_to_soft_limit: a_list must be increasing");
        }
        const double sh = a * a - std::pow(2.0 * a * a, 2.0 / 3.0) * s;
        if (!(sh > 0.0)) {
            throw DomainError("hard_to_soft_limit: scaled hard-edge interval is empty");
        }
        const FredholmEval hard = detail::hard_v_det(sh, a, 1.0, opts.quadrature_order);
        std::ostringstream p;
        p << "a=" << a << " s=" << s;
        std::ostringstream d;
        d.precision(6);
        d << "hard interval (0, " << sh << ")";
        const double diff = std::abs(hard.value - soft.value);
        IdentityReport r = make_report("hard_to_soft_limit", p.str(), hard.value, soft.value, k == 0 ? 1.0 : previous,
                                       std::max(hard.error_estimate, soft.error_estimate), d.str());
        r.pass = k == 0 ? true : diff < previous;
        previous = diff;
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_string(Regime r) {
    switch (r) {
        case Regime::bulk:
            return "bulk";
        case Regime::soft:
            return "soft";
        default:
            return "hard";
    }
}

std::string to_string(Route r) {
    switch (r) {
        case Route::fredholm:
            return "fredholm";
        case Route::painleve:
            return "painleve";
        default:
            return "both";
    }
}

std::string to_string(Suite s) {
    switch (s) {
        case Suite::bulk:
            return "bulk";
        case Suite::soft:
            return "soft";
        case Suite::hard:
            return "hard";
        case Suite::xi:
            return "xi";
        case Suite::lemmas:
            return "lemmas";
        default:
            return "all";
    }
}

Regime parse_regime(const std::string& t) {
    if (t == "bulk") return Regime::bulk;
    if (t == "soft") return Regime::soft;
    if (t == "hard") return Regime::hard;
    throw DomainError("unknown regime '" + t + "' (expected bulk, soft or hard)");
}

Route parse_route(const std::string& t) {
    if (t == "fredholm") return Route::fredholm;
    if (t == "painleve") return Route::painleve;
    if (t == "both") return Route::both;
    throw DomainError("unknown route '" + t + "' (expected fredholm, painleve or both)");
}

Suite parse_suite(const std::string& t) {
    if (t == "bulk") return Suite::bulk;
    if (t == "soft") return Suite::soft;
    if (t == "hard") return Suite::hard;
    if (t == "xi") return Suite::xi;
    if (t == "lemmas") return Suite::lemmas;
    if (t == "all") return Suite::all;
    throw DomainError("unknown suite '" + t + "' (expected bulk, soft, hard, xi, lemmas or all)");
}

}  // namespace gapprob
