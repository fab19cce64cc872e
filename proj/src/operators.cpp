#include "gapprob/operators.hpp"

#include <cmath>
#include <limits>

#include "gapprob/errors.hpp"
#include "gapprob/specfun.hpp"

namespace gapprob {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Below this separation the divided-difference formulas lose digits to cancellation,
// so the kernels switch to their integral representations.
constexpr double kNearDiagonal = 1e-3;

bool near_diagonal(double x, double y) {
    return std::abs(x - y) < kNearDiagonal * std::max({1.0, std::abs(x), std::abs(y)});
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw DomainError(std::string(what) + ": parameter must be finite");
    }
}

// sqrt(x) J_a'(sqrt(x)) with the x -> 0 limit (a J_a ~ a (sqrt x)^a / ...) handled.
double scaled_bessel_prime(double a, double x) {
    if (x == 0.0) {
        return a == 0.0 ? 0.0 : (a > 0.0 ? 0.0 : -kInf);
    }
    const double r = std::sqrt(x);
    return r * specfun::bessel_j_prime(a, r);
}

double airy_soft_integral_form(double x, double y) {
    static const MappedRule rule = remap(SemiInfiniteMap{0.0, 2.0}, 96);
    return integrate(rule, [&](double t) { return specfun::airy_ai(x + t) * specfun::airy_ai(y + t); });
}

double bessel_integral_form(double a, double x, double y) {
    // 1/4 int_0^1 J_a(sqrt(xt)) J_a(sqrt(yt)) dt with t = u^2.
    static const MappedRule rule = remap(FiniteMap{0.0, 1.0}, 64);
    const double rx = std::sqrt(x);
    const double ry = std::sqrt(y);
    return 0.5 * integrate(rule, [&](double u) {
        return u * specfun::bessel_j(a, u * rx) * specfun::bessel_j(a, u * ry);
    });
}

}  // namespace

KernelSpec sine_kernel(double s) {
    require_finite(s, "sine_kernel");
    if (!(s > 0.0)) {
        throw DomainError("sine_kernel: s must be positive");
    }
    KernelSpec k;
    k.name = "sine";
    k.evaluator = [](double x, double y) { return specfun::sinc_pi(x - y); };
    k.domain = {0.0, s};
    k.params.s = s;
    return k;
}

KernelSpec sine_kernel_pm(double s, Parity parity) {
    require_finite(s, "sine_kernel_pm");
    if (!(s > 0.0)) {
        throw DomainError("sine_kernel_pm: s must be positive");
    }
    KernelSpec k;
    const double sign = parity == Parity::even ? 1.0 : -1.0;
    k.name = parity == Parity::even ? "sine_even" : "sine_odd";
    k.evaluator = [sign](double x, double y) {
        return specfun::sinc_pi(x - y) + sign * specfun::sinc_pi(x + y);
    };
    k.domain = {0.0, s};
    k.params.s = s;
    return k;
}

KernelSpec airy_kernel(double s) {
    require_finite(s, "airy_kernel");
    KernelSpec k;
    k.name = "airy";
    k.evaluator = [](double x, double y) {
        if (x == y) {
            const double ai = specfun::airy_ai(x);
            const double aip = specfun::airy_ai_prime(x);
            return aip * aip - x * ai * ai;
        }
        if (near_diagonal(x, y)) {
            return airy_soft_integral_form(x, y);
        }
        return (specfun::airy_ai(x) * specfun::airy_ai_prime(y) -
                specfun::airy_ai(y) * specfun::airy_ai_prime(x)) /
               (x - y);
    };
    k.domain = {s, kInf};
    k.params.s = s;
    return k;
}

KernelSpec v_soft(double s) {
    require_finite(s, "v_soft");
    KernelSpec k;
    k.name = "v_soft";
    k.evaluator = [s](double x, double u) { return specfun::airy_ai(x + u + s); };
    k.domain = {0.0, kInf};
    k.params.s = s;
    return k;
}

KernelSpec bessel_kernel(double a, double s) {
    require_finite(a, "bessel_kernel");
    require_finite(s, "bessel_kernel");
    if (!(a > -1.0)) {
        throw DomainError("bessel_kernel: a must exceed -1");
    }
    if (!(s > 0.0)) {
        throw DomainError("bessel_kernel: s must be positive");
    }
    KernelSpec k;
    k.name = "bessel";
    k.evaluator = [a](double x, double y) {
        if (x == y) {
            if (x == 0.0) {
                // K(0,0) = 1/4 for a = 0, 0 for a > 0, unbounded below.
                return a == 0.0 ? 0.25 : (a > 0.0 ? 0.0 : kInf);
            }
            const double r = std::sqrt(x);
            const double j = specfun::bessel_j(a, r);
            const double jp = specfun::bessel_j_prime(a, r);
            return 0.25 * (jp * jp + (1.0 - a * a / x) * j * j);
        }
        if (near_diagonal(x, y)) {
            return bessel_integral_form(a, x, y);
        }
        const double jx = x == 0.0 ? specfun::bessel_j(a, 0.0) : specfun::bessel_j(a, std::sqrt(x));
        const double jy = y == 0.0 ? specfun::bessel_j(a, 0.0) : specfun::bessel_j(a, std::sqrt(y));
        return (jx * scaled_bessel_prime(a, y) - scaled_bessel_prime(a, x) * jy) / (2.0 * (x - y));
    };
    k.domain = {0.0, s};
    k.params.s = s;
    k.params.a = a;
    return k;
}

KernelSpec v_hard(double s, double a) {
    require_finite(s, "v_hard");
    require_finite(a, "v_hard");
    if (!(s > 0.0)) {
        throw DomainError("v_hard: s must be positive");
    }
    if (!(a > -1.0)) {
        throw DomainError("v_hard: a must exceed -1");
    }
    KernelSpec k;
    k.name = "v_hard";
    const double scale = 0.5 * std::sqrt(s);
    k.evaluator = [s, a, scale](double x, double y) {
        return scale * specfun::bessel_j(a, std::sqrt(s * x * y));
    };
    k.domain = {0.0, 1.0};
    k.params.s = s;
    k.params.a = a;
    return k;
}

KernelSpec composed_square(const KernelSpec& V, const MappedRule& rule) {
    auto comp = std::make_shared<KernelComposition>(KernelComposition{V, rule});
    KernelSpec k;
    k.name = V.name + "_squared";
    k.evaluator = [comp](double x, double y) {
        const auto& r = comp->inner;
        double acc = 0.0;
        for (int i = 0; i < r.order(); ++i) {
            const double t = r.nodes(i);
            acc += r.weights(i) * comp->factor(x, t) * comp->factor(t, y);
        }
        return acc;
    };
    k.domain = V.domain;
    k.params = V.params;
    k.composition = comp;
    return k;
}

KernelSpec with_inner_order(const KernelSpec& K, int n) {
    if (!K.composition) {
        return K;
    }
    return composed_square(K.composition->factor, remap(K.composition->inner.map, n));
}

int hard_edge_power(double a) { return a == std::round(a) ? 2 : 4; }

MappedRule hard_edge_rule(double a, double upper, int n) {
    return remap(ClusteredMap{0.0, upper, hard_edge_power(a)}, n);
}

double bessel_j_integral(double a, double X) {
    if (!(X >= 0.0) || !std::isfinite(X)) {
        throw DomainError("bessel_j_integral: X must be finite and non-negative");
    }
    if (X == 0.0) {
        return 0.0;
    }
    constexpr double panel = 2.0;
    constexpr int nodes = 32;
    const double first = std::min(X, panel);
    // The first panel carries the t^a behaviour at the origin.
    double acc = integrate(remap(ClusteredMap{0.0, first, 2}, nodes),
                           [a](double t) { return specfun::bessel_j(a, t); });
    for (double lo = first; lo < X; lo += panel) {
        const double hi = std::min(X, lo + panel);
        if (hi <= lo) {
            break;
        }
        acc += integrate(remap(FiniteMap{lo, hi}, nodes), [a](double t) { return specfun::bessel_j(a, t); });
    }
    return acc;
}

double airy_tail_integral(double y) {
    require_finite(y, "airy_tail_integral");
    return integrate(remap(SemiInfiniteMap{y, 2.0}, 96), [](double t) { return specfun::airy_ai(t); });
}

RankOneTerm hard_rank_one(double s, double a, double xi) {
    require_finite(s, "hard_rank_one");
    if (!(s > 0.0) || !(a > -1.0) || !(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("hard_rank_one: require s > 0, a > -1, 0 <= xi <= 1");
    }
    const double rxi = std::sqrt(xi);
    RankOneTerm t;
    t.left = [a, rxi](double x) { return rxi * specfun::bessel_j(a, std::sqrt(x)); };
    t.right = [a, rxi](double y) {
        const double r = std::sqrt(y);
        return (1.0 - rxi * bessel_j_integral(a, r)) / (2.0 * r);
    };
    return t;
}

RankOneTerm soft_rank_one(double s, double xi) {
    require_finite(s, "soft_rank_one");
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw DomainError("soft_rank_one: require 0 <= xi <= 1");
    }
    const double rxi = std::sqrt(xi);
    RankOneTerm t;
    t.left = [rxi](double x) { return rxi * specfun::airy_ai(x); };
    t.right = [rxi](double y) { return 1.0 - rxi * airy_tail_integral(y); };
    return t;
}

}  // namespace gapprob
