#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gapprob/errors.hpp"
#include "gapprob/operators.hpp"
#include "gapprob/specfun.hpp"

using namespace gapprob;
using specfun::airy_ai;
using specfun::airy_ai_prime;
using specfun::bessel_j;

namespace {

constexpr double kPi = std::numbers::pi;

void check_symmetric(const KernelSpec& K, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    for (int i = 0; i < 1000; ++i) {
        const double x = d(rng);
        const double y = i % 10 == 0 ? x + 1e-7 * d(rng) : d(rng);
        CHECK(std::abs(K(x, y) - K(y, x)) <= 1e-12 * std::max(1.0, std::abs(K(x, y))));
    }
}

// Limit of f(h) as h -> 0 for f even in h: Richardson in h^2 over h, h/2, h/4, h/8.
template <typename F>
double richardson_even(F f, double h) {
    double t[4];
    for (int i = 0; i < 4; ++i) {
        t[i] = f(h / (1 << i));
    }
    for (int k = 1; k < 4; ++k) {
        const double r = std::pow(4.0, k);
        for (int i = 3; i >= k; --i) {
            t[i] = (r * t[i] - t[i - 1]) / (r - 1);
        }
    }
    return t[3];
}

double j_half(double z) { return std::sqrt(2 / (kPi * z)) * std::sin(z); }
double j_half_prime(double z) { return std::sqrt(2 / (kPi * z)) * (std::cos(z) - std::sin(z) / (2 * z)); }

}  // namespace

TEST_CASE("parity sine kernels") {
    const KernelSpec plus = sine_kernel_pm(2.0, Parity::even);
    const KernelSpec minus = sine_kernel_pm(2.0, Parity::odd);
    CHECK(plus(0.0, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(minus(0.0, 0.0)) < 1e-15);
    CHECK(plus(0.3, 0.7) == doctest::Approx(specfun::sinc_pi(-0.4) + specfun::sinc_pi(1.0)).epsilon(1e-15));
    for (double x : {0.1, 0.9, 1.7}) {
        CHECK(plus(x, x) + minus(x, x) == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(minus(x, x) == doctest::Approx(1 - specfun::sinc_pi(2 * x)).epsilon(1e-14));
    }
    CHECK(plus.domain.lower == 0.0);
    CHECK(plus.domain.upper == 2.0);
    check_symmetric(plus, 0.0, 2.0, 1);
    check_symmetric(minus, 0.0, 2.0, 2);
    check_symmetric(sine_kernel(1.5), 0.0, 1.5, 3);
    CHECK_THROWS_AS(sine_kernel_pm(0.0, Parity::even), DomainError);
}

TEST_CASE("Airy kernel") {
    const KernelSpec K = airy_kernel(-1.0);
    CHECK(K(0.0, 0.0) == doctest::Approx(airy_ai_prime(0.0) * airy_ai_prime(0.0)).epsilon(1e-14));
    const double off = (airy_ai(0.0) * airy_ai_prime(1.0) - airy_ai(1.0) * airy_ai_prime(0.0)) / (-1.0);
    CHECK(K(0.0, 1.0) == doctest::Approx(off).epsilon(1e-14));
    CHECK(K(1.2, 3.4) == K(3.4, 1.2));
    CHECK(std::isinf(K.domain.upper));
    CHECK(K.domain.lower == -1.0);
    check_symmetric(K, -3.0, 6.0, 4);
    for (double x : {-2.0, 0.5, 3.0}) {
        const double limit = richardson_even([&](double h) { return K(x - h, x + h); }, 0.04);
        CHECK(std::abs(K(x, x) - limit) < 1e-9);
        // Near-diagonal branch against the quotient formula, whose cancellation is still mild here.
        const double y = x + 5e-4;
        const double quotient = (airy_ai(x) * airy_ai_prime(y) - airy_ai(y) * airy_ai_prime(x)) / (x - y);
        CHECK(std::abs(K(x, y) - quotient) < 1e-10);
    }
}

TEST_CASE("soft-edge V") {
    CHECK(v_soft(0.0)(0.0, 0.0) == airy_ai(0.0));
    CHECK(v_soft(-2.0)(0.5, 1.0) == airy_ai(-0.5));
    check_symmetric(v_soft(-2.0), 0.0, 20.0, 5);
    for (double x : {0.0, 1.0, 7.0}) {
        const double v = v_soft(100.0)(x, 2 * x);
        CHECK(v >= 0.0);
        CHECK(v < 1e-30);
    }
}

TEST_CASE("Bessel kernel against the half-integer closed form") {
    const double x = 0.3;
    const double y = 0.8;
    const double sx = std::sqrt(x);
    const double sy = std::sqrt(y);
    const double ref = (j_half(sx) * sy * j_half_prime(sy) - sx * j_half_prime(sx) * j_half(sy)) / (2 * (x - y));
    CHECK(std::abs(bessel_kernel(0.5, 1.0)(x, y) - ref) < 1e-12);
}

TEST_CASE("Bessel kernel diagonal matches off-diagonal extrapolation") {
    for (double a : {0.0, 0.5, 2.0}) {
        const KernelSpec K = bessel_kernel(a, 4.0);
        for (double x : {1.0, 2.5}) {
            const double limit = richardson_even([&](double h) { return K(x - h, x + h); }, 0.08);
            CHECK(std::abs(K(x, x) - limit) < 1e-9);
        }
        check_symmetric(K, 0.0, 4.0, 6);
    }
    CHECK_THROWS_AS(bessel_kernel(-1.0, 1.0), DomainError);
}

TEST_CASE("hard-edge V") {
    CHECK(v_hard(4.0, 0.0)(0.0, 0.37) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v_hard(4.0, 1.0)(0.0, 0.5) == 0.0);
    CHECK(v_hard(4.0, 1.0)(0.5, 0.0) == 0.0);
    // s = 4, a = 1/2, x = y = 1/4: (sqrt s / 2) J_{1/2}(1/2).
    CHECK(std::abs(v_hard(4.0, 0.5)(0.25, 0.25) - j_half(0.5)) < 1e-14);
    check_symmetric(v_hard(4.0, 0.5), 0.0, 1.0, 7);
    CHECK_THROWS_AS(v_hard(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(v_hard(1.0, -1.5), DomainError);
}

TEST_CASE("composed square of hard-edge V against direct quadrature") {
    const double s = 1.0;
    const KernelSpec V = v_hard(s, 0.0);
    const KernelSpec K = composed_square(V, hard_edge_rule(0.0, 1.0, 64));
    // Independent rule: 40-point Gauss on (0, 1) in u.
    const MappedRule ref_rule = map_finite(gauss_legendre(40), 0.0, 1.0);
    for (double y : {0.5, 0.1, 0.9}) {
        const double x = 0.5;
        const double direct = s / 4 * integrate(ref_rule, [&](double u) {
            return bessel_j(0.0, std::sqrt(s * x * u)) * bessel_j(0.0, std::sqrt(s * y * u));
        });
        CHECK(std::abs(K(x, y) - direct) < 1e-10);
    }
    check_symmetric(K, 0.0, 1.0, 8);
}

TEST_CASE("composed square converges under rule doubling") {
    const KernelSpec V = v_hard(4.0, 0.5);
    const MappedRule ref_rule = map_finite(gauss_legendre(60), 0.0, 1.0);
    const double x = 0.3;
    const double y = 0.7;
    const double direct = integrate(ref_rule, [&](double t) { return V(x, t) * V(t, y); });
    double prev = INFINITY;
    for (int n : {4, 8, 16}) {
        const double err = std::abs(composed_square(V, map_finite(gauss_legendre(n), 0.0, 1.0))(x, y) - direct);
        CHECK((err < 0.5 * prev || err < 1e-14));
        prev = err;
    }
}

TEST_CASE("composed square of soft-edge V against the Airy square integral") {
    const KernelSpec K = composed_square(v_soft(0.0), map_semi_infinite(gauss_legendre(96), 0.0, 2.0));
    // int_0^inf Ai(t)^2 dt = Ai'(0)^2.
    CHECK(std::abs(K(0.0, 0.0) - airy_ai_prime(0.0) * airy_ai_prime(0.0)) < 1e-8);
    // int_x^inf Ai^2 = Ai'(x)^2 - x Ai(x)^2, with the shift x = 1.5.
    const KernelSpec Ks = composed_square(v_soft(1.5), map_semi_infinite(gauss_legendre(96), 0.0, 2.0));
    CHECK(std::abs(Ks(0.0, 0.0) - (airy_ai_prime(1.5) * airy_ai_prime(1.5) - 1.5 * airy_ai(1.5) * airy_ai(1.5))) < 1e-10);
    // The squared kernel coincides with the Airy kernel.
    const KernelSpec A = airy_kernel(0.0);
    CHECK(std::abs(K(0.4, 1.3) - A(0.4, 1.3)) < 1e-9);
}

TEST_CASE("zero kernel composes to zero") {
    KernelSpec Z;
    Z.name = "zero";
    Z.evaluator = [](double, double) { return 0.0; };
    Z.domain = {0.0, 1.0};
    const KernelSpec K = composed_square(Z, map_finite(gauss_legendre(8), 0.0, 1.0));
    CHECK(K(0.2, 0.9) == 0.0);
}

TEST_CASE("hard-edge rank-one term") {
    const RankOneTerm t = hard_rank_one(1.0, 0.0, 1.0);
    CHECK(t.left(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    const double y = 1e4;
    CHECK(std::abs(t.right(y)) < 0.05 / std::sqrt(y));
    const RankOneTerm t0 = hard_rank_one(1.0, 0.0, 0.0);
    for (double yy : {0.01, 0.5, 3.0}) {
        CHECK(t0.right(yy) == doctest::Approx(1 / (2 * std::sqrt(yy))).epsilon(1e-15));
        CHECK(t0.left(yy) == 0.0);
    }
    const RankOneTerm th = hard_rank_one(2.0, 1.0, 0.25);
    CHECK(th.left(0.64) == doctest::Approx(0.5 * bessel_j(1.0, 0.8)).epsilon(1e-14));
}

TEST_CASE("Bessel integral against J_1 antiderivative and the unit mass") {
    for (double X : {0.3, 2.0, 11.0, 60.0}) {
        CHECK(std::abs(bessel_j_integral(1.0, X) - (1 - bessel_j(0.0, X))) < 1e-12);
    }
    // int_0^X J_{1/2} = sqrt(2/pi) int_0^X sin t / sqrt t, checked against a sqrt-mapped rule.
    const MappedRule r = map_clustered(gauss_legendre(60), 0.0, 3.0, 2);
    const double ref = integrate(r, [](double t) { return j_half(t); });
    CHECK(std::abs(bessel_j_integral(0.5, 3.0) - ref) < 1e-12);
    CHECK(std::abs(bessel_j_integral(0.0, 2000.0) - 1.0) < 0.03);
}

TEST_CASE("soft-edge rank-one term") {
    const RankOneTerm t = soft_rank_one(0.0, 1.0);
    CHECK(std::abs(t.right(50.0) - 1.0) < 1e-12);
    CHECK(std::abs(t.right(0.0) - 2.0 / 3.0) < 1e-8);
    CHECK(t.left(0.0) == airy_ai(0.0));
    const RankOneTerm t0 = soft_rank_one(0.0, 0.0);
    CHECK(t0.right(-3.0) == 1.0);
    CHECK(std::abs(airy_tail_integral(0.0) - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("hard-edge clustering power") {
    CHECK(hard_edge_power(0.0) == 2);
    CHECK(hard_edge_power(2.0) == 2);
    CHECK(hard_edge_power(0.5) == 4);
    const MappedRule r = hard_edge_rule(0.5, 3.0, 10);
    CHECK(r.order() == 10);
    CHECK(r.upper() == 3.0);
}
