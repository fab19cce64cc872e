#include <doctest.h>

#include <cmath>

#include "gapprob/errors.hpp"
#include "gapprob/fredholm.hpp"
#include "gapprob/operators.hpp"
#include "gapprob/specfun.hpp"

using namespace gapprob;

namespace {

KernelSpec rank_one_kernel(std::function<double(double)> f, double lo, double hi) {
    KernelSpec K;
    K.name = "rank-one";
    K.evaluator = [f](double x, double y) { return f(x) * f(y); };
    K.domain = {lo, hi};
    return K;
}

double fx(double x) { return std::exp(-x) * (1 + x); }

}  // namespace

TEST_CASE("discretize: zero and rank-one kernels") {
    const MappedRule r = map_finite(gauss_legendre(12), 0.0, 2.0);
    KernelSpec Z = rank_one_kernel([](double) { return 0.0; }, 0.0, 2.0);
    CHECK(discretize(Z, r).matrix.isZero(0.0));
    const DiscreteOperator D = discretize(rank_one_kernel(fx, 0.0, 2.0), r);
    Eigen::VectorXd v(r.order());
    for (int i = 0; i < r.order(); ++i) {
        v(i) = std::sqrt(r.weights(i)) * fx(r.nodes(i));
    }
    CHECK((D.matrix - v * v.transpose()).norm() < 1e-15);
    CHECK((D.matrix - D.matrix.transpose()).norm() == 0.0);
}

TEST_CASE("discretize rejects a rule outside the kernel domain") {
    CHECK_THROWS_AS(discretize(sine_kernel(1.0), map_finite(gauss_legendre(8), 0.0, 2.0)), DomainError);
}

TEST_CASE("parity traces add up to twice the interval") {
    const double s = 1.7;
    const MappedRule r = map_finite(gauss_legendre(40), 0.0, s);
    const DiscreteOperator P = discretize(sine_kernel_pm(s, Parity::even), r);
    const DiscreteOperator M = discretize(sine_kernel_pm(s, Parity::odd), r);
    CHECK(std::abs(P.matrix.trace() + M.matrix.trace() - 2 * s) < 1e-10);
}

TEST_CASE("det_id_minus basic cases") {
    const MappedRule r = map_finite(gauss_legendre(16), 0.0, 1.0);
    const DiscreteOperator D = discretize(rank_one_kernel(fx, 0.0, 1.0), r);
    CHECK(det_id_minus(0.0, D).value == 1.0);
    const double norm2 = integrate(r, [](double x) { return fx(x) * fx(x); });
    for (double z : {0.3, -0.7, 1.0}) {
        CHECK(std::abs(det_id_minus(z, D).value - (1 - z * norm2)) < 1e-13);
    }
}

TEST_CASE("small-interval sine determinant follows the trace expansion") {
    const double s = 1e-3;
    const FredholmEval e = det_id_minus(1.0, discretize(sine_kernel(s), map_finite(gauss_legendre(16), 0.0, s)));
    CHECK(std::abs(e.value - (1 - s)) < 1e-9);
    CHECK(e.error_estimate >= 0.0);
}

TEST_CASE("Airy determinant is increasing in s and error estimates shrink with order") {
    double prev = 0.0;
    for (double s : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0}) {
        const FredholmEval e = det_id_minus(1.0, discretize(airy_kernel(s), map_semi_infinite(gauss_legendre(64), s, 2.0)));
        CHECK(e.value > prev);
        CHECK(e.value <= 1.0);
        prev = e.value;
    }
    const KernelSpec K = bessel_kernel(1.0, 4.0);
    const double e16 = det_id_minus(1.0, discretize(K, hard_edge_rule(1.0, 4.0, 8))).error_estimate;
    const double e32 = det_id_minus(1.0, discretize(K, hard_edge_rule(1.0, 4.0, 16))).error_estimate;
    CHECK(e32 < e16);
}

TEST_CASE("discrete factorization det(I - zeta D^2) = det(I - sqrt(zeta) D) det(I + sqrt(zeta) D)") {
    const DiscreteOperator D = discretize(v_soft(-2.0), map_semi_infinite(gauss_legendre(64), 0.0, 2.0));
    const Eigen::MatrixXd D2 = D.matrix * D.matrix;
    for (double zeta : {0.25, 0.5, 1.0}) {
        const double r = std::sqrt(zeta);
        const double lhs = det_identity_minus(zeta, D2);
        const double rhs = det_identity_minus(r, D.matrix) * det_identity_minus(-r, D.matrix);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("bracket_delta against Sherman-Morrison") {
    const MappedRule r = map_finite(gauss_legendre(20), 0.0, 1.0);
    const KernelSpec V = rank_one_kernel(fx, 0.0, 1.0);
    auto h = [](double x) { return 1.0 + x * x; };
    CHECK(bracket_delta(0.4, 0.0, V, r, h).value == h(0.4));
    const double ff = integrate(r, [](double x) { return fx(x) * fx(x); });
    const double fh = integrate(r, [&](double x) { return fx(x) * h(x); });
    for (double z : {0.5, 2.0, -0.3}) {
        for (double p : {0.0, 0.4, 1.0}) {
            const double ref = h(p) - z * fx(p) * fh / (1 + z * ff);
            CHECK(std::abs(bracket_delta(p, z, V, r, h).value - ref) < 1e-12);
        }
    }
    CHECK_THROWS_AS(bracket_delta(0.5, -1.0 / ff, V, r, h), SolverError);
    CHECK_THROWS_AS(bracket_delta(1.5, 0.5, V, r, h), DomainError);
}

TEST_CASE("hard-edge bracket reproduces the determinant ratio") {
    const MappedRule r = hard_edge_rule(0.0, 1.0, 64);
    const KernelSpec V = v_hard(1.0, 0.0);
    const DiscreteOperator D = discretize(V, r);
    const double ratio = det_id_minus(1.0, D).value / det_id_minus(-1.0, D).value;
    const BracketEval b = bracket_delta(1.0, 1.0, V, r, [](double x) { return 1 / std::sqrt(x); });
    CHECK(std::abs(b.value - ratio) < 1e-8);
    CHECK_FALSE(b.degraded());
}

TEST_CASE("det_with_rank_one") {
    const MappedRule r = map_finite(gauss_legendre(24), 0.0, 1.0);
    const DiscreteOperator D = discretize(bessel_kernel(1.0, 1.0), r);
    RankOneTerm zero{[](double) { return 0.0; }, [](double y) { return y; }};
    CHECK(std::abs(det_with_rank_one(0.7, D, zero).value - det_id_minus(0.7, D).value) < 1e-15);
    RankOneTerm t{[](double x) { return std::cos(x); }, [](double y) { return 1 + y; }};
    const double pure = 1 - integrate(r, [](double x) { return std::cos(x) * (1 + x); });
    CHECK(std::abs(det_with_rank_one(0.0, D, t).value - pure) < 1e-14);
}

TEST_CASE("hard-edge rank-one update squares det(I - V)") {
    const double s = 1.0;
    const double a = 1.0;
    const DiscreteOperator K = discretize(bessel_kernel(a, s), hard_edge_rule(a, s, 64));
    const double lhs = det_with_rank_one(1.0, K, hard_rank_one(s, a, 1.0)).value;
    const double v = det_id_minus(1.0, discretize(v_hard(s, a), hard_edge_rule(a, 1.0, 64))).value;
    CHECK(std::abs(lhs - v * v) < 1e-8);
}

TEST_CASE("spectrum") {
    const MappedRule r = map_finite(gauss_legendre(10), 0.0, 1.0);
    const auto zero = spectrum(discretize(rank_one_kernel([](double) { return 0.0; }, 0.0, 1.0), r));
    for (double e : zero) {
        CHECK(e == 0.0);
    }
    const auto one = spectrum(discretize(rank_one_kernel(fx, 0.0, 1.0), r));
    const double norm2 = integrate(r, [](double x) { return fx(x) * fx(x); });
    CHECK(std::abs(one.front() - norm2) < 1e-12);
    for (std::size_t i = 1; i < one.size(); ++i) {
        CHECK(std::abs(one[i]) < 1e-12);
    }
    const auto soft = spectrum(discretize(v_soft(-2.0), map_semi_infinite(gauss_legendre(96), 0.0, 2.0)));
    CHECK(soft.front() > 1e-3);
    CHECK(soft.back() < -1e-6);
    for (std::size_t i = 1; i < soft.size(); ++i) {
        CHECK(soft[i] <= soft[i - 1]);
    }
}

TEST_CASE("hard-edge V scaling identity 2s dV/ds = V + 2x dV/dx") {
    CHECK(verify_lemma2_scaling(1.0, 0.0).pass);
    CHECK(verify_lemma2_scaling(1.0, 0.0).abs_diff < 1e-6);
    CHECK(verify_lemma2_scaling(4.0, 0.5).abs_diff < 1e-6);
    CHECK(verify_lemma2_scaling(0.5, 2.0).abs_diff < 1e-5);
}

TEST_CASE("hard-edge trace identity") {
    const IdentityReport r0 = verify_lemma3_trace(1.0, 0.0);
    CHECK(r0.abs_diff < 1e-5);
    CHECK(r0.rhs == doctest::Approx(0.5 * specfun::bessel_j(0.0, 1.0)).epsilon(1e-14));
    CHECK(verify_lemma3_trace(0.25, 2.0).abs_diff < 1e-5);
    for (double a : {0.5, 1.0, 2.0}) {
        CHECK(verify_lemma3_trace(1e-4, a).abs_diff < 1e-7);
    }
}
