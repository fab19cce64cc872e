#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "gapprob/ensembles.hpp"
#include "gapprob/errors.hpp"
#include "gapprob/quadrature.hpp"

using namespace gapprob;

namespace {

constexpr double kPi = std::numbers::pi;

// Two eigenvalues with density |x - y|^beta exp(-c (x^2 + y^2)): in u = (x - y)/sqrt 2 the
// larger one has mean E|u| / sqrt 2, with u distributed as |u|^beta exp(-c u^2).
double two_point_mean_max(double beta, double c) {
    const auto& g = cached_gauss_legendre(200);
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index k = 0; k < g.order(); ++k) {
        const double u = 6.0 * (g.nodes[k] + 1.0);
        const double w = 6.0 * g.weights[k] * std::exp(-c * u * u);
        num += w * std::pow(u, beta + 1);
        den += w * std::pow(u, beta);
    }
    return num / den / std::sqrt(2.0);
}

// Smallest of two Laguerre eigenvalues, density |x - y|^beta (x y)^a exp(-beta (x + y) / 2), a integer.
double two_point_laguerre_mean_min(double beta, double a) {
    const auto& g = cached_gauss_legendre(160);
    const double L = 60.0 / beta;
    double num = 0.0;
    double den = 0.0;
    // split at the diagonal so each piece is smooth
    for (Eigen::Index i = 0; i < g.order(); ++i) {
        const double x = 0.5 * L * (g.nodes[i] + 1.0);
        const double wx = 0.5 * L * g.weights[i];
        for (Eigen::Index j = 0; j < g.order(); ++j) {
            const double y = x + 0.5 * L * (g.nodes[j] + 1.0);
            const double wy = 0.5 * L * g.weights[j];
            const double f = std::pow(y - x, beta) * std::pow(x * y, a) * std::exp(-0.5 * beta * (x + y));
            num += wx * wy * f * x;
            den += wx * wy * f;
        }
    }
    return num / den;
}

double semicircle_cdf(double x) { return 0.5 + (x * std::sqrt(1 - x * x) + std::asin(x)) / kPi; }

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

template <class F>
Moments sample_moments(long n, F&& f) {
    double s1 = 0.0;
    double s2 = 0.0;
    for (long k = 0; k < n; ++k) {
        const double v = f(static_cast<std::uint64_t>(k));
        s1 += v;
        s2 += v * v;
    }
    Moments m;
    m.mean = s1 / n;
    m.sd = std::sqrt(std::max(0.0, s2 / n - m.mean * m.mean));
    return m;
}

}  // namespace

TEST_CASE("two-eigenvalue Gaussian ensembles: mean of the largest eigenvalue") {
    const long n = 100000;
    struct Case {
        int beta;
        int N;
        double c;
    };
    for (Case cs : {Case{1, 2, 0.5}, Case{2, 2, 1.0}, Case{4, 4, 1.0}}) {
        EnsembleSpec spec;
        spec.beta = cs.beta;
        spec.N = cs.N;
        spec.seed = 7;
        const Moments m = sample_moments(n, [&](std::uint64_t k) { return sample_eigenvalues(spec, k).back(); });
        const double ref = two_point_mean_max(cs.beta, cs.c);
        INFO("beta=" << cs.beta << " mean=" << m.mean << " ref=" << ref);
        CHECK(std::abs(m.mean - ref) < 3 * m.sd / std::sqrt(double(n)));
    }
    // closed form at beta = 2 as a check on the quadrature
    CHECK(std::abs(two_point_mean_max(2, 1.0) - std::sqrt(2 / kPi)) < 1e-12);
}

TEST_CASE("two-eigenvalue Laguerre ensembles: mean of the smallest eigenvalue") {
    const long n = 100000;
    for (int beta : {1, 2}) {
        for (double a : {0.0, 1.0}) {
            EnsembleSpec spec;
            spec.family = EnsembleFamily::laguerre;
            spec.beta = beta;
            spec.N = 2;
            spec.a = a;
            spec.seed = 11;
            const Moments m = sample_moments(n, [&](std::uint64_t k) { return sample_eigenvalues(spec, k).front(); });
            const double ref = two_point_laguerre_mean_min(beta, a);
            INFO("beta=" << beta << " a=" << a << " mean=" << m.mean << " ref=" << ref);
            CHECK(std::abs(m.mean - ref) < 3 * m.sd / std::sqrt(double(n)));
        }
    }
}

TEST_CASE("GUE spectrum follows the semicircle") {
    EnsembleSpec spec;
    spec.N = 500;
    spec.seed = 3;
    const int bins = 40;
    std::vector<double> counts(bins, 0.0);
    long total = 0;
    for (std::uint64_t k = 0; k < 200; ++k) {
        for (double x : sample_eigenvalues(spec, k)) {
            const double y = x / std::sqrt(2.0 * spec.N);
            const int b = std::clamp(static_cast<int>((y + 1) / 2 * bins), 0, bins - 1);
            counts[b] += 1;
            ++total;
        }
    }
    double tv = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = -1 + 2.0 * b / bins;
        const double hi = -1 + 2.0 * (b + 1) / bins;
        tv += std::abs(counts[b] / total - (semicircle_cdf(hi) - semicircle_cdf(lo)));
    }
    CHECK(0.5 * tv < 0.05);
}

TEST_CASE("Laguerre eigenvalues are positive and sorted") {
    for (int beta : {1, 2, 4}) {
        for (double a : {-0.5, 0.0, 2.5}) {
            EnsembleSpec spec;
            spec.family = EnsembleFamily::laguerre;
            spec.beta = beta;
            spec.N = 20;
            spec.a = a;
            for (std::uint64_t k = 0; k < 20; ++k) {
                const auto ev = sample_eigenvalues(spec, k);
                REQUIRE(static_cast<int>(ev.size()) == sampled_size(spec));
                CHECK(ev.front() > 0.0);
                CHECK(std::is_sorted(ev.begin(), ev.end()));
            }
        }
    }
}

TEST_CASE("sampling is reproducible and independent of the thread count") {
    EnsembleSpec spec;
    spec.beta = 1;
    spec.N = 50;
    spec.seed = 42;
    CHECK(sample_eigenvalues(spec, 5) == sample_eigenvalues(spec, 5));
    CHECK(sample_eigenvalues(spec, 5) != sample_eigenvalues(spec, 6));
    EnsembleSpec other = spec;
    other.seed = 43;
    CHECK(sample_eigenvalues(spec, 5) != sample_eigenvalues(other, 5));

    setenv("GAPPROB_THREADS", "1", 1);
    const EmpiricalGap one = empirical_gap_soft(spec, -1.0, 2000);
    setenv("GAPPROB_THREADS", "3", 1);
    CHECK(worker_count() == 3);
    const EmpiricalGap three = empirical_gap_soft(spec, -1.0, 2000);
    unsetenv("GAPPROB_THREADS");
    CHECK(one.estimate == three.estimate);
    CHECK(!rng_algorithm().empty());
}

TEST_CASE("empirical gaps: confidence interval and trivial tails") {
    EnsembleSpec spec;
    spec.N = 40;
    const EmpiricalGap g = empirical_gap_soft(spec, -1.0, 100);
    CHECK(g.trials == 100);
    CHECK(g.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(g.estimate * (1 - g.estimate) / 100)));
    const EmpiricalGap top = empirical_gap_soft(spec, 5.0, 2000);
    CHECK(1 - top.estimate <= top.ci_halfwidth + 1.0 / 2000);
    spec.family = EnsembleFamily::laguerre;
    const EmpiricalGap tiny = empirical_gap_hard(spec, 1e-6, 2000);
    CHECK(1 - tiny.estimate <= tiny.ci_halfwidth + 1.0 / 2000);
}

TEST_CASE("ensemble domain errors") {
    EnsembleSpec spec;
    spec.beta = 3;
    CHECK_THROWS_AS(sample_eigenvalues(spec), DomainError);
    spec.beta = 4;
    spec.N = 5;
    CHECK_THROWS_AS(sample_eigenvalues(spec), DomainError);
    spec.N = 1;
    CHECK_THROWS_AS(sample_eigenvalues(spec), DomainError);
    spec.beta = 2;
    spec.N = 10;
    CHECK_THROWS_AS(empirical_gap_hard(spec, 1.0, 10), DomainError);
    CHECK_THROWS_AS(empirical_gap_soft(spec, 1.0, 0), DomainError);
    spec.family = EnsembleFamily::laguerre;
    spec.a = -1.0;
    CHECK_THROWS_AS(sample_eigenvalues(spec), DomainError);
}
