#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>

#include "gapprob/quadrature.hpp"

namespace gapprob {

/// Integration domain of a kernel. upper is +inf for semi-infinite kernels.
struct KernelDomain {
    double lower = 0.0;
    double upper = 1.0;

    bool semi_infinite() const { return upper == std::numeric_limits<double>::infinity(); }
};

/// s is the interval/edge parameter; a is present only for Bessel-type kernels.
/// xi is bookkeeping only: the Fredholm layer applies it as z = xi or z = sqrt(xi).
struct KernelParams {
    double s = 0.0;
    std::optional<double> a;
    double xi = 1.0;
};

struct KernelComposition;

/// Symmetric kernel with a pointwise evaluator.
struct KernelSpec {
    std::string name;
    std::function<double(double, double)> evaluator;
    KernelDomain domain;
    KernelParams params;
    /// Set when the kernel is V * V over an inner rule; lets discretize() use a
    /// matrix product instead of n^3 pointwise evaluations.
    std::shared_ptr<const KernelComposition> composition;

    double operator()(double x, double y) const { return evaluator(x, y); }
};

struct KernelComposition {
    KernelSpec factor;
    MappedRule inner;
};

/// Kernel left(x) * right(y).
struct RankOneTerm {
    std::function<double(double)> left;
    std::function<double(double)> right;
};

enum class Parity { even, odd };

/// Unfolded sine kernel sin(pi(x-y))/(pi(x-y)) on (0, s).
KernelSpec sine_kernel(double s);

/// Sine kernel restricted to even (odd) functions on (-s, s), folded onto (0, s):
/// sinc(x-y) + sinc(x+y) (resp. minus).
KernelSpec sine_kernel_pm(double s, Parity parity);

/// Airy kernel on (s, inf).
KernelSpec airy_kernel(double s);

/// Ai(x + u + s) on (0, inf).
KernelSpec v_soft(double s);

/// Bessel kernel on (0, s):
/// [J_a(sqrt x) sqrt y J_a'(sqrt y) - sqrt x J_a'(sqrt x) J_a(sqrt y)] / (2 (x - y)).
KernelSpec bessel_kernel(double a, double s);

/// (sqrt(s)/2) J_a(sqrt(s x y)) on (0, 1).
KernelSpec v_hard(double s, double a);

/// Kernel of V^2 with the inner integral discretized by `rule`.
KernelSpec composed_square(const KernelSpec& V, const MappedRule& rule);

/// Rebuild a kernel so that any inner quadrature uses order n (no-op for plain kernels).
KernelSpec with_inner_order(const KernelSpec& K, int n);

/// sqrt(xi) J_a(sqrt x) tensor (1/(2 sqrt y)) (1 - sqrt(xi) int_0^{sqrt y} J_a).
RankOneTerm hard_rank_one(double s, double a, double xi);

/// sqrt(xi) Ai(x) tensor (1 - sqrt(xi) int_y^inf Ai).
RankOneTerm soft_rank_one(double s, double xi);

/// Clustering power for hard-edge rules on (0, b): 2 for integer a, 4 otherwise, so that
/// the x^(a/2) and x^(-1/2) endpoint behaviour becomes polynomial in the rule variable.
int hard_edge_power(double a);

/// n-point clustered rule on (0, upper) for hard-edge kernels with Bessel order a.
MappedRule hard_edge_rule(double a, double upper, int n);

/// int_0^X J_a(t) dt by panelled Gauss-Legendre.
double bessel_j_integral(double a, double X);

/// int_y^inf Ai(t) dt.
double airy_tail_integral(double y);

}  // namespace gapprob
