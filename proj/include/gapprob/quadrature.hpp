#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <variant>

#include "gapprob/errors.hpp"

namespace gapprob {

/// Gauss-Legendre nodes and weights on the reference interval (-1, 1).
template <typename Scalar = double>
struct QuadratureRule {
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    Vector nodes;
    Vector weights;

    Eigen::Index order() const { return nodes.size(); }
};

inline constexpr int kMaxQuadratureOrder = 2048;

/// n-point Gauss-Legendre rule by Newton iteration on the three-term recurrence.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int n) {
    if (n < 1 || n > kMaxQuadratureOrder) {
        throw DomainError("gauss_legendre: order must lie in [1, 2048]");
    }
    QuadratureRule<Scalar> rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess for the (i+1)-th largest root.
        Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            Scalar p0 = 1;
            Scalar p1 = x;
            for (int k = 2; k <= n; ++k) {
                const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            // P_n'(x) from P_n and P_{n-1}.
            dp = n * (x * p1 - p0) / (x * x - 1);
            const Scalar dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 2 * eps * std::max(Scalar(1), std::abs(x))) {
                break;
            }
        }
        // Re-evaluate the derivative at the converged root for the weight.
        Scalar p0 = 1;
        Scalar p1 = x;
        for (int k = 2; k <= n; ++k) {
            const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) {
            p0 = 1;
            x = 0;
            dp = 1;
        } else {
            dp = n * (x * p1 - p0) / (x * x - 1);
        }
        const Scalar w = 2 / ((1 - x * x) * dp * dp);
        rule.nodes(n - 1 - i) = x;
        rule.nodes(i) = -x;
        rule.weights(n - 1 - i) = w;
        rule.weights(i) = w;
    }
    if (n % 2 == 1) {
        rule.nodes(n / 2) = 0;
    }
    return rule;
}

/// Shared, immutable double-precision rule for order n (computed once per order).
const QuadratureRule<double>& cached_gauss_legendre(int n);

struct FiniteMap {
    double a;
    double b;
};

/// x = a + (b - a) u^p: clusters nodes at the left end. With p = 2 (p = 4) integrands
/// carrying half-integer (quarter-integer) powers of (x - a) become polynomial in u.
struct ClusteredMap {
    double a;
    double b;
    int power = 2;
};

/// x = s + L u / (1 - u), u in (0, 1).
struct SemiInfiniteMap {
    double s;
    double L;
};

using IntervalMap = std::variant<FiniteMap, ClusteredMap, SemiInfiniteMap>;

/// Physical nodes and (positive) weights of a mapped Gauss-Legendre rule.
struct MappedRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    IntervalMap map;

    int order() const { return static_cast<int>(nodes.size()); }
    double lower() const;
    double upper() const;
};

MappedRule map_finite(const QuadratureRule<double>& rule, double a, double b);
MappedRule map_clustered(const QuadratureRule<double>& rule, double a, double b, int power = 2);
MappedRule map_semi_infinite(const QuadratureRule<double>& rule, double s, double L = 2.0);

/// Rebuild a rule with the same interval map at a different order.
MappedRule remap(const IntervalMap& map, int n);

/// Sum of w_i f(x_i).
template <typename F>
double integrate(const MappedRule& rule, F&& f) {
    double acc = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
        acc += rule.weights(i) * f(rule.nodes(i));
    }
    return acc;
}

}  // namespace gapprob
