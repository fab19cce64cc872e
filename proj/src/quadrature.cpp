#include "gapprob/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace gapprob {

const QuadratureRule<double>& cached_gauss_legendre(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const QuadratureRule<double>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, std::make_unique<const QuadratureRule<double>>(gauss_legendre<double>(n)))
                 .first;
    }
    return *it->second;
}

double MappedRule::lower() const {
    return std::visit(
        [](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SemiInfiniteMap>) {
                return m.s;
            } else {
                return m.a;
            }
        },
        map);
}

double MappedRule::upper() const {
    return std::visit(
        [](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SemiInfiniteMap>) {
                return std::numeric_limits<double>::infinity();
            } else {
                return m.b;
            }
        },
        map);
}

MappedRule map_finite(const QuadratureRule<double>& rule, double a, double b) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("map_finite: require finite a < b");
    }
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    MappedRule out{mid + half * rule.nodes.array(), half * rule.weights, FiniteMap{a, b}};
    return out;
}

MappedRule map_clustered(const QuadratureRule<double>& rule, double a, double b, int power) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("map_clustered: require finite a < b");
    }
    if (power < 1 || power > 8) {
        throw DomainError("map_clustered: power must lie in [1, 8]");
    }
    const Eigen::ArrayXd u = 0.5 * (rule.nodes.array() + 1.0);
    MappedRule out;
    out.nodes = (a + (b - a) * u.pow(power)).matrix();
    // dx = p (b - a) u^(p-1) du, du = dt / 2
    out.weights = (0.5 * power * (b - a) * u.pow(power - 1) * rule.weights.array()).matrix();
    out.map = ClusteredMap{a, b, power};
    return out;
}

MappedRule map_semi_infinite(const QuadratureRule<double>& rule, double s, double L) {
    if (!(L > 0.0) || !std::isfinite(L) || !std::isfinite(s)) {
        throw DomainError("map_semi_infinite: require finite s and L > 0");
    }
    const Eigen::ArrayXd u = 0.5 * (rule.nodes.array() + 1.0);
    const Eigen::ArrayXd one_minus = 1.0 - u;
    MappedRule out;
    out.nodes = (s + L * u / one_minus).matrix();
    out.weights = (0.5 * L * rule.weights.array() / one_minus.square()).matrix();
    out.map = SemiInfiniteMap{s, L};
    return out;
}

MappedRule remap(const IntervalMap& map, int n) {
    const auto& rule = cached_gauss_legendre(n);
    return std::visit(
        [&](const auto& m) -> MappedRule {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, FiniteMap>) {
                return map_finite(rule, m.a, m.b);
            } else if constexpr (std::is_same_v<M, ClusteredMap>) {
                return map_clustered(rule, m.a, m.b, m.power);
            } else {
                return map_semi_infinite(rule, m.s, m.L);
            }
        },
        map);
}

}  // namespace gapprob
