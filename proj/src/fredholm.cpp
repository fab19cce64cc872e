#include "gapprob/fredholm.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gapprob/errors.hpp"
#include "gapprob/specfun.hpp"

namespace gapprob {

namespace {

bool same_endpoint(double u, double v) {
    if (std::isinf(u) || std::isinf(v)) {
        return u == v;
    }
    return std::abs(u - v) <= 1e-12 * (1.0 + std::max(std::abs(u), std::abs(v)));
}

// Order used for the refinement estimate: double when possible, otherwise halve.
int refinement_order(int n) { return 2 * n <= kMaxQuadratureOrder ? 2 * n : n / 2; }

DiscreteOperator refined(const DiscreteOperator& D) {
    const int m = refinement_order(D.order());
    const KernelSpec& K = *D.kernel;
    KernelSpec k2 = K.composition ? with_inner_order(K, 2 * K.composition->inner.order() <= kMaxQuadratureOrder
                                                           ? 2 * K.composition->inner.order()
                                                           : K.composition->inner.order())
                                  : K;
    return discretize(k2, remap(D.rule.map, m));
}

double rank_one_det(double z, const DiscreteOperator& D, const RankOneTerm& T) {
    const int n = D.order();
    Eigen::VectorXd c(n);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
        const double sw = std::sqrt(D.rule.weights(i));
        c(i) = sw * T.left(D.rule.nodes(i));
        d(i) = sw * T.right(D.rule.nodes(i));
    }
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - z * D.matrix;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double base = det_identity_minus(z, D.matrix);
    if (base == 0.0) {
        throw SolverError("det_with_rank_one: I - zK is singular", 0.0);
    }
    return base * (1.0 - d.dot(lu.solve(c)));
}

struct BracketSolve {
    double value;
    double condition;
};

BracketSolve bracket_at(double point, double z, const KernelSpec& V, const MappedRule& rule,
                        const std::function<double(double)>& f) {
    const int n = rule.order();
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        rhs(i) = f(rule.nodes(i));
        for (int j = 0; j < n; ++j) {
            a(i, j) = (i == j ? 1.0 : 0.0) + z * V(rule.nodes(i), rule.nodes(j)) * rule.weights(j);
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-16)) {
        throw SolverError("bracket_delta: I + zV is numerically singular", rcond > 0 ? 1.0 / rcond : INFINITY);
    }
    const Eigen::VectorXd g = lu.solve(rhs);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        acc += rule.weights(j) * V(point, rule.nodes(j)) * g(j);
    }
    return {f(point) - z * acc, 1.0 / rcond};
}

}  // namespace

DiscreteOperator discretize(const KernelSpec& K, const MappedRule& rule) {
    if (!same_endpoint(K.domain.lower, rule.lower()) || !same_endpoint(K.domain.upper, rule.upper())) {
        std::ostringstream msg;
        msg << "discretize: rule interval (" << rule.lower() << ", " << rule.upper()
            << ") does not match kernel domain (" << K.domain.lower << ", " << K.domain.upper << ")";
        throw DomainError(msg.str());
    }
    const int n = rule.order();
    const Eigen::ArrayXd sw = rule.weights.array().sqrt();
    DiscreteOperator D;
    D.rule = rule;
    D.kernel = K;
    if (K.composition) {
        const auto& inner = K.composition->inner;
        const int m = inner.order();
        Eigen::MatrixXd a(n, m);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < m; ++k) {
                a(i, k) = sw(i) * K.composition->factor(rule.nodes(i), inner.nodes(k));
            }
        }
        const Eigen::MatrixXd aw = a * inner.weights.asDiagonal();
        Eigen::MatrixXd prod = aw * a.transpose();
        D.matrix = 0.5 * (prod + prod.transpose());
        return D;
    }
    D.matrix.resize(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double v = sw(i) * K(rule.nodes(i), rule.nodes(j)) * sw(j);
            D.matrix(i, j) = v;
            D.matrix(j, i) = v;
        }
    }
    return D;
}

DiscreteOperator make_discrete(Eigen::MatrixXd matrix, MappedRule rule) {
    if (matrix.rows() != rule.order() || matrix.cols() != rule.order()) {
        throw DomainError("make_discrete: matrix dimension does not match rule order");
    }
    return DiscreteOperator{std::move(matrix), std::move(rule), std::nullopt};
}

FredholmEval det_id_minus(double z, const DiscreteOperator& D) {
    FredholmEval out;
    out.order_used = D.order();
    out.value = det_identity_minus(z, D.matrix);
    if (z != 0.0 && D.kernel) {
        out.error_estimate = std::abs(out.value - det_identity_minus(z, refined(D).matrix));
    }
    return out;
}

BracketEval bracket_delta(double point, double z, const KernelSpec& V, const MappedRule& rule,
                          const std::function<double(double)>& f) {
    if (point < rule.lower() || point > rule.upper()) {
        throw DomainError("bracket_delta: point outside the rule interval");
    }
    BracketEval out;
    if (z == 0.0) {
        out.value = f(point);
        return out;
    }
    const BracketSolve base = bracket_at(point, z, V, rule, f);
    const BracketSolve fine = bracket_at(point, z, V, remap(rule.map, refinement_order(rule.order())), f);
    out.value = base.value;
    out.condition = base.condition;
    out.error_estimate = std::abs(base.value - fine.value);
    return out;
}

FredholmEval det_with_rank_one(double z, const DiscreteOperator& D, const RankOneTerm& T) {
    FredholmEval out;
    out.order_used = D.order();
    out.value = rank_one_det(z, D, T);
    if (D.kernel) {
        out.error_estimate = std::abs(out.value - rank_one_det(z, refined(D), T));
    }
    return out;
}

std::vector<double> spectrum(const DiscreteOperator& D) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(D.matrix, Eigen::EigenvaluesOnly);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

IdentityReport verify_lemma2_scaling(double s, double a, double tolerance) {
    if (!(s > 0.0)) {
        throw DomainError("verify_lemma2_scaling: s must be positive");
    }
    constexpr double h = 1e-5;
    const auto V = [a](double ss, double x, double y) { return v_hard(ss, a)(x, y); };
    double worst = 0.0;
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    for (int i = 0; i <= 4; ++i) {
        const double x = 0.25 * i;
        for (int j = 0; j <= 4; ++j) {
            const double y = 0.25 * j;
            const double hs = h * s;
            const double ds = (V(s + hs, x, y) - V(s - hs, x, y)) / (2.0 * hs);
            double dx = 0.0;
            if (x == 0.0) {
                dx = (V(s, h, y) - V(s, 0.0, y)) / h;
            } else {
                dx = (V(s, x + h, y) - V(s, x - h, y)) / (2.0 * h);
            }
            const double lhs = 2.0 * s * ds;
            const double rhs = V(s, x, y) + 2.0 * x * dx;
            if (std::abs(lhs - rhs) >= worst) {
                worst = std::abs(lhs - rhs);
                worst_lhs = lhs;
                worst_rhs = rhs;
            }
        }
    }
    std::ostringstream p;
    p << "s=" << s << " a=" << a;
    IdentityReport r = make_report("lemma2_scaling", p.str(), worst_lhs, worst_rhs, tolerance);
    r.abs_diff = worst;
    r.pass = worst <= tolerance;
    r.diagnostics = "max pointwise discrepancy over 25 grid points";
    return r;
}

IdentityReport verify_lemma3_trace(double s, double a, int n, double tolerance) {
    if (!(s > 0.0)) {
        throw DomainError("verify_lemma3_trace: s must be positive");
    }
    const KernelSpec V = v_hard(s, a);
    const MappedRule rule = remap(ClusteredMap{0.0, 1.0, hard_edge_power(a)}, n);
    double lhs = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rule.nodes(i);
        const double h = 1e-5 * x;
        const double dx = (V(x + h, x) - V(x - h, x)) / (2.0 * h);
        lhs += rule.weights(i) * (V(x, x) + 2.0 * x * dx);
    }
    const double rhs = 0.5 * std::sqrt(s) * specfun::bessel_j(a, std::sqrt(s));
    std::ostringstream p;
    p << "s=" << s << " a=" << a << " n=" << n;
    return make_report("lemma3_trace", p.str(), lhs, rhs, tolerance);
}

}  // namespace gapprob
