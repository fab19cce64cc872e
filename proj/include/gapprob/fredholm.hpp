#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "gapprob/operators.hpp"
#include "gapprob/quadrature.hpp"
#include "gapprob/report.hpp"

namespace gapprob {

struct FredholmEval {
    double value = 1.0;
    /// |value_n - value_2n|; 0 when no refinement was possible.
    double error_estimate = 0.0;
    int order_used = 0;
};

/// Symmetrized Nystrom matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j).
struct DiscreteOperator {
    Eigen::MatrixXd matrix;
    MappedRule rule;
    /// Kept so that error estimates can rebuild the operator at doubled order.
    std::optional<KernelSpec> kernel;

    int order() const { return rule.order(); }
};

struct BracketEval {
    double value = 0.0;
    double error_estimate = 0.0;
    /// Estimated 1-norm condition number of (I + zD).
    double condition = 1.0;
    bool degraded() const { return condition > 1e12; }
};

DiscreteOperator discretize(const KernelSpec& K, const MappedRule& rule);

/// Same as discretize but from an explicit matrix (no refinement available).
DiscreteOperator make_discrete(Eigen::MatrixXd matrix, MappedRule rule);

/// det(I - z M) via partial-pivot LU with log-space accumulation of the pivots.
template <typename Derived>
typename Derived::Scalar det_identity_minus(typename Derived::Scalar z, const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    if (z == Scalar(0) || m.rows() == 0) {
        return Scalar(1);
    }
    const Matrix a = Matrix::Identity(m.rows(), m.cols()) - z * m;
    Eigen::PartialPivLU<Matrix> lu(a);
    const auto& packed = lu.matrixLU();
    Scalar log_abs = 0;
    int sign = lu.permutationP().determinant();
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        const Scalar d = packed(i, i);
        if (d == Scalar(0)) {
            return Scalar(0);
        }
        if (d < 0) {
            sign = -sign;
        }
        log_abs += std::log(std::abs(d));
    }
    return sign * std::exp(log_abs);
}

FredholmEval det_id_minus(double z, const DiscreteOperator& D);

/// g(point) where (I + zV) g = f, Nystrom-extended from the nodes.
BracketEval bracket_delta(double point, double z, const KernelSpec& V, const MappedRule& rule,
                          const std::function<double(double)>& f);

/// det(I - zK - left (x) right).
FredholmEval det_with_rank_one(double z, const DiscreteOperator& D, const RankOneTerm& T);

/// Eigenvalues of the symmetric Nystrom matrix, descending.
std::vector<double> spectrum(const DiscreteOperator& D);

/// 2s d_s V^hard = (I + 2 x d_x) V^hard on a 5x5 grid of [0, 1]^2.
IdentityReport verify_lemma2_scaling(double s, double a, double tolerance = 1e-6);

/// sum_i w_i [V(x_i,x_i) + 2 x_i d_x V(x, x_i)|x=x_i] against V^hard(1, 1).
IdentityReport verify_lemma3_trace(double s, double a, int n = 96, double tolerance = 1e-5);

}  // namespace gapprob
