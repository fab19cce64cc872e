#pragma once

// Determinant building blocks shared by the gap queries and the identity suites.

#include "gapprob/fredholm.hpp"
#include "gapprob/operators.hpp"

namespace gapprob::detail {

/// det(I - z K^{+/-}) for the sine kernel folded onto (0, h).
FredholmEval bulk_parity_det(Parity parity, double h, double z, int n);

/// det(I - z K^sine) on (0, L).
FredholmEval sine_det(double L, double z, int n);

/// det(I - z V^soft) on (0, inf).
FredholmEval soft_v_det(double s, double z, int n);

/// det(I - z K^Airy) on (s, inf).
FredholmEval airy_det(double s, double z, int n);

/// det(I - z V^hard(s, a)) on (0, 1).
FredholmEval hard_v_det(double s, double a, double z, int n);

/// det(I - z K^Bessel) on (0, s).
FredholmEval bessel_det(double s, double a, double z, int n);

MappedRule soft_v_rule(int n);
MappedRule airy_rule(double s, int n);
MappedRule bulk_rule(double h, int n);

/// Error estimate of a product x*y from the estimates of its factors.
FredholmEval product(const FredholmEval& x, const FredholmEval& y);

}  // namespace gapprob::detail
