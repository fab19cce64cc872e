#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gapprob {

enum class EnsembleFamily { gaussian, laguerre };

/// Eigenvalue p.d.f. prod g(x_l) prod |x_k - x_j|^beta with
/// gaussian: g = exp(-beta x^2 / 2) (beta = 1, 2), exp(-x^2) with N/2 eigenvalues (beta = 4);
/// laguerre: g = x^a exp(-beta x / 2) (beta = 1, 2), x^a exp(-x) with N/2 eigenvalues (beta = 4).
struct EnsembleSpec {
    EnsembleFamily family = EnsembleFamily::gaussian;
    int beta = 2;
    int N = 2;
    double a = 0.0;
    std::uint64_t seed = 0;
};

struct EmpiricalGap {
    double estimate = 0.0;
    long trials = 0;
    /// 1.96 sqrt(p (1 - p) / trials).
    double ci_halfwidth = 0.0;
};

/// Number of eigenvalues actually sampled (N, or N/2 for beta = 4).
int sampled_size(const EnsembleSpec& spec);

/// Sorted eigenvalues of trial `trial` of the stream defined by spec.seed.
std::vector<double> sample_eigenvalues(const EnsembleSpec& spec, std::uint64_t trial = 0);

/// Fraction of trials with no eigenvalue in the soft-edge interval
/// (sqrt(2N) + s / (sqrt(2) N^(1/6)), inf) (gaussian) or (4N + 2 (2N)^(1/3) s, inf) (laguerre).
EmpiricalGap empirical_gap_soft(const EnsembleSpec& spec, double s, long trials);

/// Fraction of trials with no eigenvalue in (0, s / (4N)); laguerre only.
EmpiricalGap empirical_gap_hard(const EnsembleSpec& spec, double s, long trials);

/// Name of the random number scheme, recorded in outputs.
std::string rng_algorithm();

/// Worker threads for Monte Carlo loops: GAPPROB_THREADS if set and positive, else the hardware count.
int worker_count();

}  // namespace gapprob
