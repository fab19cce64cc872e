#include "gapprob/ensembles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "gapprob/errors.hpp"

namespace gapprob {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
    return std::mt19937_64(splitmix64(splitmix64(seed) + trial));
}

void validate(const EnsembleSpec& spec) {
    if (spec.beta != 1 && spec.beta != 2 && spec.beta != 4) {
        throw DomainError("ensemble beta must be 1, 2 or 4");
    }
    if (spec.N < 2 || spec.N > 4000) {
        throw DomainError("ensemble size N must lie in [2, 4000]");
    }
    if (spec.beta == 4 && spec.N % 2 != 0) {
        throw DomainError("beta = 4 ensembles sample N/2 eigenvalues; N must be even");
    }
    if (spec.family == EnsembleFamily::laguerre && !(spec.a > -1.0)) {
        throw DomainError("laguerre exponent a must exceed -1");
    }
}

double chi(std::mt19937_64& rng, double dof) {
    std::gamma_distribution<double> g(0.5 * dof, 2.0);
    return std::sqrt(g(rng));
}

// Symmetric tridiagonal matrix (diag, off) whose eigenvalues, after multiplication by
// `scale`, follow the ensemble p.d.f.
struct Tridiagonal {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
    double scale = 1.0;
};

Tridiagonal sample_tridiagonal(const EnsembleSpec& spec, std::mt19937_64& rng) {
    const int m = sampled_size(spec);
    const double beta = spec.beta;
    Tridiagonal t;
    t.diag.resize(m);
    t.off.resize(std::max(0, m - 1));
    if (spec.family == EnsembleFamily::gaussian) {
        // Eigenvalues lambda have weight exp(-lambda^2 / 2).
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < m; ++i) {
            t.diag(i) = normal(rng);
        }
        for (int i = 0; i < m - 1; ++i) {
            t.off(i) = chi(rng, beta * (m - 1 - i)) / std::sqrt(2.0);
        }
        // exp(-beta x^2 / 2) for beta = 1, 2; exp(-x^2) for beta = 4.
        t.scale = spec.beta == 4 ? 1.0 / std::sqrt(2.0) : 1.0 / std::sqrt(beta);
    } else {
        // L = B B^T with B lower bidiagonal; eigenvalues have weight lambda^a exp(-lambda / 2).
        const double alpha = spec.a + 1.0 + 0.5 * beta * (m - 1);
        Eigen::VectorXd d(m);
        Eigen::VectorXd e(std::max(0, m - 1));
        for (int i = 0; i < m; ++i) {
            d(i) = chi(rng, 2.0 * alpha - beta * i);
        }
        for (int i = 0; i < m - 1; ++i) {
            e(i) = chi(rng, beta * (m - 1 - i));
        }
        for (int i = 0; i < m; ++i) {
            t.diag(i) = d(i) * d(i) + (i > 0 ? e(i - 1) * e(i - 1) : 0.0);
            if (i < m - 1) {
                t.off(i) = e(i) * d(i);
            }
        }
        // x^a exp(-beta x / 2) for beta = 1, 2; x^a exp(-x) for beta = 4.
        t.scale = spec.beta == 4 ? 0.5 : 1.0 / beta;
    }
    return t;
}

// Number of eigenvalues of the tridiagonal matrix strictly below x (Sturm sequence).
int count_below(const Tridiagonal& t, double x) {
    const int m = static_cast<int>(t.diag.size());
    int count = 0;
    double q = 1.0;
    for (int i = 0; i < m; ++i) {
        const double off2 = i > 0 ? t.off(i - 1) * t.off(i - 1) : 0.0;
        q = t.diag(i) - x - (i > 0 ? off2 / q : 0.0);
        if (q == 0.0) {
            q = -1e-300;
        }
        if (q < 0.0) {
            ++count;
        }
    }
    return count;
}

template <class Event>
EmpiricalGap run_trials(const EnsembleSpec& spec, long trials, Event&& event) {
    if (trials < 1) {
        throw DomainError("trials must be positive");
    }
    const int workers = static_cast<int>(std::min<long>(worker_count(), trials));
    std::vector<long> hits(workers, 0);
    auto body = [&](int w) {
        for (long k = w; k < trials; k += workers) {
            auto rng = trial_engine(spec.seed, static_cast<std::uint64_t>(k));
            if (event(sample_tridiagonal(spec, rng))) {
                ++hits[w];
            }
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(body, w);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    long total = 0;
    for (long h : hits) {
        total += h;
    }
    EmpiricalGap g;
    g.trials = trials;
    g.estimate = static_cast<double>(total) / trials;
    g.ci_halfwidth = 1.96 * std::sqrt(g.estimate * (1.0 - g.estimate) / trials);
    return g;
}

}  // namespace

int sampled_size(const EnsembleSpec& spec) { return spec.beta == 4 ? spec.N / 2 : spec.N; }

std::vector<double> sample_eigenvalues(const EnsembleSpec& spec, std::uint64_t trial) {
    validate(spec);
    auto rng = trial_engine(spec.seed, trial);
    const Tridiagonal t = sample_tridiagonal(spec, rng);
    std::vector<double> out;
    if (t.diag.size() == 1) {
        out.push_back(t.diag(0) * t.scale);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(t.diag, t.off, Eigen::EigenvaluesOnly);
    out.resize(t.diag.size());
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out[i] = es.eigenvalues()(i) * t.scale;
    }
    std::sort(out.begin(), out.end());
    return out;
}

EmpiricalGap empirical_gap_soft(const EnsembleSpec& spec, double s, long trials) {
    validate(spec);
    if (!std::isfinite(s)) {
        throw DomainError("s must be finite");
    }
    const double N = spec.N;
    const double edge = spec.family == EnsembleFamily::gaussian
                            ? std::sqrt(2.0 * N) + s / (std::sqrt(2.0) * std::pow(N, 1.0 / 6.0))
                            : 4.0 * N + 2.0 * std::cbrt(2.0 * N) * s;
    const int m = sampled_size(spec);
    // No eigenvalue above edge <=> all m eigenvalues lie below it.
    return run_trials(spec, trials, [&](const Tridiagonal& t) { return count_below(t, edge / t.scale) == m; });
}

EmpiricalGap empirical_gap_hard(const EnsembleSpec& spec, double s, long trials) {
    validate(spec);
    if (spec.family != EnsembleFamily::laguerre) {
        throw DomainError("hard-edge gaps require the laguerre family");
    }
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("s must be positive");
    }
    const double edge = s / (4.0 * spec.N);
    return run_trials(spec, trials, [&](const Tridiagonal& t) { return count_below(t, edge / t.scale) == 0; });
}

std::string rng_algorithm() { return "mt19937_64 per trial, seeded with splitmix64(splitmix64(seed) + trial)"; }

int worker_count() {
    if (const char* env = std::getenv("GAPPROB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace gapprob
