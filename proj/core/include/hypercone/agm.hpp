#pragma once

#include <string>
#include <vector>

#include "hypercone/spectra.hpp"
#include "hypercone/trace.hpp"
#include "hypercone/types.hpp"

namespace hypercone {

struct SmoothingConfig {
    double mu = 1e-3;         ///< smoothing parameter
    double cluster_tol = 1e-6; ///< relative tolerance grouping eigenvalues

    void validate() const;
};

struct EigenCluster {
    double value = 0.0;
    int multiplicity = 0;
};

/// Group a descending spectrum into distinct values with multiplicities.
/// Neighbors within cluster_tol * max(1, spread) fall into one cluster.
std::vector<EigenCluster> cluster_eigenvalues(const Vec& descending, double cluster_tol);

/// Smoothed max-eigenvalue value f_mu(x) = mu log sum_j m_j exp(lambda_j/mu),
/// evaluated with the lambda_max shift so it stays finite at any scale.
/// Reconstructed here to enable finite-difference validation of the gradient.
double smoothed_value(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg);

/// Gradient of the smoothed max eigenvalue:
/// sum_j w_j grad p^(m_j-1)(x - l_j e) / p^(m_j)(x - l_j e) normalized by
/// sum_j w_j, with w_j = m_j exp((l_j - l_max)/mu). A numerically vanishing
/// p^(m_j) denominator widens cluster_tol once and retries, then fails.
Vec smoothed_grad(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg);

namespace detail {
/// Unshifted variant (weights exp(lambda_j/mu)); only safe at benign scales.
/// Exists to validate shift invariance.
Vec smoothed_grad_unshifted(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg);
} // namespace detail

struct AgmConfig {
    SmoothingConfig smoothing;
    int max_iters = 5000;     ///< outer iterations (one step of each sub-method)
    double max_seconds = 60.0;
    double feas_tol = 1e-8;
    bool record_trace = false;
};

struct AgmResult {
    Vec x;
    double objective = 0.0;    ///< 1/2 ||x - x0||^2 at the returned point
    bool feasible_found = false;
    int iterations = 0;
    double solve_seconds = 0.0;
    SolveTrace trace;
    std::string solver_label;  ///< "agm-simplified"
};

/// Simplified accelerated baseline for projection onto a hyperbolicity cone:
/// accelerated proximal-gradient on the mu-smoothed constraint penalty, with
/// two sub-methods (penalty beta and 2 beta) advanced one iteration each per
/// outer step and an outer update that restarts momentum at the incumbent.
AgmResult agm_baseline(const HyperbolicForm& hp, const Vec& x0, const AgmConfig& cfg);

} // namespace hypercone
