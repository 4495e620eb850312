#include "hypercone/agm.hpp"

#include <chrono>
#include <cmath>

namespace hypercone {

namespace {
using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}
} // namespace

void SmoothingConfig::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("SmoothingConfig: mu must be positive");
    if (!(cluster_tol > 0.0 && cluster_tol <= 1e-2))
        throw std::invalid_argument("SmoothingConfig: cluster_tol must be in (0, 1e-2]");
}

std::vector<EigenCluster> cluster_eigenvalues(const Vec& descending, double cluster_tol) {
    const int d = static_cast<int>(descending.size());
    if (d == 0) return {};
    const double spread = std::max(1.0, descending[0] - descending[d - 1]);
    std::vector<EigenCluster> out;
    double sum = descending[0];
    int count = 1;
    double prev = descending[0];
    for (int i = 1; i < d; ++i) {
        if (prev - descending[i] <= cluster_tol * spread) {
            sum += descending[i];
            ++count;
        } else {
            out.push_back({sum / count, count});
            sum = descending[i];
            count = 1;
        }
        prev = descending[i];
    }
    out.push_back({sum / count, count});
    return out;
}

double smoothed_value(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg) {
    cfg.validate();
    const EigenSpectrum spec = eigenvalues(hp, x);
    const auto clusters = cluster_eigenvalues(spec.values, cfg.cluster_tol);
    const double lmax = clusters.front().value;
    double acc = 0.0;
    for (const auto& c : clusters) acc += c.multiplicity * std::exp((c.value - lmax) / cfg.mu);
    return lmax + cfg.mu * std::log(acc);
}

namespace {

Vec smoothed_grad_impl(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg,
                       bool shift) {
    const EigenSpectrum spec = eigenvalues(hp, x);
    double cluster_tol = cfg.cluster_tol;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const auto clusters = cluster_eigenvalues(spec.values, cluster_tol);
        const double lmax = clusters.front().value;
        Vec acc = Vec::Zero(hp.n());
        double wsum = 0.0;
        bool degenerate = false;
        for (const auto& c : clusters) {
            const Vec y = x - c.value * hp.e();
            const DirDerivCoeffs coeffs = dir_deriv_coeffs(hp.poly(), hp.e(), y);
            const double denom = factorial(c.multiplicity) * coeffs.values[c.multiplicity];
            // noise floor of the restriction coefficients themselves
            double ref = 0.0;
            for (int i = 0; i <= hp.degree(); ++i) ref = std::max(ref, std::abs(coeffs.values[i]));
            if (std::abs(coeffs.values[c.multiplicity]) <= 1e-12 * std::max(ref, 1e-300)) {
                degenerate = true; // multiplicity misclassification
                break;
            }
            const double w =
                c.multiplicity * std::exp((shift ? c.value - lmax : c.value) / cfg.mu);
            const Vec num = grad_dir_deriv(hp.poly(), hp.e(), y, c.multiplicity - 1);
            acc += (w / denom) * num;
            wsum += w;
        }
        if (!degenerate) return acc / wsum;
        cluster_tol *= 10.0; // widen once and retry
    }
    throw NumericalError("smoothed_grad: p^(m_j) vanished even after widening cluster_tol");
}

} // namespace

Vec smoothed_grad(const HyperbolicForm& hp, const Vec& x, const SmoothingConfig& cfg) {
    cfg.validate();
    return smoothed_grad_impl(hp, x, cfg, /*shift=*/true);
}

Vec detail::smoothed_grad_unshifted(const HyperbolicForm& hp, const Vec& x,
                                    const SmoothingConfig& cfg) {
    cfg.validate();
    return smoothed_grad_impl(hp, x, cfg, /*shift=*/false);
}

// ---------------------------------------------------------------------------
// simplified accelerated baseline

namespace {

// smoothed constraint violation v_mu(x) = mu softplus(f_mu(-x)/mu) and its
// gradient; f_mu(-x) smooths max(-lambda_i(x)) = -lambda_min(x)
struct Penalty {
    const HyperbolicForm* hp;
    SmoothingConfig cfg;

    double value(const Vec& x) const {
        const double f = smoothed_value(*hp, Vec(-x), cfg);
        const double t = f / cfg.mu;
        if (t > 30.0) return f;
        return cfg.mu * std::log1p(std::exp(t));
    }
    Vec gradient(const Vec& x) const {
        const double f = smoothed_value(*hp, Vec(-x), cfg);
        const double t = f / cfg.mu;
        const double sig = t > 30.0 ? 1.0 : (t < -30.0 ? std::exp(t) : 1.0 / (1.0 + std::exp(-t)));
        return Vec(-sig * smoothed_grad(*hp, Vec(-x), cfg));
    }
};

struct SubMethod {
    double beta;
    double L;
    double t = 1.0;
    Vec x;
    Vec z; // extrapolated point

    void restart_at(const Vec& point) {
        x = point;
        z = point;
        t = 1.0;
    }
};

} // namespace

AgmResult agm_baseline(const HyperbolicForm& hp, const Vec& x0, const AgmConfig& cfg) {
    cfg.smoothing.validate();
    if (x0.size() != hp.n()) throw std::invalid_argument("agm_baseline: point dimension mismatch");

    const auto t0 = Clock::now();
    AgmResult res;
    res.solver_label = "agm-simplified";

    const double lam0 = lambda_min(hp, x0);
    if (lam0 >= 0.0) {
        res.x = x0;
        res.objective = 0.0;
        res.feasible_found = true;
        res.solve_seconds = seconds_since(t0);
        return res;
    }

    Penalty pen{&hp, cfg.smoothing};
    const double beta0 = 1.0 + 2.0 * std::max(0.0, -lam0);
    const double l0 = 1.0 + beta0 / cfg.smoothing.mu;
    SubMethod sub[2] = {{beta0, l0, 1.0, x0, x0}, {2.0 * beta0, 2.0 * l0, 1.0, x0, x0}};

    auto phi = [&](const Vec& x, double beta) { return 0.5 * (x - x0).squaredNorm() + beta * pen.value(x); };

    int stall = 0;
    int k = 0;
    for (; k < cfg.max_iters; ++k) {
        bool improved = false;
        for (SubMethod& s : sub) {
            const Vec g = (s.z - x0) + s.beta * pen.gradient(s.z);
            const double fz = phi(s.z, s.beta);
            Vec xn;
            for (int bt = 0; bt < 60; ++bt) { // backtracking on the local Lipschitz estimate
                xn = s.z - g / s.L;
                if (phi(xn, s.beta) <= fz - 0.5 / s.L * g.squaredNorm() + 1e-18) break;
                s.L *= 2.0;
            }
            const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * s.t * s.t));
            s.z = xn + ((s.t - 1.0) / tn) * (xn - s.x);
            s.x = xn;
            s.t = tn;
            s.L = std::max(s.L * 0.9, 1.0);

            const double lam = lambda_min(hp, xn);
            if (lam >= -cfg.feas_tol) {
                const double obj = 0.5 * (xn - x0).squaredNorm();
                if (!res.trace.best_feasible.present || obj < res.trace.best_feasible.objective) {
                    res.trace.best_feasible.present = true;
                    res.trace.best_feasible.iteration = k;
                    res.trace.best_feasible.x = xn;
                    res.trace.best_feasible.objective = obj;
                    improved = true;
                }
            }
        }

        if (cfg.record_trace) {
            const double lam = lambda_min(hp, sub[0].x);
            res.trace.records.push_back({k, (sub[0].x - x0 + sub[0].beta * pen.gradient(sub[0].x)).norm(),
                                         0.5 * (sub[0].x - x0).squaredNorm(), lam, 1.0 / sub[0].L,
                                         seconds_since(t0)});
        }

        // outer update: a new incumbent restarts both sub-methods there; a
        // long stretch without one doubles the penalties
        if (improved) {
            sub[0].restart_at(res.trace.best_feasible.x);
            sub[1].restart_at(res.trace.best_feasible.x);
            stall = 0;
        } else if (++stall > 200) {
            for (SubMethod& s : sub) {
                s.beta *= 2.0;
                s.L *= 2.0;
                s.restart_at(s.x);
            }
            stall = 0;
        }

        if (seconds_since(t0) > cfg.max_seconds) {
            ++k;
            break;
        }
    }

    res.iterations = k;
    res.feasible_found = res.trace.best_feasible.present;
    res.x = res.feasible_found ? res.trace.best_feasible.x : sub[0].x;
    res.objective = 0.5 * (res.x - x0).squaredNorm();
    res.solve_seconds = seconds_since(t0);
    return res;
}

} // namespace hypercone
