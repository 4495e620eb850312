#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <vector>

#include "hypercone/spectra.hpp"
#include "hypercone/types.hpp"

namespace hypercone {

/// Uniform cone interface consumed by the solver: ambient dimension, an
/// interior point e, the generalized minimum eigenvalue along e, and a
/// nonzero conjugate vector (element of K* orthogonal to a boundary point).
/// Conjugate vectors are returned with unit Euclidean norm; callers rescale.
class ConeOracle {
public:
    virtual ~ConeOracle() = default;

    virtual int dim() const = 0;
    virtual const Vec& interior_point() const = 0;
    virtual double lambda_min(const Vec& x) const = 0;

    /// Nonzero unit vector in cj(z) = K* ∩ {z}⊥ for a boundary point z.
    virtual Vec conjugate_vector(const Vec& z) const = 0;

    /// Plausible conjugate vectors at z (unit norm). Cones with degenerate
    /// boundary structure may return several; the FW subproblem picks the one
    /// with the best linear objective. Defaults to {conjugate_vector(z)}.
    virtual std::vector<Vec> conjugate_candidates(const Vec& z) const;

    virtual bool has_closed_form_project() const { return false; }
    virtual Vec closed_form_project(const Vec&) const;

    /// Dual-cone minimum eigenvalue, for diagnostics where the dual is known.
    virtual bool has_dual_lambda_min() const { return false; }
    virtual double dual_lambda_min(const Vec&) const;

    virtual std::string name() const = 0;
};

/// Hyperbolicity cone Λ(p, e) = {x | lambda_min(x) >= 0}. Conjugate vectors
/// follow the multiplicity recursion: at a boundary point z with mult(z) = r,
/// grad p^(r-1)(z) is a nonzero conjugate vector.
class HyperbolicityCone : public ConeOracle {
public:
    HyperbolicityCone(HyperbolicForm hp, SpectraTolerances tol = {});

    int dim() const override { return hp_.n(); }
    const Vec& interior_point() const override { return hp_.e(); }
    double lambda_min(const Vec& x) const override;
    Vec conjugate_vector(const Vec& z) const override;
    std::vector<Vec> conjugate_candidates(const Vec& z) const override;
    std::string name() const override;

    const HyperbolicForm& form() const { return hp_; }
    const SpectraTolerances& tolerances() const { return tol_; }

    /// Times a conjugate-vector request saw a numerically interior
    /// multiplicity count of zero and clamped it to one.
    long interior_clamp_count() const { return clamp_count_.load(); }

private:
    struct Candidate {
        Vec direction;   // unit norm
        double residual; // |<s, z>| / ||z||
        int order;       // derivative order r used (grad p^(r-1))
    };
    std::vector<Candidate> ladder(const Vec& z) const;

    HyperbolicForm hp_;
    SpectraTolerances tol_;
    mutable std::atomic<long> clamp_count_{0};
};

/// p-cone {x in R^{n+1} | x_0 >= (|x_1|^p + ... + |x_n|^p)^{1/p}}, p in (1, inf).
/// Not a hyperbolicity cone in general, but carries the same oracle surface;
/// the dual is the q-cone with q = p/(p-1).
class PCone : public ConeOracle {
public:
    PCone(double p_exponent, int n_tail);

    int dim() const override { return n_tail_ + 1; }
    const Vec& interior_point() const override { return e_; }
    double lambda_min(const Vec& x) const override;
    Vec conjugate_vector(const Vec& z) const override;
    bool has_dual_lambda_min() const override { return true; }
    double dual_lambda_min(const Vec& y) const override;
    std::string name() const override;

    double exponent() const { return p_; }
    double dual_exponent() const { return p_ / (p_ - 1.0); }

private:
    double p_;
    int n_tail_;
    Vec e_;
};

/// Nonnegative orthant with the standard closed forms.
class NonnegativeOrthant : public ConeOracle {
public:
    explicit NonnegativeOrthant(int n);

    int dim() const override { return n_; }
    const Vec& interior_point() const override { return e_; }
    double lambda_min(const Vec& x) const override { return x.minCoeff(); }
    Vec conjugate_vector(const Vec& z) const override;
    std::vector<Vec> conjugate_candidates(const Vec& z) const override;
    bool has_closed_form_project() const override { return true; }
    Vec closed_form_project(const Vec& x) const override { return x.cwiseMax(0.0); }
    bool has_dual_lambda_min() const override { return true; } // self-dual
    double dual_lambda_min(const Vec& y) const override { return y.minCoeff(); }
    std::string name() const override { return "orthant"; }

private:
    int n_;
    Vec e_;
};

/// k-th derivative relaxation of the nonnegative orthant,
/// Λ(sigma_{n,n-k}, all-ones), 0 <= k <= n-1.
std::shared_ptr<HyperbolicityCone> derivative_relaxation(int n, int k,
                                                         SpectraTolerances tol = {});

/// Orthant realized hyperbolically via p = prod x_i (= sigma_{n,n}), e = 1.
std::shared_ptr<HyperbolicityCone> orthant_as_hyperbolicity_cone(int n,
                                                                 SpectraTolerances tol = {});

/// Distance formula sqrt(sum min(lambda_i, 0)^2) in the norm induced by p.
/// Valid for isometric p with full eigenvalue range; requires the caller's
/// isometric flag on hp. (Running it on a non-isometric form yields the
/// formula value, not the distance.)
double isometric_dist(const HyperbolicForm& hp, const Vec& x,
                      const SpectraTolerances& tol = {});

/// Closed-form projection sum max(lambda_i,0) grad p(x - lambda_i e) / p^(1)(x - lambda_i e),
/// valid when additionally every eigenvalue of x is simple. Repeated
/// eigenvalues are refused unless no eigenvalue is positive (projection 0).
Vec isometric_project(const HyperbolicForm& hp, const Vec& x,
                      const SpectraTolerances& tol = {});

} // namespace hypercone
