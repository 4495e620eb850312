#pragma once

#include "hypercone/polyform.hpp"
#include "hypercone/types.hpp"

namespace hypercone {

struct SpectraTolerances {
    double zero_mult_tol = 1e-6; ///< relative threshold for counting zero eigenvalues
    double imag_tol = 1e-6;      ///< root-realness tolerance

    void validate() const;
};

/// A polynomial paired with a hyperbolicity direction e (p(e) != 0).
/// Hyperbolicity itself is trusted input; the `isometric` flag is a caller
/// assertion consumed by the closed-form distance/projection formulas and is
/// never verified here.
class HyperbolicForm {
public:
    HyperbolicForm(PolynomialForm poly, Vec e, bool isometric = false);

    const PolynomialForm& poly() const { return poly_; }
    const Vec& e() const { return e_; }
    double pe() const { return pe_; }
    int n() const { return poly_.n(); }
    int degree() const { return poly_.degree(); }
    bool isometric() const { return isometric_; }

private:
    PolynomialForm poly_;
    Vec e_;
    double pe_;
    bool isometric_;
};

/// Eigenvalues of x: the d real roots of t -> p(x - t e), descending.
struct EigenSpectrum {
    Vec values;        ///< sorted descending
    double scale_used; ///< pre-eigenvalue normalization factor (||x|| when > 1)
};

/// Roots of a univariate polynomial sum_i coeffs[i] t^i via a balanced
/// companion matrix (coefficients normalized by the max magnitude first).
CVec poly_roots(const Vec& coeffs);

/// Computed as the negated roots of t -> p(x + t e); x is divided by ||x||
/// first when ||x|| > 1 and the roots rescaled (overflow guard).
/// A root with |imag| > imag_tol * (1 + |real|) raises NumericalError.
EigenSpectrum eigenvalues(const HyperbolicForm& hp, const Vec& x,
                          const SpectraTolerances& tol = {});

double lambda_min(const HyperbolicForm& hp, const Vec& x,
                  const SpectraTolerances& tol = {});

/// Number of eigenvalues with |lambda_i| <= zero_mult_tol * max(1, |l_1|, |l_d|).
int multiplicity_zero(const HyperbolicForm& hp, const Vec& x,
                      const SpectraTolerances& tol = {});

/// Multiplicity count on an already computed spectrum.
int multiplicity_zero(const EigenSpectrum& spectrum, const SpectraTolerances& tol = {});

} // namespace hypercone
