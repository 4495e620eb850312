#pragma once

#include <vector>

#include "hypercone/types.hpp"

namespace hypercone {

/// One term of a sparse homogeneous polynomial: coefficient * prod x_i^exp_i.
struct Monomial {
    std::vector<int> exponents;
    double coefficient = 0.0;
};

/// A homogeneous polynomial in n variables of degree d, stored in one of
/// three bodies:
///   - Sparse: explicit monomial list
///   - EleSym: the elementary symmetric polynomial sigma_{n,k} (implicit)
///   - LinearFactors: a product of linear forms <a_j, x>
///
/// Forms are immutable after construction and safe to share across threads.
class PolynomialForm {
public:
    enum class Kind { Sparse, EleSym, LinearFactors };

    static PolynomialForm sparse(int n, std::vector<Monomial> monomials);
    static PolynomialForm elesym(int n, int k);
    static PolynomialForm linear_factors(std::vector<Vec> factors);

    int n() const { return n_; }
    int degree() const { return d_; }
    Kind kind() const { return kind_; }

    double eval(const Vec& x) const;
    Complex eval(const CVec& x) const;

    /// Exact gradient; satisfies the Euler identity <grad p(x), x> = d p(x).
    Vec grad(const Vec& x) const;
    CVec grad(const CVec& x) const;

    const std::vector<Monomial>& monomials() const;
    int elesym_k() const;
    const std::vector<Vec>& factors() const;

private:
    PolynomialForm() = default;

    int n_ = 0;
    int d_ = 0;
    Kind kind_ = Kind::Sparse;
    std::vector<Monomial> monomials_;
    int elesym_k_ = 0;
    std::vector<Vec> factors_;
};

/// Coefficients of the univariate restriction t -> p(x + t e):
/// values[i] = p^(i)(x) / i!, so values[0] = p(x) and values[d] = p(e).
struct DirDerivCoeffs {
    Vec values;
};

/// sigma_{n,k}(x), evaluated without expanding the monomial list
/// (coefficient extraction from the divide-and-conquer product of (t + x_i)).
double elesym_eval(int n, int k, const Vec& x);

/// Gradient of sigma_{n,k}: component i equals sigma_{n-1,k-1} of x with
/// coordinate i removed. Prefix/suffix products of the linear factors, one
/// coefficient per excluded product.
Vec elesym_grad(int n, int k, const Vec& x);

/// Restriction coefficients of t -> p(x + t e).
///
/// Sparse forms (and EleSym along a direction other than the all-ones
/// vector) go through the primitive d-th root of unity inversion
///   p^(i)(x)/i! = (1/d) sum_j w^{-ij} p(x + w^j e),
/// whose complex residue must stay below an internal tolerance; a larger
/// residue raises NumericalError rather than being silently truncated.
/// EleSym along the all-ones direction and LinearFactors restrict exactly.
DirDerivCoeffs dir_deriv_coeffs(const PolynomialForm& poly, const Vec& e, const Vec& x);

/// Gradient of the i-th directional derivative polynomial p^(i) at x,
/// 0 <= i <= d-1. i = 0 is the plain gradient.
Vec grad_dir_deriv(const PolynomialForm& poly, const Vec& e, const Vec& x, int i);

/// Expanded Sparse form of sigma_{n,k}. Guarded to n <= 20; intended for
/// oracle tests only (sigma_{20,10} already has 184756 monomials).
PolynomialForm expand_elesym_sparse(int n, int k);

namespace detail {
/// Coefficients (ascending in t) of prod_j (b_j + a_j t), balanced
/// divide-and-conquer.
std::vector<double> product_of_linears(const std::vector<std::pair<double, double>>& factors);
std::vector<Complex> product_of_linears(const std::vector<std::pair<Complex, Complex>>& factors);

/// All elementary symmetric values of x: returns c with c[j] = coefficient
/// of t^j in prod (t + x_i), i.e. c[j] = sigma_{n,n-j}(x).
std::vector<double> elesym_coeff_table(const Vec& x);
std::vector<Complex> elesym_coeff_table(const CVec& x);
} // namespace detail

} // namespace hypercone
