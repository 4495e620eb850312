// Test-only oracles, independent of the implementation paths they check.
#pragma once

#include <functional>

#include "hypercone/polyform.hpp"
#include "hypercone/types.hpp"

namespace hypercone::testing {

/// Symbolic directional derivative D_e p of a Sparse form (exact monomial
/// calculus); repeated application yields p^(i) for the coefficient oracle.
PolynomialForm sparse_directional_derivative(const PolynomialForm& sparse_poly, const Vec& e);

/// p^(i)(x)/i! for i = 0..d via repeated symbolic differentiation of a
/// Sparse form. Independent of the roots-of-unity path.
Vec symbolic_restriction_coeffs(const PolynomialForm& sparse_poly, const Vec& e, const Vec& x);

/// Brute-force sigma_{n,k}(x): sum over all k-subsets.
double elesym_bruteforce(int n, int k, const Vec& x);

/// Brute-force gradient: component i = sigma_{n-1,k-1} of x without entry i.
Vec elesym_grad_bruteforce(int n, int k, const Vec& x);

/// Central finite-difference gradient with per-coordinate step
/// h * max(1, |x_i|).
Vec finite_diff_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h);

/// Projection onto the p-cone via bisection on the scalar KKT multiplier;
/// independent of the Frank-Wolfe path.
Vec pcone_project_oracle(const Vec& c, double p);

} // namespace hypercone::testing
