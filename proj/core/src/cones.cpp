#include "hypercone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypercone {

namespace {

// boundary tolerance for conjugate-vector preconditions
double boundary_tol(const Vec& z) { return 1e-6 * (1.0 + z.norm()); }

// strict orthogonality residual certifying the r = 1 fast path
constexpr double kStrictResidual = 1e-7;
// coarse residual filter rejecting cancellation noise
constexpr double kCoarseResidual = 1e-2;
// eigenvalues within this relative distance of zero count as "near" when
// sizing the candidate ladder
constexpr double kNearZeroTol = 1e-3;

} // namespace

std::vector<Vec> ConeOracle::conjugate_candidates(const Vec& z) const {
    return {conjugate_vector(z)};
}

Vec ConeOracle::closed_form_project(const Vec&) const {
    throw std::logic_error(name() + ": no closed-form projection");
}

double ConeOracle::dual_lambda_min(const Vec&) const {
    throw std::logic_error(name() + ": no dual oracle");
}

// ---------------------------------------------------------------------------
// HyperbolicityCone

HyperbolicityCone::HyperbolicityCone(HyperbolicForm hp, SpectraTolerances tol)
    : hp_(std::move(hp)), tol_(tol) {
    tol_.validate();
}

double HyperbolicityCone::lambda_min(const Vec& x) const {
    return hypercone::lambda_min(hp_, x, tol_);
}

std::string HyperbolicityCone::name() const {
    switch (hp_.poly().kind()) {
        case PolynomialForm::Kind::EleSym: {
            std::ostringstream os;
            os << "hyperbolicity(sigma_{" << hp_.n() << "," << hp_.poly().elesym_k() << "})";
            return os.str();
        }
        case PolynomialForm::Kind::LinearFactors: return "hyperbolicity(linear-factors)";
        default: return "hyperbolicity(sparse)";
    }
}

std::vector<HyperbolicityCone::Candidate> HyperbolicityCone::ladder(const Vec& z) const {
    const EigenSpectrum spec = eigenvalues(hp_, z, tol_);
    const int d = hp_.degree();
    const double lam = spec.values[d - 1];
    const double btol = boundary_tol(z);
    if (lam > btol)
        throw std::invalid_argument("conjugate_vector: z is interior (lambda_min = " +
                                    std::to_string(lam) + ")");
    if (lam < -btol)
        throw std::invalid_argument("conjugate_vector: z is outside the cone (lambda_min = " +
                                    std::to_string(lam) + ")");
    if (multiplicity_zero(spec, tol_) == 0) clamp_count_.fetch_add(1);

    const double nz = std::max(z.norm(), 1e-300);

    // r = 1 fast path: a cleanly certified gradient is the conjugate vector
    // of the exposed facet and needs no alternatives.
    {
        Vec g = hp_.poly().grad(z);
        const double ng = g.norm();
        if (ng > 0.0) {
            g /= ng;
            const double residual = std::abs(g.dot(z)) / nz;
            if (g.dot(hp_.e()) > 0.0 && residual <= kStrictResidual)
                return {{std::move(g), residual, 1}};
        }
    }

    // Near a higher-multiplicity face the gradient cancels into noise; try
    // grad p^(r-1) for every multiplicity the spectrum makes plausible and
    // keep the directions that look like genuine conjugate vectors.
    const double scale = std::max({1.0, std::abs(spec.values[0]), std::abs(spec.values[d - 1])});
    int near = 0;
    for (int i = 0; i < d; ++i)
        if (std::abs(spec.values[i]) <= kNearZeroTol * scale) ++near;
    const int r_max = std::min(d, std::max(near, 1) + 1);

    std::vector<Candidate> out;
    for (int r = 1; r <= r_max; ++r) {
        Vec g = grad_dir_deriv(hp_.poly(), hp_.e(), z, r - 1);
        const double ng = g.norm();
        if (ng <= 0.0) continue;
        g /= ng;
        const double residual = std::abs(g.dot(z)) / nz;
        if (g.dot(hp_.e()) <= 1e-12 || residual > kCoarseResidual) continue;
        out.push_back({std::move(g), residual, r});
    }
    if (out.empty()) {
        // final fallback: mult(z) = d means cj(z) = K*, and grad p^(d-1) is a
        // constant interior dual vector
        Vec g = grad_dir_deriv(hp_.poly(), hp_.e(), z, d - 1);
        const double ng = g.norm();
        if (ng > 0.0 && g.dot(hp_.e()) > 0.0) {
            g /= ng;
            const double residual = std::abs(g.dot(z)) / nz;
            out.push_back({std::move(g), residual, d});
        }
    }
    if (out.empty())
        throw NumericalError("conjugate_vector: no usable direction at the given boundary point");
    return out;
}

std::vector<Vec> HyperbolicityCone::conjugate_candidates(const Vec& z) const {
    std::vector<Vec> dirs;
    for (auto& c : ladder(z)) dirs.push_back(std::move(c.direction));
    return dirs;
}

Vec HyperbolicityCone::conjugate_vector(const Vec& z) const {
    auto cands = ladder(z);
    auto best = std::min_element(cands.begin(), cands.end(),
                                 [](const Candidate& a, const Candidate& b) {
                                     return a.residual < b.residual;
                                 });
    return best->direction;
}

// ---------------------------------------------------------------------------
// PCone

PCone::PCone(double p_exponent, int n_tail) : p_(p_exponent), n_tail_(n_tail) {
    if (!(p_ > 1.0) || !std::isfinite(p_))
        throw std::invalid_argument("PCone: exponent must lie in (1, inf)");
    if (n_tail_ < 1) throw std::invalid_argument("PCone: tail dimension must be >= 1");
    e_ = Vec::Zero(n_tail_ + 1);
    e_[0] = 1.0;
}

namespace {
double p_norm_tail(const Vec& x, double p) {
    double acc = 0.0;
    for (Eigen::Index i = 1; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p);
    return std::pow(acc, 1.0 / p);
}
} // namespace

double PCone::lambda_min(const Vec& x) const {
    if (x.size() != dim()) throw std::invalid_argument("PCone::lambda_min: dimension mismatch");
    return x[0] - p_norm_tail(x, p_);
}

double PCone::dual_lambda_min(const Vec& y) const {
    if (y.size() != dim()) throw std::invalid_argument("PCone::dual_lambda_min: dimension mismatch");
    return y[0] - p_norm_tail(y, dual_exponent());
}

Vec PCone::conjugate_vector(const Vec& z) const {
    if (z.size() != dim()) throw std::invalid_argument("PCone::conjugate_vector: dimension mismatch");
    if (z.norm() == 0.0) return e_; // cj(0) = K*, pick the dual interior point
    const double tau = p_norm_tail(z, p_);
    const double residual = std::abs(z[0] - tau);
    if (residual > 1e-6 * (1.0 + z.norm()))
        throw std::invalid_argument("PCone::conjugate_vector: z not on the boundary (residual " +
                                    std::to_string(residual) + ")");
    Vec s(dim());
    s[0] = std::pow(tau, p_ - 1.0);
    for (Eigen::Index i = 1; i < z.size(); ++i) {
        const double a = std::abs(z[i]);
        s[i] = z[i] >= 0.0 ? -std::pow(a, p_ - 1.0) : std::pow(a, p_ - 1.0);
    }
    const double ns = s.norm();
    if (ns == 0.0) return e_;
    return s / ns;
}

std::string PCone::name() const {
    std::ostringstream os;
    os << "pcone(p=" << p_ << ", n=" << n_tail_ << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// NonnegativeOrthant

NonnegativeOrthant::NonnegativeOrthant(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("NonnegativeOrthant: n must be >= 1");
    e_ = Vec::Ones(n);
}

Vec NonnegativeOrthant::conjugate_vector(const Vec& z) const {
    auto cands = conjugate_candidates(z);
    return cands.front(); // smallest-index zero coordinate
}

std::vector<Vec> NonnegativeOrthant::conjugate_candidates(const Vec& z) const {
    if (z.size() != n_) throw std::invalid_argument("orthant conjugate: dimension mismatch");
    const double btol = boundary_tol(z);
    if (z.minCoeff() > btol)
        throw std::invalid_argument("orthant conjugate: z is interior");
    if (z.minCoeff() < -btol)
        throw std::invalid_argument("orthant conjugate: z is outside the cone");
    std::vector<Vec> out;
    for (int i = 0; i < n_; ++i) {
        if (std::abs(z[i]) <= btol) {
            Vec s = Vec::Zero(n_);
            s[i] = 1.0;
            out.push_back(std::move(s));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// factories and isometric formulas

std::shared_ptr<HyperbolicityCone> derivative_relaxation(int n, int k, SpectraTolerances tol) {
    if (k < 0 || k > n - 1)
        throw std::invalid_argument("derivative_relaxation: require 0 <= k <= n-1");
    return std::make_shared<HyperbolicityCone>(
        HyperbolicForm(PolynomialForm::elesym(n, n - k), Vec::Ones(n)), tol);
}

std::shared_ptr<HyperbolicityCone> orthant_as_hyperbolicity_cone(int n, SpectraTolerances tol) {
    // isometric flag per the product polynomial's known isometry
    return std::make_shared<HyperbolicityCone>(
        HyperbolicForm(PolynomialForm::elesym(n, n), Vec::Ones(n), /*isometric=*/true), tol);
}

double isometric_dist(const HyperbolicForm& hp, const Vec& x, const SpectraTolerances& tol) {
    if (!hp.isometric())
        throw std::invalid_argument("isometric_dist: form not flagged isometric by the caller");
    const EigenSpectrum s = eigenvalues(hp, x, tol);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        const double m = std::min(s.values[i], 0.0);
        acc += m * m;
    }
    return std::sqrt(acc);
}

Vec isometric_project(const HyperbolicForm& hp, const Vec& x, const SpectraTolerances& tol) {
    if (!hp.isometric())
        throw std::invalid_argument("isometric_project: form not flagged isometric by the caller");
    const EigenSpectrum s = eigenvalues(hp, x, tol);
    const int d = hp.degree();
    if (s.values[0] <= 0.0) return Vec::Zero(hp.n()); // all eigenvalues nonpositive

    // repeated roots can split by ~1e-7 in the companion solver, so the
    // refusal threshold sits well above that; near-coincident eigenvalues
    // make the 1/p^(1) terms blow up anyway
    const double spread = s.values[0] - s.values[d - 1];
    for (int i = 0; i + 1 < d; ++i) {
        if (std::abs(s.values[i] - s.values[i + 1]) <= 1e-6 * std::max(spread, 1.0))
            throw std::invalid_argument("isometric_project: repeated eigenvalues, formula invalid");
    }

    Vec out = Vec::Zero(hp.n());
    for (int i = 0; i < d; ++i) {
        const double li = s.values[i];
        if (li <= 0.0) continue;
        const Vec y = x - li * hp.e();
        const Vec g = hp.poly().grad(y);
        const double p1 = g.dot(hp.e()); // p^(1)(y) = <grad p(y), e>
        if (p1 == 0.0)
            throw NumericalError("isometric_project: vanishing p^(1) at a simple eigenvalue");
        out += li / p1 * g;
    }
    return out;
}

} // namespace hypercone
