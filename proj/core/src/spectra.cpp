#include "hypercone/spectra.hpp"

#include <lapacke.h>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypercone {

namespace {

// Evaluate q and its derivatives 0..order at t, plus the same Horner sums on
// |coefficients| as a noise scale.
void derivative_ladder(const Vec& c, double t, int order, std::vector<double>& vals,
                       std::vector<double>& noise) {
    const int d = static_cast<int>(c.size()) - 1;
    vals.assign(order + 1, 0.0);
    noise.assign(order + 1, 0.0);
    for (int m = 0; m <= order; ++m) {
        double fact = 1.0; // i! / (i - m)! accumulated below
        double tp = 1.0;
        double v = 0.0, s = 0.0;
        for (int i = m; i <= d; ++i) {
            fact = 1.0;
            for (int r = 0; r < m; ++r) fact *= (i - r);
            v += fact * c[i] * tp;
            s += std::abs(fact * c[i] * tp);
            tp *= t;
        }
        vals[m] = v;
        noise[m] = s;
    }
}

// Evaluate the m-th derivative of q at x together with the absolute-value
// Horner sum used as its evaluation-noise scale.
void eval_order(const Vec& c, double x, int m, double& val, double& noise) {
    const int d = static_cast<int>(c.size()) - 1;
    val = 0.0;
    noise = 0.0;
    double tp = 1.0;
    for (int i = m; i <= d; ++i) {
        double fact = 1.0;
        for (int r = 0; r < m; ++r) fact *= (i - r);
        val += fact * c[i] * tp;
        noise += std::abs(fact * c[i] * tp);
        tp *= x;
    }
}

// Companion eigenvalues of an m-fold root scatter like eps^(1/m), and q
// itself is noise-dominated throughout the scatter basin. Newton applied to
// q^(m-1), which has a simple well-conditioned root there, recovers full
// accuracy; the multiplicity estimate self-corrects as the iterate tightens.
// Steps must improve |q^(m-1)| while keeping |q| at its own noise floor (the
// second guard stops a misjudged multiplicity from jumping to a critical
// point between genuinely distinct roots).
void polish_roots(const Vec& c, CVec& roots) {
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 2) return;
    const double mult_gate = 1e-7;
    const double eps_floor = 256.0 * d * std::numeric_limits<double>::epsilon();
    std::vector<double> vals, noise;
    for (int j = 0; j < d; ++j) {
        double t = roots[j].real();
        for (int step = 0; step < 25; ++step) {
            derivative_ladder(c, t, d, vals, noise);
            int mult = d;
            for (int m = 1; m <= d; ++m) {
                if (std::abs(vals[m]) > mult_gate * std::max(noise[m], 1e-300)) {
                    mult = m;
                    break;
                }
            }
            const double num = vals[mult - 1];
            const double den = vals[mult];
            if (den == 0.0) break;
            const double next = t - num / den;
            double qm_next, qm_noise, q_next, q_noise;
            eval_order(c, next, mult - 1, qm_next, qm_noise);
            eval_order(c, next, 0, q_next, q_noise);
            if (std::abs(qm_next) >= std::abs(num)) break;
            if (std::abs(q_next) > std::max(2.0 * std::abs(vals[0]), eps_floor * q_noise)) break;
            t = next;
        }
        roots[j] = Complex(t, roots[j].imag());
    }
}

} // namespace

void SpectraTolerances::validate() const {
    if (!(zero_mult_tol > 0.0 && zero_mult_tol <= 1e-2))
        throw std::invalid_argument("SpectraTolerances: zero_mult_tol must be in (0, 1e-2]");
    if (!(imag_tol > 0.0 && imag_tol <= 1e-2))
        throw std::invalid_argument("SpectraTolerances: imag_tol must be in (0, 1e-2]");
}

HyperbolicForm::HyperbolicForm(PolynomialForm poly, Vec e, bool isometric)
    : poly_(std::move(poly)), e_(std::move(e)), pe_(0.0), isometric_(isometric) {
    if (e_.size() != poly_.n())
        throw std::invalid_argument("HyperbolicForm: direction dimension mismatch");
    pe_ = poly_.eval(e_);
    if (pe_ == 0.0 || !std::isfinite(pe_))
        throw std::invalid_argument("HyperbolicForm: p(e) must be finite and nonzero");
}

CVec poly_roots(const Vec& coeffs) {
    if (coeffs.size() == 0) throw std::invalid_argument("poly_roots: empty coefficients");
    const int d = static_cast<int>(coeffs.size()) - 1;
    if (coeffs[d] == 0.0) throw std::invalid_argument("poly_roots: zero leading coefficient");
    if (d == 0) return CVec(0);

    const double scale = coeffs.cwiseAbs().maxCoeff();
    Vec c = coeffs / scale;

    Mat comp = Mat::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];

    // dgeev balances (scaling + permutation), which is what resolves the
    // severely graded coefficient magnitudes boundary points produce
    std::vector<double> wr(d), wi(d);
    const lapack_int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', d, comp.data(), d, wr.data(), wi.data(),
                      nullptr, 1, nullptr, 1);
    if (info != 0)
        throw NumericalError("poly_roots: companion eigensolver failed (dgeev info " +
                             std::to_string(info) + ")");
    CVec roots(d);
    for (int i = 0; i < d; ++i) roots[i] = Complex(wr[i], wi[i]);
    return roots;
}

EigenSpectrum eigenvalues(const HyperbolicForm& hp, const Vec& x, const SpectraTolerances& tol) {
    tol.validate();
    if (x.size() != hp.n()) throw std::invalid_argument("eigenvalues: dimension mismatch");
    const double nx = x.norm();
    const double scale = nx > 1.0 ? nx : 1.0;
    const Vec y = x / scale;

    EigenSpectrum out;
    out.scale_used = scale;
    const int d = hp.degree();
    out.values.resize(d);

    if (hp.poly().kind() == PolynomialForm::Kind::LinearFactors) {
        // the restriction factors as prod_j (<a_j,y> + t <a_j,e>); each factor
        // contributes the exact eigenvalue <a_j,y> / <a_j,e>
        const auto& factors = hp.poly().factors();
        for (int j = 0; j < d; ++j) {
            const double be = factors[j].dot(hp.e());
            out.values[j] = factors[j].dot(y) / be;
        }
    } else {
        const DirDerivCoeffs coeffs = dir_deriv_coeffs(hp.poly(), hp.e(), y);
        // exactly vanishing trailing coefficients factor out exact zero roots
        int zeros = 0;
        while (zeros < d && coeffs.values[zeros] == 0.0) ++zeros;
        Vec reduced = coeffs.values.tail(d + 1 - zeros);
        CVec roots(d);
        roots.head(zeros).setZero();
        if (zeros < d) {
            CVec tail_roots = poly_roots(reduced);
            polish_roots(reduced, tail_roots);
            roots.tail(d - zeros) = tail_roots;
        }
        // Repeated real roots split into conjugate pairs whose imaginary part
        // scales like eps^(1/multiplicity), beyond any fixed tolerance. A pair
        // is still accepted as real when its real part is a root up to the
        // coefficient-level evaluation noise.
        auto residual_ok = [&](double t) {
            double val = 0.0, noise = 0.0, tp = 1.0;
            for (int i = 0; i <= d; ++i) {
                val += coeffs.values[i] * tp;
                noise += std::abs(coeffs.values[i] * tp);
                tp *= t;
            }
            return std::abs(val) <=
                   256.0 * d * std::numeric_limits<double>::epsilon() * std::max(noise, 1e-300);
        };
        for (int j = 0; j < d; ++j) {
            const Complex r = roots[j];
            if (std::abs(r.imag()) > tol.imag_tol * (1.0 + std::abs(r.real())) &&
                !residual_ok(r.real())) {
                std::ostringstream os;
                os << "eigenvalues: non-real root " << r.real() << (r.imag() < 0 ? "" : "+")
                   << r.imag() << "i of the restriction; coefficients:";
                for (int i = 0; i <= d; ++i) os << " " << coeffs.values[i];
                throw NumericalError(os.str());
            }
            out.values[j] = -r.real();
        }
    }
    std::sort(out.values.data(), out.values.data() + d, std::greater<double>());
    out.values *= scale;
    return out;
}

double lambda_min(const HyperbolicForm& hp, const Vec& x, const SpectraTolerances& tol) {
    const EigenSpectrum s = eigenvalues(hp, x, tol);
    return s.values[s.values.size() - 1];
}

int multiplicity_zero(const EigenSpectrum& spectrum, const SpectraTolerances& tol) {
    const auto& v = spectrum.values;
    const double scale =
        std::max({1.0, std::abs(v[0]), std::abs(v[v.size() - 1])});
    int count = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) <= tol.zero_mult_tol * scale) ++count;
    return count;
}

int multiplicity_zero(const HyperbolicForm& hp, const Vec& x, const SpectraTolerances& tol) {
    return multiplicity_zero(eigenvalues(hp, x, tol), tol);
}

} // namespace hypercone
