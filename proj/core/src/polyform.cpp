#include "hypercone/polyform.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace hypercone {

namespace {

// relative tolerance accepting a roots-of-unity sum as real
constexpr double kRealResidueTol = 1e-8;

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::round(b);
}

template <class S>
std::vector<S> convolve(const std::vector<S>& a, const std::vector<S>& b) {
    std::vector<S> out(a.size() + b.size() - 1, S(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += a[i] * b[j];
    return out;
}

template <class S>
std::vector<S> product_range(const std::vector<std::pair<S, S>>& f, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return {f[lo].first, f[lo].second};
    const std::size_t mid = lo + (hi - lo) / 2;
    return convolve(product_range(f, lo, mid), product_range(f, mid, hi));
}

template <class S, class VecT>
std::vector<std::pair<S, S>> monic_factors(const VecT& x) {
    std::vector<std::pair<S, S>> f(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) f[i] = {x[i], S(1)};
    return f;
}

template <class S, class VecT>
S eval_sparse(const std::vector<Monomial>& terms, const VecT& x) {
    S acc(0);
    for (const Monomial& m : terms) {
        S t(m.coefficient);
        for (std::size_t i = 0; i < m.exponents.size(); ++i)
            for (int r = 0; r < m.exponents[i]; ++r) t *= x[static_cast<Eigen::Index>(i)];
        acc += t;
    }
    return acc;
}

template <class S, class VecT, class GradT>
void grad_sparse(const std::vector<Monomial>& terms, const VecT& x, GradT& g) {
    g.setZero();
    for (const Monomial& m : terms) {
        for (std::size_t i = 0; i < m.exponents.size(); ++i) {
            const int ei = m.exponents[i];
            if (ei == 0) continue;
            S t(m.coefficient * ei);
            for (int r = 0; r < ei - 1; ++r) t *= x[static_cast<Eigen::Index>(i)];
            for (std::size_t j = 0; j < m.exponents.size(); ++j) {
                if (j == i) continue;
                for (int r = 0; r < m.exponents[j]; ++r) t *= x[static_cast<Eigen::Index>(j)];
            }
            g[static_cast<Eigen::Index>(i)] += t;
        }
    }
}

template <class S, class VecT>
S eval_linear_factors(const std::vector<Vec>& factors, const VecT& x) {
    S acc(1);
    for (const Vec& a : factors) {
        S dot(0);
        for (Eigen::Index i = 0; i < a.size(); ++i) dot += S(a[i]) * x[i];
        acc *= dot;
    }
    return acc;
}

template <class S, class VecT, class GradT>
void grad_linear_factors(const std::vector<Vec>& factors, const VecT& x, GradT& g) {
    const int d = static_cast<int>(factors.size());
    std::vector<S> vals(d);
    for (int j = 0; j < d; ++j) {
        S dot(0);
        for (Eigen::Index i = 0; i < factors[j].size(); ++i) dot += S(factors[j][i]) * x[i];
        vals[j] = dot;
    }
    // prefix[j] = prod_{l<j} vals[l], suffix[j] = prod_{l>=j} vals[l]
    std::vector<S> prefix(d + 1, S(1)), suffix(d + 1, S(1));
    for (int j = 0; j < d; ++j) prefix[j + 1] = prefix[j] * vals[j];
    for (int j = d - 1; j >= 0; --j) suffix[j] = suffix[j + 1] * vals[j];
    g.setZero();
    for (int j = 0; j < d; ++j) {
        const S others = prefix[j] * suffix[j + 1];
        for (Eigen::Index i = 0; i < factors[j].size(); ++i) g[i] += others * S(factors[j][i]);
    }
}

bool is_all_ones(const Vec& e) {
    for (Eigen::Index i = 0; i < e.size(); ++i)
        if (e[i] != 1.0) return false;
    return true;
}

void check_dim(const PolynomialForm& p, const auto& x, const char* what) {
    if (x.size() != p.n()) {
        std::ostringstream os;
        os << what << ": expected dimension " << p.n() << ", got " << x.size();
        throw std::invalid_argument(os.str());
    }
}

double real_or_throw(const Complex& v, const char* what, int index) {
    if (std::abs(v.imag()) > kRealResidueTol * std::max(1.0, std::abs(v.real()))) {
        std::ostringstream os;
        os << what << ": imaginary residue " << v.imag() << " at index " << index
           << " exceeds tolerance (real part " << v.real() << ")";
        throw NumericalError(os.str());
    }
    return v.real();
}

} // namespace

// ---------------------------------------------------------------------------
// construction

PolynomialForm PolynomialForm::sparse(int n, std::vector<Monomial> monomials) {
    if (n <= 0) throw std::invalid_argument("sparse: n must be positive");
    if (monomials.empty()) throw std::invalid_argument("sparse: empty monomial list");
    int d = -1;
    std::map<std::vector<int>, int> seen;
    for (const Monomial& m : monomials) {
        if (static_cast<int>(m.exponents.size()) != n)
            throw std::invalid_argument("sparse: exponent vector length mismatch");
        int deg = 0;
        for (int e : m.exponents) {
            if (e < 0) throw std::invalid_argument("sparse: negative exponent");
            deg += e;
        }
        if (d < 0) d = deg;
        if (deg != d) throw std::invalid_argument("sparse: monomial degrees differ (not homogeneous)");
        if (!std::isfinite(m.coefficient) || m.coefficient == 0.0)
            throw std::invalid_argument("sparse: coefficient must be finite and nonzero");
        if (seen.count(m.exponents)) throw std::invalid_argument("sparse: duplicate exponent vector");
        seen[m.exponents] = 1;
    }
    if (d == 0) throw std::invalid_argument("sparse: degree zero polynomial");
    PolynomialForm p;
    p.n_ = n;
    p.d_ = d;
    p.kind_ = Kind::Sparse;
    p.monomials_ = std::move(monomials);
    return p;
}

PolynomialForm PolynomialForm::elesym(int n, int k) {
    if (n <= 0) throw std::invalid_argument("elesym: n must be positive");
    if (k < 1 || k > n) throw std::invalid_argument("elesym: require 1 <= k <= n");
    PolynomialForm p;
    p.n_ = n;
    p.d_ = k;
    p.kind_ = Kind::EleSym;
    p.elesym_k_ = k;
    return p;
}

PolynomialForm PolynomialForm::linear_factors(std::vector<Vec> factors) {
    if (factors.empty()) throw std::invalid_argument("linear_factors: empty factor list");
    const Eigen::Index n = factors.front().size();
    if (n == 0) throw std::invalid_argument("linear_factors: zero-dimensional factor");
    for (const Vec& a : factors) {
        if (a.size() != n) throw std::invalid_argument("linear_factors: factor length mismatch");
        if (a.norm() == 0.0) throw std::invalid_argument("linear_factors: zero factor");
    }
    PolynomialForm p;
    p.n_ = static_cast<int>(n);
    p.d_ = static_cast<int>(factors.size());
    p.kind_ = Kind::LinearFactors;
    p.factors_ = std::move(factors);
    return p;
}

const std::vector<Monomial>& PolynomialForm::monomials() const {
    if (kind_ != Kind::Sparse) throw std::logic_error("monomials(): not a Sparse form");
    return monomials_;
}

int PolynomialForm::elesym_k() const {
    if (kind_ != Kind::EleSym) throw std::logic_error("elesym_k(): not an EleSym form");
    return elesym_k_;
}

const std::vector<Vec>& PolynomialForm::factors() const {
    if (kind_ != Kind::LinearFactors) throw std::logic_error("factors(): not a LinearFactors form");
    return factors_;
}

// ---------------------------------------------------------------------------
// evaluation and gradients

namespace detail {

std::vector<double> product_of_linears(const std::vector<std::pair<double, double>>& factors) {
    return product_range(factors, 0, factors.size());
}

std::vector<Complex> product_of_linears(const std::vector<std::pair<Complex, Complex>>& factors) {
    return product_range(factors, 0, factors.size());
}

std::vector<double> elesym_coeff_table(const Vec& x) {
    return product_range(monic_factors<double>(x), 0, static_cast<std::size_t>(x.size()));
}

std::vector<Complex> elesym_coeff_table(const CVec& x) {
    return product_range(monic_factors<Complex>(x), 0, static_cast<std::size_t>(x.size()));
}

} // namespace detail

double PolynomialForm::eval(const Vec& x) const {
    check_dim(*this, x, "eval");
    switch (kind_) {
        case Kind::Sparse: return eval_sparse<double>(monomials_, x);
        case Kind::EleSym: return detail::elesym_coeff_table(x)[n_ - elesym_k_];
        case Kind::LinearFactors: return eval_linear_factors<double>(factors_, x);
    }
    return 0.0;
}

Complex PolynomialForm::eval(const CVec& x) const {
    check_dim(*this, x, "eval");
    switch (kind_) {
        case Kind::Sparse: return eval_sparse<Complex>(monomials_, x);
        case Kind::EleSym: return detail::elesym_coeff_table(x)[n_ - elesym_k_];
        case Kind::LinearFactors: return eval_linear_factors<Complex>(factors_, x);
    }
    return Complex(0);
}

Vec PolynomialForm::grad(const Vec& x) const {
    check_dim(*this, x, "grad");
    Vec g(n_);
    switch (kind_) {
        case Kind::Sparse: grad_sparse<double>(monomials_, x, g); break;
        case Kind::EleSym: g = elesym_grad(n_, elesym_k_, x); break;
        case Kind::LinearFactors: grad_linear_factors<double>(factors_, x, g); break;
    }
    return g;
}

CVec PolynomialForm::grad(const CVec& x) const {
    check_dim(*this, x, "grad");
    CVec g(n_);
    switch (kind_) {
        case Kind::Sparse: grad_sparse<Complex>(monomials_, x, g); break;
        case Kind::LinearFactors: grad_linear_factors<Complex>(factors_, x, g); break;
        case Kind::EleSym: {
            // same prefix/suffix scheme as the real path
            const int n = n_, k = elesym_k_;
            std::vector<std::vector<Complex>> prefix(n + 1), suffix(n + 1);
            prefix[0] = {Complex(1)};
            for (int i = 0; i < n; ++i) prefix[i + 1] = convolve(prefix[i], {x[i], Complex(1)});
            suffix[n] = {Complex(1)};
            for (int i = n - 1; i >= 0; --i) suffix[i] = convolve(suffix[i + 1], {x[i], Complex(1)});
            const int target = n - k; // sigma_{n-1,k-1} lives at t^{(n-1)-(k-1)}
            for (int i = 0; i < n; ++i) {
                Complex acc(0);
                const auto& a = prefix[i];
                const auto& b = suffix[i + 1];
                for (int m = 0; m <= target; ++m) {
                    if (m >= static_cast<int>(a.size())) break;
                    const int r = target - m;
                    if (r >= static_cast<int>(b.size())) continue;
                    acc += a[m] * b[r];
                }
                g[i] = acc;
            }
            break;
        }
    }
    return g;
}

double elesym_eval(int n, int k, const Vec& x) {
    if (k < 1 || k > n) throw std::invalid_argument("elesym_eval: require 1 <= k <= n");
    if (x.size() != n) throw std::invalid_argument("elesym_eval: dimension mismatch");
    return detail::elesym_coeff_table(x)[n - k];
}

Vec elesym_grad(int n, int k, const Vec& x) {
    if (k < 1 || k > n) throw std::invalid_argument("elesym_grad: require 1 <= k <= n");
    if (x.size() != n) throw std::invalid_argument("elesym_grad: dimension mismatch");
    Vec g(n);
    if (k == 1) {
        g.setOnes();
        return g;
    }
    std::vector<std::vector<double>> prefix(n + 1), suffix(n + 1);
    prefix[0] = {1.0};
    for (int i = 0; i < n; ++i) prefix[i + 1] = convolve(prefix[i], {x[i], 1.0});
    suffix[n] = {1.0};
    for (int i = n - 1; i >= 0; --i) suffix[i] = convolve(suffix[i + 1], {x[i], 1.0});
    const int target = n - k;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const auto& a = prefix[i];
        const auto& b = suffix[i + 1];
        for (int m = 0; m <= target; ++m) {
            if (m >= static_cast<int>(a.size())) break;
            const int r = target - m;
            if (r >= static_cast<int>(b.size())) continue;
            acc += a[m] * b[r];
        }
        g[i] = acc;
    }
    return g;
}

DirDerivCoeffs dir_deriv_coeffs(const PolynomialForm& poly, const Vec& e, const Vec& x) {
    check_dim(poly, e, "dir_deriv_coeffs(e)");
    check_dim(poly, x, "dir_deriv_coeffs(x)");
    const int d = poly.degree();
    const double pe = poly.eval(e);
    if (pe == 0.0) throw std::invalid_argument("dir_deriv_coeffs: p(e) = 0");

    DirDerivCoeffs out;
    out.values = Vec::Zero(d + 1);

    if (poly.kind() == PolynomialForm::Kind::LinearFactors) {
        std::vector<std::pair<double, double>> f;
        f.reserve(poly.factors().size());
        for (const Vec& a : poly.factors()) f.push_back({a.dot(x), a.dot(e)});
        const auto c = detail::product_of_linears(f);
        for (int i = 0; i <= d; ++i) out.values[i] = c[i];
        return out;
    }
    if (poly.kind() == PolynomialForm::Kind::EleSym && is_all_ones(e)) {
        // sigma_{n,k}(x + t 1) = sum_i C(n-k+i, n-k) sigma_{n,k-i}(x) t^i
        const int n = poly.n(), k = poly.elesym_k();
        const auto table = detail::elesym_coeff_table(x); // table[j] = sigma_{n,n-j}
        for (int i = 0; i <= d; ++i) out.values[i] = binomial(n - k + i, n - k) * table[n - (k - i)];
        return out;
    }

    out.values[0] = poly.eval(x);
    out.values[d] = pe;
    if (d >= 2) {
        const CVec ec = e.cast<Complex>();
        const CVec xc = x.cast<Complex>();
        std::vector<Complex> vals(d);
        for (int j = 1; j <= d; ++j) {
            const Complex w = std::polar(1.0, 2.0 * M_PI * j / d);
            vals[j - 1] = poly.eval(CVec(xc + w * ec));
        }
        for (int i = 1; i < d; ++i) {
            Complex acc(0);
            for (int j = 1; j <= d; ++j) acc += std::polar(1.0, -2.0 * M_PI * i * j / d) * vals[j - 1];
            out.values[i] = real_or_throw(acc / double(d), "dir_deriv_coeffs", i);
        }
    }
    return out;
}

Vec grad_dir_deriv(const PolynomialForm& poly, const Vec& e, const Vec& x, int i) {
    check_dim(poly, e, "grad_dir_deriv(e)");
    check_dim(poly, x, "grad_dir_deriv(x)");
    const int d = poly.degree();
    if (i < 0 || i > d - 1) throw std::invalid_argument("grad_dir_deriv: require 0 <= i <= d-1");
    if (poly.eval(e) == 0.0) throw std::invalid_argument("grad_dir_deriv: p(e) = 0");
    if (i == 0) return poly.grad(x);

    if (poly.kind() == PolynomialForm::Kind::LinearFactors) {
        const auto& factors = poly.factors();
        const int m = d;
        std::vector<std::pair<double, double>> f(m);
        for (int j = 0; j < m; ++j) f[j] = {factors[j].dot(x), factors[j].dot(e)};
        std::vector<std::vector<double>> prefix(m + 1), suffix(m + 1);
        prefix[0] = {1.0};
        for (int j = 0; j < m; ++j) prefix[j + 1] = convolve(prefix[j], {f[j].first, f[j].second});
        suffix[m] = {1.0};
        for (int j = m - 1; j >= 0; --j) suffix[j] = convolve(suffix[j + 1], {f[j].first, f[j].second});
        Vec g = Vec::Zero(poly.n());
        for (int j = 0; j < m; ++j) {
            double coeff = 0.0;
            const auto& a = prefix[j];
            const auto& b = suffix[j + 1];
            for (int mm = 0; mm <= i; ++mm) {
                if (mm >= static_cast<int>(a.size())) break;
                const int r = i - mm;
                if (r >= static_cast<int>(b.size())) continue;
                coeff += a[mm] * b[r];
            }
            g += coeff * factors[j];
        }
        return factorial(i) * g;
    }
    if (poly.kind() == PolynomialForm::Kind::EleSym && is_all_ones(e)) {
        // component l: i! C(n-k+i, n-k) sigma_{n-1,k-1-i}(x with l removed)
        const int n = poly.n(), k = poly.elesym_k();
        const int kr = k - 1 - i; // >= 0 since i <= d-1 = k-1
        std::vector<std::vector<double>> prefix(n + 1), suffix(n + 1);
        prefix[0] = {1.0};
        for (int l = 0; l < n; ++l) prefix[l + 1] = convolve(prefix[l], {x[l], 1.0});
        suffix[n] = {1.0};
        for (int l = n - 1; l >= 0; --l) suffix[l] = convolve(suffix[l + 1], {x[l], 1.0});
        const int target = (n - 1) - kr;
        Vec g(n);
        for (int l = 0; l < n; ++l) {
            double acc = 0.0;
            const auto& a = prefix[l];
            const auto& b = suffix[l + 1];
            for (int m = 0; m <= target; ++m) {
                if (m >= static_cast<int>(a.size())) break;
                const int r = target - m;
                if (r >= static_cast<int>(b.size())) continue;
                acc += a[m] * b[r];
            }
            g[l] = acc;
        }
        return factorial(i) * binomial(n - k + i, n - k) * g;
    }

    const CVec ec = e.cast<Complex>();
    const CVec xc = x.cast<Complex>();
    CVec acc = CVec::Zero(poly.n());
    for (int j = 1; j <= d; ++j) {
        const Complex w = std::polar(1.0, 2.0 * M_PI * j / d);
        acc += std::polar(1.0, -2.0 * M_PI * i * j / d) * poly.grad(CVec(xc + w * ec));
    }
    acc *= factorial(i) / double(d);
    Vec g(poly.n());
    for (int l = 0; l < poly.n(); ++l) g[l] = real_or_throw(acc[l], "grad_dir_deriv", l);
    return g;
}

PolynomialForm expand_elesym_sparse(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("expand_elesym_sparse: require 1 <= k <= n");
    if (n > 20) throw std::invalid_argument("expand_elesym_sparse: guarded to n <= 20");
    std::vector<Monomial> terms;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Monomial m;
        m.exponents.assign(n, 0);
        for (int i : idx) m.exponents[i] = 1;
        m.coefficient = 1.0;
        terms.push_back(std::move(m));
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return PolynomialForm::sparse(n, std::move(terms));
}

} // namespace hypercone
