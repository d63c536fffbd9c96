#include "voatrace/elliptic.hpp"

#include <cmath>
#include <stdexcept>

#include "voatrace/modforms.hpp"

namespace voatrace {

namespace {

const QSeries& zero_series() {
    static const QSeries z = QSeries::zero();
    return z;
}

std::complex<double> ipow(std::complex<double> z, int d) {
    if (d < 0) return 1.0 / ipow(z, -d);
    std::complex<double> r = 1.0;
    while (d-- > 0) r *= z;
    return r;
}

}  // namespace

const QSeries& ZLaurentSeries::coeff(int d) const {
    if (d < min_exp || d > max_exp)
        throw std::out_of_range("z-exponent outside the known range");
    auto it = terms.find(d);
    return it == terms.end() ? zero_series() : it->second;
}

ZLaurentSeries zl_make(std::map<int, QSeries> terms, int min_exp, int max_exp) {
    ZLaurentSeries r;
    r.min_exp = min_exp;
    r.max_exp = max_exp;
    for (auto& [d, c] : terms) {
        if (d < min_exp || d > max_exp)
            throw std::invalid_argument("term exponent outside declared range");
        if (!c.is_zero()) r.terms.emplace(d, std::move(c));
    }
    return r;
}

ZLaurentSeries zl_add(const ZLaurentSeries& a, const ZLaurentSeries& b) {
    ZLaurentSeries r;
    r.min_exp = std::max(a.min_exp, b.min_exp);
    r.max_exp = std::min(a.max_exp, b.max_exp);
    for (int d = r.min_exp; d <= r.max_exp; ++d) {
        QSeries s = qs_add(a.coeff(d), b.coeff(d));
        if (!s.is_zero()) r.terms.emplace(d, std::move(s));
    }
    return r;
}

ZLaurentSeries zl_scale(const ZLaurentSeries& a, const Rational& c) {
    ZLaurentSeries r;
    r.min_exp = a.min_exp;
    r.max_exp = a.max_exp;
    if (c == 0) return r;
    for (const auto& [d, s] : a.terms) r.terms.emplace(d, qs_scale(s, c));
    return r;
}

ZLaurentSeries zl_sub(const ZLaurentSeries& a, const ZLaurentSeries& b) {
    return zl_add(a, zl_scale(b, rat(-1)));
}

ZLaurentSeries zl_z_derivative(const ZLaurentSeries& a) {
    ZLaurentSeries r;
    r.min_exp = a.min_exp - 1;
    r.max_exp = a.max_exp - 1;
    for (const auto& [d, s] : a.terms) {
        if (d == 0) continue;
        r.terms.emplace(d - 1, qs_scale(s, rat(d)));
    }
    return r;
}

ZLaurentSeries zl_q_rescale(const ZLaurentSeries& a, long m) {
    ZLaurentSeries r;
    r.min_exp = a.min_exp;
    r.max_exp = a.max_exp;
    for (const auto& [d, s] : a.terms) r.terms.emplace(d, qs_rescale(s, m));
    return r;
}

ZLaurentSeries zl_truncate_z(const ZLaurentSeries& a, int min_exp, int max_exp) {
    ZLaurentSeries r;
    r.min_exp = std::max(a.min_exp, min_exp);
    r.max_exp = std::min(a.max_exp, max_exp);
    for (const auto& [d, s] : a.terms)
        if (d >= r.min_exp && d <= r.max_exp) r.terms.emplace(d, s);
    return r;
}

ZlComparison zl_compare(const ZLaurentSeries& a, const ZLaurentSeries& b) {
    int lo = std::max(a.min_exp, b.min_exp);
    int hi = std::min(a.max_exp, b.max_exp);
    for (int d = lo; d <= hi; ++d) {
        SeriesComparison c = qs_compare(a.coeff(d), b.coeff(d));
        if (!c.comparable || !c.equal) return {false, d};
    }
    return {true, 0};
}

ZlEvalResult zl_eval(const ZLaurentSeries& a, std::complex<double> z,
                     std::complex<double> tau, double min_im) {
    ZlEvalResult r{0.0, 0.0};
    for (const auto& [d, s] : a.terms) {
        EvalResult e = qs_eval(s, tau, min_im);
        double zfac = std::abs(ipow(z, d));
        r.value += e.value * ipow(z, d);
        r.tail_estimate += e.tail_estimate * zfac;
    }
    return r;
}

namespace {

ZLaurentSeries kernel_series(long m, int z_order, int q_order, EisKind kind) {
    if (m < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (q_order < 1) throw std::invalid_argument("q-order must be positive");
    if (z_order < -(int)(m + 1))
        throw std::invalid_argument("z-order below the pole term");
    ZLaurentSeries r;
    r.min_exp = -(int)(m + 1);
    r.max_exp = z_order;
    Rational pole = rat(m % 2 == 0 ? -1 : 1) * Rational(factorial(m));
    r.terms.emplace(r.min_exp, QSeries::monomial(rat(0), pole, q_order));
    for (long k = 1; 2 * k - 1 - m <= z_order; ++k) {
        if (2 * k - 1 < m) continue;
        Rational c = Rational(factorial(m)) * Rational(binom(2 * k - 1, m));
        const QSeries& e = kind == EisKind::E ? eisenstein_e(2 * k, q_order)
                                              : eisenstein_f(2 * k, q_order);
        QSeries coeffq = qs_scale(e, c);
        if (!coeffq.is_zero()) r.terms.emplace((int)(2 * k - 1 - m), coeffq);
    }
    return r;
}

using Cx = std::complex<double>;

// 1/(e^y - 1), guarding against the poles y in 2 pi i Z.
Cx recip_expm1(Cx y) {
    Cx e = std::exp(y);
    Cx d = e - 1.0;
    if (std::abs(d) < 1e-12 * std::max(1.0, std::abs(e)))
        throw std::domain_error("evaluation point too close to a pole");
    return 1.0 / d;
}

// Coefficients of the m-th derivative of g(y) = 1/(e^y - 1) as a polynomial
// in g: g^(m) = sum_j rows[m][j] g^j, from g' = -(g + g^2).
std::vector<std::vector<double>> g_derivative_rows(long m) {
    std::vector<std::vector<double>> rows(m + 1);
    rows[0] = {0.0, 1.0};
    for (long s = 0; s < m; ++s) {
        const auto& cur = rows[s];
        std::vector<double> next(cur.size() + 1, 0.0);
        for (std::size_t j = 1; j < cur.size(); ++j) {
            next[j] += -(double)j * cur[j];
            next[j + 1] += -(double)j * cur[j];
        }
        rows[s + 1] = std::move(next);
    }
    return rows;
}

// S_m(x): m-th derivative of the regularized sum of e^{nx} over n >= 1,
// i.e. of e^x / (1 - e^x) = -1 - g(x).
Cx s_sum(const std::vector<double>& row, Cx x, bool base) {
    Cx g = recip_expm1(x);
    Cx acc = 0.0;
    Cx p = 1.0;
    for (std::size_t j = 1; j < row.size(); ++j) {
        p *= g;
        acc += row[j] * p;
    }
    acc = -acc;
    if (base) acc -= 1.0;
    return acc;
}

EllipticEval lambert_eval(Cx z, Cx tau, long m, int n_max, bool twisted) {
    if (m < 0) throw std::invalid_argument("derivative order must be >= 0");
    if (n_max < 1) throw std::invalid_argument("n_max must be positive");
    if (tau.imag() <= 0.0)
        throw std::invalid_argument("tau must lie in the upper half-plane");
    auto rows = g_derivative_rows(m);
    const auto& row = rows[m];
    bool base = (m == 0);
    Cx w = 2.0 * M_PI * Cx(-tau.imag(), tau.real());  // 2 pi i tau
    double sgn_m = (m % 2 == 0) ? 1.0 : -1.0;
    Cx total = s_sum(row, z, base);
    if (m == 0) total += 0.5;
    double last = 0.0;
    for (int l = 1; l <= n_max; ++l) {
        // base=false: for m = 0 the two -1 constants of S_0 cancel in the
        // difference, so only the g-parts are needed.
        Cx term = s_sum(row, z + (double)l * w, false) -
                  sgn_m * s_sum(row, -z + (double)l * w, false);
        double s = twisted ? (l % 2 == 0 ? 1.0 : -1.0) : 1.0;
        total += s * term;
        last = std::abs(term);
    }
    double rho = std::exp(-2.0 * M_PI * tau.imag());
    double tail = last * rho / (1.0 - rho);
    return {total, tail};
}

}  // namespace

ZLaurentSeries p1_series(long m, int z_order, int q_order) {
    return kernel_series(m, z_order, q_order, EisKind::E);
}

ZLaurentSeries q1_series(long m, int z_order, int q_order) {
    return kernel_series(m, z_order, q_order, EisKind::F);
}

EllipticEval p1_lambert_eval(std::complex<double> z, std::complex<double> tau,
                             long m, int n_max) {
    return lambert_eval(z, tau, m, n_max, false);
}

EllipticEval q1_lambert_eval(std::complex<double> z, std::complex<double> tau,
                             long m, int n_max) {
    return lambert_eval(z, tau, m, n_max, true);
}

}  // namespace voatrace
