#pragma once

#include <complex>
#include <map>

#include "voatrace/qseries.hpp"

namespace voatrace {

// Laurent polynomial in z with QSeries coefficients.  Exponents outside
// [min_exp, max_exp] are unknown; absent entries inside the range are zero.
struct ZLaurentSeries {
    std::map<int, QSeries> terms;
    int min_exp = 0;
    int max_exp = -1;  // empty range until populated

    const QSeries& coeff(int d) const;  // throws outside the known range
};

ZLaurentSeries zl_make(std::map<int, QSeries> terms, int min_exp, int max_exp);
ZLaurentSeries zl_add(const ZLaurentSeries& a, const ZLaurentSeries& b);
ZLaurentSeries zl_sub(const ZLaurentSeries& a, const ZLaurentSeries& b);
ZLaurentSeries zl_scale(const ZLaurentSeries& a, const Rational& c);
// Formal d/dz.
ZLaurentSeries zl_z_derivative(const ZLaurentSeries& a);
// tau -> m*tau on every coefficient.
ZLaurentSeries zl_q_rescale(const ZLaurentSeries& a, long m);
ZLaurentSeries zl_truncate_z(const ZLaurentSeries& a, int min_exp, int max_exp);

struct ZlComparison {
    bool equal;
    int first_mismatch_exp;  // z-exponent of first differing coefficient
};
// Compares over the intersection of the known z-ranges, each coefficient to
// its shared q-order.
ZlComparison zl_compare(const ZLaurentSeries& a, const ZLaurentSeries& b);

struct ZlEvalResult {
    std::complex<double> value;
    double tail_estimate;  // accumulated q-tail bounds, weighted by |z|^d
};
ZlEvalResult zl_eval(const ZLaurentSeries& a, std::complex<double> z,
                     std::complex<double> tau, double min_im = 0.5);

// m-th z-derivative of the genus-one kernel P1 as a Laurent series:
//   (-1)^{m+1} m! z^{-m-1} + sum_{2k-1 >= m} m! C(2k-1,m) E_{2k}(tau) z^{2k-1-m}
// with z-exponents up to z_order and coefficients to q-order q_order.
ZLaurentSeries p1_series(long m, int z_order, int q_order);
// Twisted analogue: E_{2k} replaced by F_{2k} = 2 E_{2k}(2 tau) - E_{2k}(tau).
ZLaurentSeries q1_series(long m, int z_order, int q_order);

struct EllipticEval {
    std::complex<double> value;
    double tail_estimate;
};
// Numeric evaluation of the m-th derivative of P1 (resp. Q1) by resumming the
// Fourier expansion into closed-form exponential sums; valid for any z off the
// period lattice, n_max terms of the geometric tail.
EllipticEval p1_lambert_eval(std::complex<double> z, std::complex<double> tau,
                             long m, int n_max = 60);
EllipticEval q1_lambert_eval(std::complex<double> z, std::complex<double> tau,
                             long m, int n_max = 60);

}  // namespace voatrace
