#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "voatrace/rational.hpp"

namespace voatrace {

// Truncated q-expansion
//
//     q^lead * (c[0] + c[1] q + ... + c[order-1] q^{order-1})
//
// with exact rational lead exponent (typically with denominator 24) and exact
// rational coefficients.  "order" is the number of coefficients actually
// known; every arithmetic operation propagates the worst-case reliable order
// of its result.  Exponents below lead are known to be zero.
//
// Invariant: c[0] != 0, or the series is the canonical zero (no coefficients,
// lead 0), which stands for the identically vanishing series.  Full
// cancellation in a sum therefore collapses to the canonical zero.
class QSeries {
public:
    QSeries() : lead_(0) {}
    QSeries(Rational lead, std::vector<Rational> coeffs);

    static QSeries zero() { return QSeries(); }
    // The constant 1 known to the given number of coefficients.
    static QSeries one(int order);
    // c * q^exp with the coefficients up to q^{exp+order-1} known.
    static QSeries monomial(const Rational& exp, const Rational& c, int order);

    bool is_zero() const { return coeffs_.empty(); }
    const Rational& lead_exp() const { return lead_; }
    int order() const { return static_cast<int>(coeffs_.size()); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& coeff(int i) const { return coeffs_.at(static_cast<size_t>(i)); }

    // First exponent beyond the known range (lead + order).
    Rational known_bound() const { return Rational(lead_ + order()); }

    // Coefficient at an absolute exponent.  Returns 0 below the lead or off
    // the exponent grid; throws std::out_of_range past the known range.
    Rational coeff_at(const Rational& exp) const;

private:
    Rational lead_;
    std::vector<Rational> coeffs_;
};

QSeries qs_neg(const QSeries& a);
QSeries qs_scale(const QSeries& a, const Rational& c);
// Multiplies by the exact monomial q^d (does not consume precision).
QSeries qs_shift(const QSeries& a, const Rational& d);
// Coefficientwise sum aligned by absolute exponent; the operands must live on
// compatible exponent grids (lead exponents differing by an integer).
QSeries qs_add(const QSeries& a, const QSeries& b);
QSeries qs_sub(const QSeries& a, const QSeries& b);
// Cauchy product; the result order is the minimum of the input orders.
QSeries qs_mul(const QSeries& a, const QSeries& b);
// Multiplicative inverse; requires a nonzero series.
QSeries qs_inv(const QSeries& a);
// Integer power, negative exponents via inversion.
QSeries qs_pow(const QSeries& a, long r);
// Substitution q -> q^m (i.e. tau -> m tau), m >= 1; gaps fill with known
// zeros, so the result order is m times the input order.
QSeries qs_rescale(const QSeries& a, long m);
// Restricts the known range to at most n coefficients (n >= 1).
QSeries qs_truncate(const QSeries& a, int n);

struct EvalResult {
    std::complex<double> value;
    double tail_estimate;  // modulus of the last included term
};

// Numeric evaluation at q = exp(2 pi i tau), with q^lead taken as
// exp(2 pi i tau lead).  Requires Im(tau) >= min_im.
EvalResult qs_eval(const QSeries& a, std::complex<double> tau, double min_im = 0.5);

struct SeriesComparison {
    bool comparable = true;  // false only when there is no shared known range
    bool equal = false;      // coefficients agree on the whole shared range
    int shared_order = 0;    // number of coefficients compared
    std::optional<Rational> first_mismatch;  // exponent of the first difference
};

// Equality to shared order: compares on the intersection of the known ranges,
// treating the canonical zero as known (and zero) everywhere.
SeriesComparison qs_compare(const QSeries& a, const QSeries& b);

// JSON object {"lead_exp": "p/q", "coeffs": ["a/b", ...], "order": n} with
// decimal-free fraction strings.
std::string qs_to_json(const QSeries& a);
QSeries qs_from_json(const std::string& text);

}  // namespace voatrace
