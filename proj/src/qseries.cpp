#include "voatrace/qseries.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace voatrace {

QSeries::QSeries(Rational lead, std::vector<Rational> coeffs)
    : lead_(std::move(lead)), coeffs_(std::move(coeffs)) {
    size_t skip = 0;
    while (skip < coeffs_.size() && coeffs_[skip] == 0) ++skip;
    if (skip == coeffs_.size()) {
        coeffs_.clear();
        lead_ = 0;
        return;
    }
    if (skip > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(skip));
        lead_ += static_cast<long>(skip);
    }
}

QSeries QSeries::one(int order) { return monomial(0, 1, order); }

QSeries QSeries::monomial(const Rational& exp, const Rational& c, int order) {
    if (order < 1) throw std::invalid_argument("series order must be positive");
    if (c == 0) return zero();
    std::vector<Rational> cs(static_cast<size_t>(order), Rational(0));
    cs[0] = c;
    return QSeries(exp, std::move(cs));
}

Rational QSeries::coeff_at(const Rational& exp) const {
    if (is_zero()) return 0;
    if (exp < lead_) return 0;
    if (exp >= known_bound()) throw std::out_of_range("exponent beyond known range");
    Rational off = exp - lead_;
    if (!rat_is_integer(off)) return 0;  // off the exponent grid
    return coeffs_[static_cast<size_t>(rat_to_long(off))];
}

QSeries qs_neg(const QSeries& a) { return qs_scale(a, -1); }

QSeries qs_scale(const QSeries& a, const Rational& c) {
    if (a.is_zero() || c == 0) return QSeries::zero();
    std::vector<Rational> cs = a.coeffs();
    for (auto& x : cs) x *= c;
    return QSeries(a.lead_exp(), std::move(cs));
}

QSeries qs_shift(const QSeries& a, const Rational& d) {
    if (a.is_zero()) return a;
    return QSeries(Rational(a.lead_exp() + d), a.coeffs());
}

QSeries qs_add(const QSeries& a, const QSeries& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Rational diff = b.lead_exp() - a.lead_exp();
    if (!rat_is_integer(diff))
        throw std::domain_error("cannot add series on incompatible exponent grids");
    Rational lo = std::min(a.lead_exp(), b.lead_exp());
    Rational hi = std::min(a.known_bound(), b.known_bound());
    long len = rat_to_long(Rational(hi - lo));
    std::vector<Rational> cs(static_cast<size_t>(len), Rational(0));
    auto accumulate = [&](const QSeries& s) {
        long base = rat_to_long(Rational(s.lead_exp() - lo));
        for (long i = 0; i < s.order() && base + i < len; ++i) {
            cs[static_cast<size_t>(base + i)] += s.coeff(static_cast<int>(i));
        }
    };
    accumulate(a);
    accumulate(b);
    return QSeries(lo, std::move(cs));
}

QSeries qs_sub(const QSeries& a, const QSeries& b) { return qs_add(a, qs_neg(b)); }

QSeries qs_mul(const QSeries& a, const QSeries& b) {
    if (a.is_zero() || b.is_zero()) return QSeries::zero();
    int n = std::min(a.order(), b.order());
    std::vector<Rational> cs(static_cast<size_t>(n), Rational(0));
    for (int i = 0; i < n; ++i) {
        if (a.coeff(i) == 0) continue;
        for (int j = 0; i + j < n; ++j) {
            if (b.coeff(j) == 0) continue;
            cs[static_cast<size_t>(i + j)] += a.coeff(i) * b.coeff(j);
        }
    }
    return QSeries(Rational(a.lead_exp() + b.lead_exp()), std::move(cs));
}

QSeries qs_inv(const QSeries& a) {
    if (a.is_zero()) throw std::domain_error("cannot invert the zero series");
    int n = a.order();
    std::vector<Rational> cs(static_cast<size_t>(n), Rational(0));
    Rational lead_inv = 1 / a.coeff(0);
    cs[0] = lead_inv;
    for (int k = 1; k < n; ++k) {
        Rational s = 0;
        for (int i = 1; i <= k; ++i) s += a.coeff(i) * cs[static_cast<size_t>(k - i)];
        cs[static_cast<size_t>(k)] = -lead_inv * s;
    }
    return QSeries(Rational(-a.lead_exp()), std::move(cs));
}

QSeries qs_pow(const QSeries& a, long r) {
    if (a.is_zero()) {
        if (r > 0) return QSeries::zero();
        if (r == 0) return QSeries::one(1);
        throw std::domain_error("cannot invert the zero series");
    }
    if (r == 0) return QSeries::one(a.order());
    QSeries base = r < 0 ? qs_inv(a) : a;
    long n = r < 0 ? -r : r;
    QSeries acc = QSeries::one(a.order());
    while (n > 0) {
        if (n & 1) acc = qs_mul(acc, base);
        if (n >>= 1) base = qs_mul(base, base);
    }
    return acc;
}

QSeries qs_rescale(const QSeries& a, long m) {
    if (m < 1) throw std::invalid_argument("rescale factor must be >= 1");
    if (a.is_zero() || m == 1) return a;
    std::vector<Rational> cs(static_cast<size_t>(m * a.order()), Rational(0));
    for (int i = 0; i < a.order(); ++i) cs[static_cast<size_t>(m * i)] = a.coeff(i);
    return QSeries(Rational(a.lead_exp() * m), std::move(cs));
}

QSeries qs_truncate(const QSeries& a, int n) {
    if (n < 1) throw std::invalid_argument("truncation order must be positive");
    if (a.is_zero() || n >= a.order()) return a;
    std::vector<Rational> cs(a.coeffs().begin(), a.coeffs().begin() + n);
    return QSeries(a.lead_exp(), std::move(cs));
}

EvalResult qs_eval(const QSeries& a, std::complex<double> tau, double min_im) {
    if (tau.imag() < min_im)
        throw std::domain_error("evaluation point too close to the real axis");
    if (a.is_zero()) return {0.0, 0.0};
    const std::complex<double> two_pi_i(0.0, 2.0 * M_PI);
    std::complex<double> q = std::exp(two_pi_i * tau);
    // q^lead as exp(2 pi i tau lead): single-valued in tau, no branch cut.
    std::complex<double> term = std::exp(two_pi_i * tau * a.lead_exp().get_d());
    std::complex<double> sum = 0.0;
    double last = 0.0;
    for (int i = 0; i < a.order(); ++i) {
        std::complex<double> t = a.coeff(i).get_d() * term;
        sum += t;
        last = std::abs(t);
        term *= q;
    }
    return {sum, last};
}

SeriesComparison qs_compare(const QSeries& a, const QSeries& b) {
    SeriesComparison r;
    if (a.is_zero() && b.is_zero()) {
        r.equal = true;
        return r;
    }
    if (a.is_zero() || b.is_zero()) {
        const QSeries& nz = a.is_zero() ? b : a;
        r.first_mismatch = nz.lead_exp();
        return r;
    }
    Rational diff = b.lead_exp() - a.lead_exp();
    if (diff != 0 && !rat_is_integer(diff)) {
        r.first_mismatch = std::min(a.lead_exp(), b.lead_exp());
        return r;
    }
    if (a.lead_exp() != b.lead_exp()) {
        // Normalized leads: the earlier series has a nonzero coefficient where
        // the other is known to vanish.
        r.first_mismatch = std::min(a.lead_exp(), b.lead_exp());
        return r;
    }
    long shared = rat_to_long(Rational(std::min(a.known_bound(), b.known_bound()) - a.lead_exp()));
    if (shared <= 0) {
        r.comparable = false;
        return r;
    }
    r.shared_order = static_cast<int>(shared);
    for (long i = 0; i < shared; ++i) {
        if (a.coeff(static_cast<int>(i)) != b.coeff(static_cast<int>(i))) {
            r.first_mismatch = Rational(a.lead_exp() + i);
            return r;
        }
    }
    r.equal = true;
    return r;
}

std::string qs_to_json(const QSeries& a) {
    nlohmann::json j;
    j["lead_exp"] = rat_str(a.lead_exp());
    std::vector<std::string> cs;
    cs.reserve(static_cast<size_t>(a.order()));
    for (const auto& c : a.coeffs()) cs.push_back(rat_str(c));
    j["coeffs"] = cs;
    j["order"] = a.order();
    return j.dump();
}

QSeries qs_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("bad series JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("lead_exp") || !j.contains("coeffs"))
        throw std::invalid_argument("series JSON must carry lead_exp and coeffs");
    Rational lead = rat_parse(j.at("lead_exp").get<std::string>());
    std::vector<Rational> cs;
    for (const auto& c : j.at("coeffs")) cs.push_back(rat_parse(c.get<std::string>()));
    if (j.contains("order") && j.at("order").get<long>() != static_cast<long>(cs.size()))
        throw std::invalid_argument("series JSON order disagrees with coefficient count");
    return QSeries(std::move(lead), std::move(cs));
}

}  // namespace voatrace
