#include "voatrace/modforms.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "voatrace/lattice.hpp"

namespace voatrace {

Algebra algebra_parse(const std::string& name) {
    if (name == "M") return Algebra::M;
    if (name == "M+") return Algebra::MPlus;
    if (name == "M-") return Algebra::MMinus;
    if (name == "VL") return Algebra::VL;
    if (name == "VL+") return Algebra::VLPlus;
    throw std::invalid_argument("unknown algebra: " + name);
}

std::string algebra_name(Algebra a) {
    switch (a) {
        case Algebra::M: return "M";
        case Algebra::MPlus: return "M+";
        case Algebra::MMinus: return "M-";
        case Algebra::VL: return "VL";
        case Algebra::VLPlus: return "VL+";
    }
    throw std::logic_error("bad algebra tag");
}

Rational bernoulli(long k) {
    if (k < 0) throw std::invalid_argument("bernoulli index must be >= 0");
    static std::mutex mu;
    static std::vector<Rational> cache{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    for (long m = static_cast<long>(cache.size()); m <= k; ++m) {
        // sum_{j<=m} C(m+1, j) B_j = 0 for m >= 1
        Rational s = 0;
        for (long j = 0; j < m; ++j) s += Rational(binom(m + 1, j)) * cache[static_cast<size_t>(j)];
        cache.push_back(Rational(-s / binom(m + 1, m)));
    }
    return cache[static_cast<size_t>(k)];
}

namespace {

Integer sigma(long k, long n) {
    Integer s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) {
            Integer p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d),
                          static_cast<unsigned long>(k));
            s += p;
        }
    return s;
}

// Series cache; all callers funnel through here so repeated recursion steps
// reuse one expansion per (kind, weight, order).
std::mutex cache_mu;
std::map<std::tuple<int, long, int>, QSeries> series_cache;

QSeries cached(int kind, long k, int order, const std::function<QSeries()>& make) {
    auto key = std::make_tuple(kind, k, order);
    {
        std::lock_guard<std::mutex> lock(cache_mu);
        auto it = series_cache.find(key);
        if (it != series_cache.end()) return it->second;
    }
    // Computed outside the lock: make() may reenter for other cache entries.
    QSeries s = make();
    std::lock_guard<std::mutex> lock(cache_mu);
    return series_cache.emplace(key, std::move(s)).first->second;
}

}  // namespace

QSeries eisenstein_e(long k, int order) {
    if (k < 1) throw std::invalid_argument("eisenstein weight must be >= 1");
    if (order < 1) throw std::invalid_argument("series order must be positive");
    if (k % 2 == 1) return QSeries::zero();
    return cached(0, k, order, [&] {
        std::vector<Rational> cs(static_cast<size_t>(order));
        cs[0] = -bernoulli(k) / factorial(k);
        Rational c = Rational(2) / factorial(k - 1);
        for (long n = 1; n < order; ++n) cs[static_cast<size_t>(n)] = c * sigma(k - 1, n);
        return QSeries(0, std::move(cs));
    });
}

QSeries eisenstein_f(long k, int order) {
    if (k % 2 == 1) return QSeries::zero();
    return cached(1, k, order, [&] {
        QSeries e = eisenstein_e(k, order);
        return qs_truncate(qs_sub(qs_scale(qs_rescale(e, 2), 2), e), order);
    });
}

QSeries eisenstein_hat(EisKind kind, long m, long n, int order) {
    if (m < 1 || n < 1) throw std::invalid_argument("hat indices must be >= 1");
    QSeries base = kind == EisKind::E ? eisenstein_e(m + n, order) : eisenstein_f(m + n, order);
    Rational mult = Rational(((n % 2 == 0) ? -1 : 1) * n) * binom(m + n - 1, n);
    return qs_scale(base, mult);
}

QSeries eta_series(int order) {
    if (order < 1) throw std::invalid_argument("series order must be positive");
    return cached(2, 0, order, [&] {
        QSeries acc = QSeries::one(order);
        for (int n = 1; n < order; ++n) {
            std::vector<Rational> f(static_cast<size_t>(order), Rational(0));
            f[0] = 1;
            f[static_cast<size_t>(n)] = -1;
            acc = qs_mul(acc, QSeries(0, std::move(f)));
        }
        return qs_shift(acc, rat(1, 24));
    });
}

QSeries eta_quotient(const std::vector<EtaFactor>& factors, int order) {
    QSeries acc = QSeries::one(order);
    for (const auto& f : factors) {
        if (f.scale < 1) throw std::invalid_argument("eta scale must be >= 1");
        // Rescaling an order-n expansion yields order scale*n >= order.
        QSeries piece = qs_pow(qs_rescale(eta_series(order), f.scale), f.power);
        acc = qs_mul(acc, qs_truncate(piece, order));
    }
    return acc;
}

QSeries character(Algebra a, int rank, const EvenLattice* L, int order) {
    if (L != nullptr) rank = L->rank;
    if (rank < 1) throw std::invalid_argument("rank must be >= 1");
    switch (a) {
        case Algebra::M:
            return eta_quotient({{1, -rank}}, order);
        case Algebra::MPlus:
        case Algebra::MMinus: {
            QSeries half = qs_scale(eta_quotient({{1, -rank}}, order), rat(1, 2));
            QSeries alt = qs_scale(eta_quotient({{1, rank}, {2, -rank}}, order), rat(1, 2));
            return a == Algebra::MPlus ? qs_add(half, alt) : qs_sub(half, alt);
        }
        case Algebra::VL: {
            if (L == nullptr) throw std::invalid_argument("lattice required for VL character");
            return qs_truncate(qs_mul(theta_series(*L, order), eta_quotient({{1, -rank}}, order)),
                               order);
        }
        case Algebra::VLPlus: {
            if (L == nullptr) throw std::invalid_argument("lattice required for VL+ character");
            QSeries zvl = character(Algebra::VL, rank, L, order);
            QSeries alt = eta_quotient({{1, rank}, {2, -rank}}, order);
            return qs_scale(qs_add(zvl, alt), rat(1, 2));
        }
    }
    throw std::logic_error("bad algebra tag");
}

}  // namespace voatrace
