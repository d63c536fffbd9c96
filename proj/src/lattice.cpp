#include "voatrace/lattice.hpp"

#include <stdexcept>

#include "json.hpp"
#include "voatrace/modforms.hpp"

namespace voatrace {

namespace {

// Exact inverse Gram matrix by Gauss-Jordan elimination over the rationals.
std::vector<std::vector<Rational>> gram_inverse(const EvenLattice& L) {
    int k = L.rank;
    std::vector<std::vector<Rational>> a(static_cast<size_t>(k),
                                         std::vector<Rational>(static_cast<size_t>(2 * k), Rational(0)));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) a[i][j] = L.gram[i][j];
        a[i][static_cast<size_t>(k + i)] = 1;
    }
    for (int col = 0; col < k; ++col) {
        int piv = -1;
        for (int r = col; r < k; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) throw std::domain_error("gram matrix is singular");
        std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(piv)]);
        Rational d = a[col][col];
        for (int j = 0; j < 2 * k; ++j) a[col][j] /= d;
        for (int r = 0; r < k; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (int j = 0; j < 2 * k; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::vector<std::vector<Rational>> inv(static_cast<size_t>(k),
                                           std::vector<Rational>(static_cast<size_t>(k)));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) inv[i][j] = a[i][static_cast<size_t>(k + j)];
    return inv;
}

Rational leading_minor(const EvenLattice& L, int m) {
    std::vector<std::vector<Rational>> a(static_cast<size_t>(m),
                                         std::vector<Rational>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a[i][j] = L.gram[i][j];
    Rational det = 1;
    for (int col = 0; col < m; ++col) {
        int piv = -1;
        for (int r = col; r < m; ++r)
            if (a[r][col] != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(a[static_cast<size_t>(col)], a[static_cast<size_t>(piv)]);
            det = -det;
        }
        det *= a[col][col];
        Rational d = a[col][col];
        for (int j = col; j < m; ++j) a[col][j] /= d;
        for (int r = col + 1; r < m; ++r) {
            if (a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (int j = col; j < m; ++j) a[r][j] -= f * a[col][j];
        }
    }
    return det;
}

}  // namespace

EvenLattice lattice_make(std::vector<std::vector<long>> gram) {
    EvenLattice L;
    L.rank = static_cast<int>(gram.size());
    if (L.rank == 0) throw std::invalid_argument("empty gram matrix");
    for (const auto& row : gram)
        if (static_cast<int>(row.size()) != L.rank)
            throw std::invalid_argument("gram matrix is not square");
    for (int i = 0; i < L.rank; ++i) {
        if (gram[static_cast<size_t>(i)][static_cast<size_t>(i)] % 2 != 0)
            throw std::invalid_argument("gram diagonal must be even");
        for (int j = 0; j < i; ++j)
            if (gram[static_cast<size_t>(i)][static_cast<size_t>(j)] !=
                gram[static_cast<size_t>(j)][static_cast<size_t>(i)])
                throw std::invalid_argument("gram matrix must be symmetric");
    }
    L.gram = std::move(gram);
    for (int m = 1; m <= L.rank; ++m)
        if (leading_minor(L, m) <= 0)
            throw std::invalid_argument("gram matrix must be positive definite");
    return L;
}

EvenLattice lattice_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("bad lattice JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("gram"))
        throw std::invalid_argument("lattice JSON must carry a gram matrix");
    std::vector<std::vector<long>> gram;
    for (const auto& row : j.at("gram")) {
        std::vector<long> r;
        for (const auto& x : row) {
            if (!x.is_number_integer()) throw std::invalid_argument("gram entries must be integers");
            r.push_back(x.get<long>());
        }
        gram.push_back(std::move(r));
    }
    EvenLattice L = lattice_make(std::move(gram));
    if (j.contains("rank") && j.at("rank").get<int>() != L.rank)
        throw std::invalid_argument("lattice JSON rank disagrees with gram size");
    return L;
}

std::string lattice_to_json(const EvenLattice& L) {
    nlohmann::json j;
    j["rank"] = L.rank;
    j["gram"] = L.gram;
    return j.dump();
}

long vec_norm(const EvenLattice& L, const std::vector<long>& alpha) {
    long s = 0;
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j)
            s += alpha[static_cast<size_t>(i)] * L.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                 alpha[static_cast<size_t>(j)];
    return s;
}

Rational pair_vec(const EvenLattice& L, const std::vector<Rational>& v,
                  const std::vector<long>& alpha) {
    Rational s = 0;
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j)
            s += v[static_cast<size_t>(i)] *
                 Rational(L.gram[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                          alpha[static_cast<size_t>(j)]);
    return s;
}

Rational pair_rr(const EvenLattice& L, const std::vector<Rational>& v,
                 const std::vector<Rational>& w) {
    Rational s = 0;
    for (int i = 0; i < L.rank; ++i)
        for (int j = 0; j < L.rank; ++j)
            s += v[static_cast<size_t>(i)] * Rational(L.gram[static_cast<size_t>(i)][static_cast<size_t>(j)]) *
                 w[static_cast<size_t>(j)];
    return s;
}

bool in_double_lattice(const std::vector<long>& alpha) {
    for (long c : alpha)
        if (c % 2 != 0) return false;
    return true;
}

long lattice_level(const EvenLattice& L) {
    auto inv = gram_inverse(L);
    Integer lcm = 1;
    for (const auto& row : inv)
        for (const auto& x : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
    long bound = 2 * lcm.get_si();
    for (long n = 1; n <= bound; ++n) {
        bool ok = true;
        for (int i = 0; i < L.rank && ok; ++i)
            for (int j = 0; j < L.rank && ok; ++j) {
                Rational x = n * inv[static_cast<size_t>(i)][static_cast<size_t>(j)];
                if (!rat_is_integer(x)) ok = false;
                else if (i == j && rat_to_long(x) % 2 != 0) ok = false;
            }
        if (ok) return n;
    }
    throw std::logic_error("level scan failed");
}

std::vector<std::vector<long>> enumerate_vectors(const EvenLattice& L, long max_norm) {
    if (max_norm < 0) return {};
    auto inv = gram_inverse(L);
    std::vector<long> bound(static_cast<size_t>(L.rank));
    for (int i = 0; i < L.rank; ++i) {
        // x_i^2 <= max_norm * (G^{-1})_ii for x in the ellipsoid.
        Rational r = max_norm * inv[static_cast<size_t>(i)][static_cast<size_t>(i)];
        Integer f = r.get_num() / r.get_den();
        Integer s;
        mpz_sqrt(s.get_mpz_t(), f.get_mpz_t());
        bound[static_cast<size_t>(i)] = s.get_si();
    }
    std::vector<std::vector<long>> out;
    std::vector<long> cur(static_cast<size_t>(L.rank));
    std::function<void(int)> rec = [&](int i) {
        if (i == L.rank) {
            if (vec_norm(L, cur) <= max_norm) out.push_back(cur);
            return;
        }
        for (long x = -bound[static_cast<size_t>(i)]; x <= bound[static_cast<size_t>(i)]; ++x) {
            cur[static_cast<size_t>(i)] = x;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

QSeries theta_series(const EvenLattice& L, int order) {
    return theta_weighted(L, [](const std::vector<long>&) { return Rational(1); }, order);
}

QSeries theta_vm(const EvenLattice& L, const std::vector<Rational>& v, long m, int order) {
    if (m < 0) throw std::invalid_argument("theta moment must be >= 0");
    return theta_weighted(
        L, [&](const std::vector<long>& alpha) { return rat_pow(pair_vec(L, v, alpha), m); },
        order);
}

QSeries theta_weighted(const EvenLattice& L,
                       const std::function<Rational(const std::vector<long>&)>& P,
                       int order) {
    if (order < 1) throw std::invalid_argument("series order must be positive");
    std::vector<Rational> cs(static_cast<size_t>(order), Rational(0));
    for (const auto& alpha : enumerate_vectors(L, 2 * (order - 1)))
        cs[static_cast<size_t>(vec_norm(L, alpha) / 2)] += P(alpha);
    return QSeries(0, std::move(cs));
}

JacobiLikeForm jl_theta(const EvenLattice& L, const std::vector<Rational>& v,
                        int x_order, int q_order) {
    JacobiLikeForm f;
    f.weight = rat(L.rank, 2);
    f.index = pair_rr(L, v, v);
    Rational c = 1;  // 2^m / (2m)!
    for (int m = 0; m < x_order; ++m) {
        if (m > 0) c *= Rational(2) / ((2 * m - 1) * 2 * m);
        f.phi.push_back(qs_scale(theta_vm(L, v, 2 * m, q_order), c));
    }
    return f;
}

JacobiLikeForm jl_e2exp(int sign, int x_order, int q_order) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    JacobiLikeForm f;
    f.weight = 0;
    f.index = sign;
    QSeries e2 = qs_scale(eisenstein_e(2, q_order), sign);
    QSeries acc = QSeries::one(q_order);
    Rational inv_fact = 1;
    for (int n = 0; n < x_order; ++n) {
        if (n > 0) {
            acc = qs_mul(acc, e2);
            inv_fact /= n;
        }
        f.phi.push_back(qs_scale(acc, inv_fact));
    }
    return f;
}

JacobiLikeForm jl_mul(const JacobiLikeForm& a, const JacobiLikeForm& b) {
    JacobiLikeForm f;
    f.weight = a.weight + b.weight;
    f.index = a.index + b.index;
    int n = std::min(a.x_order(), b.x_order());
    for (int m = 0; m < n; ++m) {
        QSeries s = QSeries::zero();
        for (int i = 0; i <= m; ++i)
            s = qs_add(s, qs_mul(a.phi[static_cast<size_t>(i)], b.phi[static_cast<size_t>(m - i)]));
        f.phi.push_back(s);
    }
    return f;
}

}  // namespace voatrace
