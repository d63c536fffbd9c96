#include "voatrace/fock.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace voatrace {

namespace {

long osc_weight(const FockKey& k) {
    long w = 0;
    for (const auto& [n, c] : k.modes) w += n;
    return w;
}

long max_osc_weight(const FockVector& x) {
    long w = 0;
    for (const auto& [k, c] : x) w = std::max(w, osc_weight(k));
    return w;
}

bool charge_is_zero(const FockKey& k) {
    return std::all_of(k.alpha.begin(), k.alpha.end(),
                       [](long a) { return a == 0; });
}

// (v, e_col) for every color at once: G v, or v itself when there is no
// lattice (orthonormal colors).
std::vector<Rational> gram_times(const FockContext& ctx,
                                 const std::vector<Rational>& v) {
    if (static_cast<int>(v.size()) != ctx.rank)
        throw std::invalid_argument("vector arity does not match the rank");
    if (!ctx.L) return v;
    std::vector<Rational> r(v.size(), rat(0));
    for (int i = 0; i < ctx.rank; ++i)
        for (int j = 0; j < ctx.rank; ++j)
            r[i] += rat(ctx.L->gram[i][j]) * v[j];
    return r;
}

long pair_ll(const FockContext& ctx, const std::vector<long>& a,
             const std::vector<long>& b) {
    long s = 0;
    for (int i = 0; i < ctx.rank; ++i)
        for (int j = 0; j < ctx.rank; ++j)
            s += a[i] * (ctx.L ? ctx.L->gram[i][j] : (i == j ? 1 : 0)) * b[j];
    return s;
}

std::vector<Rational> unit_vec(int rank, int color) {
    std::vector<Rational> v(rank, rat(0));
    v[color] = rat(1);
    return v;
}

void add_term(FockVector& acc, FockKey k, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = acc.emplace(std::move(k), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) acc.erase(it);
    }
}

}  // namespace

Rational fock_pair(const FockContext& ctx, const std::vector<Rational>& v,
                   const std::vector<Rational>& w) {
    auto gw = gram_times(ctx, w);
    if (v.size() != gw.size())
        throw std::invalid_argument("vector arity does not match the rank");
    Rational s = 0;
    for (size_t i = 0; i < v.size(); ++i) s += v[i] * gw[i];
    return s;
}

long fock_weight(const FockContext& ctx, const FockKey& k) {
    long w = osc_weight(k);
    if (!k.alpha.empty()) w += pair_ll(ctx, k.alpha, k.alpha) / 2;
    return w;
}

int fock_parity(const FockKey& k) {
    return static_cast<int>(k.modes.size() % 2);
}

void fock_add_scaled(FockVector& acc, const FockVector& b, const Rational& s) {
    if (s == 0) return;
    for (const auto& [k, c] : b) add_term(acc, k, s * c);
}

Rational mode_transport(long m, long j) {
    if (j < m) return rat(0);
    static std::mutex mu;
    static std::map<std::pair<long, long>, Rational> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({m, j});
        if (it != cache.end()) return it->second;
    }
    Rational value;
    if (j <= -1) {
        // [z^{-m-1}] (e^z-1)^{-j-1} e^z with -j-1 >= 0: plain power series.
        long p = -j - 1, N = -m - 1;  // N >= p here since j >= m
        int ord = static_cast<int>(N) + 1;
        std::vector<Rational> em1(ord), ez(ord);
        for (long t = 0; t < ord; ++t) {
            em1[t] = rat(1) / factorial(t + 1);
            ez[t] = rat(1) / factorial(t);
        }
        QSeries f = qs_mul(qs_pow(QSeries(rat(1), em1), p), QSeries(rat(0), ez));
        value = f.coeff_at(rat(N));
    } else {
        // (e^z-1)^{-j-1} e^z = z^{-j-1} u^{-j-1} e^z with u = (e^z-1)/z, so
        // the z^{-m-1} coefficient is the z^{j-m} coefficient of u^{-j-1} e^z.
        long N = j - m;
        int ord = static_cast<int>(N) + 1;
        std::vector<Rational> uc(ord), ez(ord);
        for (long t = 0; t < ord; ++t) {
            uc[t] = rat(1) / factorial(t + 1);
            ez[t] = rat(1) / factorial(t);
        }
        QSeries f =
            qs_mul(qs_pow(QSeries(rat(0), uc), -(j + 1)), QSeries(rat(0), ez));
        value = f.coeff_at(rat(N));
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(std::make_pair(m, j), value);
    return value;
}

FockVector apply_round_mode(const FockContext& ctx,
                            const std::vector<Rational>& v, long n,
                            const FockVector& x) {
    if (static_cast<int>(v.size()) != ctx.rank)
        throw std::invalid_argument("vector arity does not match the rank");
    FockVector out;
    if (n < 0) {
        for (const auto& [k, c] : x) {
            for (int col = 0; col < ctx.rank; ++col) {
                if (v[col] == 0) continue;
                FockKey nk = k;
                nk.modes.emplace_back(-n, col);
                std::sort(nk.modes.begin(), nk.modes.end());
                add_term(out, std::move(nk), c * v[col]);
            }
        }
    } else if (n > 0) {
        auto gv = gram_times(ctx, v);
        for (const auto& [k, c] : x) {
            for (size_t i = 0; i < k.modes.size(); ++i) {
                if (i > 0 && k.modes[i] == k.modes[i - 1]) continue;
                if (k.modes[i].first != n) continue;
                long mult = 1;
                while (i + mult < k.modes.size() && k.modes[i + mult] == k.modes[i])
                    ++mult;
                Rational coef = c * rat(mult * n) * gv[k.modes[i].second];
                if (coef == 0) continue;
                FockKey nk = k;
                nk.modes.erase(nk.modes.begin() + static_cast<long>(i));
                add_term(out, std::move(nk), coef);
            }
        }
    } else {
        auto gv = gram_times(ctx, v);
        for (const auto& [k, c] : x) {
            if (k.alpha.empty()) continue;
            Rational eig = 0;
            for (int i = 0; i < ctx.rank; ++i) eig += gv[i] * rat(k.alpha[i]);
            add_term(out, k, c * eig);
        }
    }
    return out;
}

FockVector apply_square_mode(const FockContext& ctx,
                             const std::vector<Rational>& v, long n,
                             const FockVector& x) {
    FockVector out;
    if (x.empty()) return out;
    long wmax = max_osc_weight(x);
    // h(j) with j > wmax kills every key; creation rows start at j = n.
    for (long j = n; j <= wmax; ++j) {
        Rational a = mode_transport(n, j);
        if (a == 0) continue;
        fock_add_scaled(out, apply_round_mode(ctx, v, j, x), a);
    }
    return out;
}

FockVector tail_vector(const FockContext& ctx, const BracketWord& w) {
    FockVector out;
    if (w.tail == TailKind::Vacuum) {
        FockKey k;
        if (ctx.L) k.alpha.assign(ctx.rank, 0);
        out.emplace(std::move(k), rat(1));
        return out;
    }
    if (!ctx.L)
        throw std::invalid_argument("charged tails need a lattice context");
    if (static_cast<int>(w.alpha.size()) != ctx.rank)
        throw std::invalid_argument("tail arity does not match the rank");
    FockKey plus, minus;
    plus.alpha = w.alpha;
    minus.alpha = w.alpha;
    for (auto& a : minus.alpha) a = -a;
    switch (w.tail) {
        case TailKind::E:
            out.emplace(std::move(plus), rat(1));
            break;
        case TailKind::F:
            out.emplace(std::move(plus), rat(1));
            out.emplace(std::move(minus), rat(1));
            break;
        case TailKind::G:
            out.emplace(std::move(plus), rat(1));
            out.emplace(std::move(minus), rat(-1));
            break;
        default:
            break;
    }
    return out;
}

FockVector build_square_state(const FockContext& ctx, const BracketWord& w) {
    word_validate(w, ctx.rank);
    FockVector x = tail_vector(ctx, w);
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it)
        x = apply_square_mode(ctx, it->vec, -it->n, x);
    return x;
}

namespace {

// Colored-partition counts of 0..W split by parity of the number of parts.
struct ParityCounts {
    std::vector<long> even, odd;
};

ParityCounts heisenberg_counts(int rank, long W) {
    ParityCounts dp;
    dp.even.assign(static_cast<size_t>(W) + 1, 0);
    dp.odd.assign(static_cast<size_t>(W) + 1, 0);
    dp.even[0] = 1;
    for (long n = 1; n <= W; ++n) {
        for (int color = 0; color < rank; ++color) {
            for (long w = n; w <= W; ++w) {
                long e = dp.even[w] + dp.odd[w - n];
                long o = dp.odd[w] + dp.even[w - n];
                dp.even[w] = e;
                dp.odd[w] = o;
            }
        }
    }
    return dp;
}

bool lex_positive(const std::vector<long>& a) {
    for (long x : a) {
        if (x > 0) return true;
        if (x < 0) return false;
    }
    return false;
}

}  // namespace

std::vector<long> oracle_graded_dims(Algebra a, const FockContext& ctx, long W) {
    if (W < 0) throw std::invalid_argument("weight bound must be >= 0");
    auto dp = heisenberg_counts(ctx.rank, W);
    std::vector<long> out(static_cast<size_t>(W) + 1, 0);
    switch (a) {
        case Algebra::M:
            for (long w = 0; w <= W; ++w) out[w] = dp.even[w] + dp.odd[w];
            return out;
        case Algebra::MPlus:
            return dp.even;
        case Algebra::MMinus:
            return dp.odd;
        default:
            break;
    }
    if (!ctx.L)
        throw std::invalid_argument("lattice algebras need a lattice context");
    for (const auto& beta : enumerate_vectors(*ctx.L, 2 * W)) {
        long s = vec_norm(*ctx.L, beta) / 2;
        if (a == Algebra::VL) {
            for (long w = s; w <= W; ++w)
                out[w] += dp.even[w - s] + dp.odd[w - s];
        } else {  // VLPlus
            if (charge_is_zero(FockKey{{}, beta})) {
                for (long w = 0; w <= W; ++w) out[w] += dp.even[w];
            } else if (lex_positive(beta)) {
                for (long w = s; w <= W; ++w)
                    out[w] += dp.even[w - s] + dp.odd[w - s];
            }
        }
    }
    return out;
}

namespace {

// All oscillator monomials of weight exactly w, parts chosen in nonincreasing
// (n, color) order so each multiset appears once.
void osc_monomials_rec(int rank, long remaining, long max_n, int max_color,
                       std::vector<std::pair<long, int>>& cur,
                       std::vector<std::vector<std::pair<long, int>>>& out) {
    if (remaining == 0) {
        out.push_back(cur);
        return;
    }
    for (long n = std::min(max_n, remaining); n >= 1; --n) {
        int cmax = (n == max_n) ? max_color : rank - 1;
        for (int c = cmax; c >= 0; --c) {
            cur.emplace_back(n, c);
            osc_monomials_rec(rank, remaining - n, n, c, cur, out);
            cur.pop_back();
        }
    }
}

std::vector<std::vector<std::pair<long, int>>> osc_monomials(int rank, long w) {
    std::vector<std::vector<std::pair<long, int>>> out;
    std::vector<std::pair<long, int>> cur;
    osc_monomials_rec(rank, w, w, rank - 1, cur, out);
    for (auto& m : out) std::sort(m.begin(), m.end());
    return out;
}

}  // namespace

std::vector<std::vector<FockKey>> enumerate_basis(Algebra a,
                                                  const FockContext& ctx,
                                                  long W) {
    if (W < 0) throw std::invalid_argument("weight bound must be >= 0");
    std::vector<std::vector<FockKey>> out(static_cast<size_t>(W) + 1);
    bool lattice = (a == Algebra::VL || a == Algebra::VLPlus);
    if (lattice && !ctx.L)
        throw std::invalid_argument("lattice algebras need a lattice context");
    std::vector<std::vector<long>> charges;
    if (lattice)
        charges = enumerate_vectors(*ctx.L, 2 * W);
    else
        charges.push_back({});  // placeholder; keys carry an empty alpha
    for (const auto& beta : charges) {
        long s = lattice ? vec_norm(*ctx.L, beta) / 2 : 0;
        bool zero_charge = !lattice || std::all_of(beta.begin(), beta.end(),
                                                   [](long x) { return x == 0; });
        if (a == Algebra::VLPlus && !zero_charge && !lex_positive(beta))
            continue;  // one representative per {beta, -beta}
        for (long w = s; w <= W; ++w) {
            for (auto& modes : osc_monomials(ctx.rank, w - s)) {
                int parity = static_cast<int>(modes.size() % 2);
                if (a == Algebra::MPlus && parity != 0) continue;
                if (a == Algebra::MMinus && parity != 1) continue;
                if (a == Algebra::VLPlus && zero_charge && parity != 0) continue;
                FockKey k;
                k.modes = std::move(modes);
                if (lattice) k.alpha = beta;
                out[w].push_back(std::move(k));
            }
        }
    }
    for (auto& level : out) std::sort(level.begin(), level.end());
    return out;
}

namespace {

// o of a charge-zero monomial: normal-ordered products over all integer mode
// assignments summing to zero, weighted by the transport binomials.
void zero_mode_neutral(const FockContext& ctx, const FockKey& uk,
                       const Rational& uc, const FockVector& x,
                       FockVector& acc) {
    const auto& fac = uk.modes;
    size_t p = fac.size();
    if (p == 0) {
        fock_add_scaled(acc, x, uc);
        return;
    }
    long amax = max_osc_weight(x);
    std::vector<long> js(p, 0);
    auto apply_assignment = [&](const Rational& coeff) {
        FockVector cur = x;
        // annihilations, then zero modes, then creations
        for (int pass = 0; pass < 3 && !cur.empty(); ++pass) {
            for (size_t t = 0; t < p; ++t) {
                bool want = (pass == 0 && js[t] > 0) || (pass == 1 && js[t] == 0) ||
                            (pass == 2 && js[t] < 0);
                if (!want) continue;
                cur = apply_round_mode(ctx, unit_vec(ctx.rank, fac[t].second),
                                       js[t], cur);
                if (cur.empty()) break;
            }
        }
        fock_add_scaled(acc, cur, uc * coeff);
    };
    // DFS over js with sum 0; allowed j: j >= 0 or j <= -m_t (else the
    // binomial vanishes), and |j| <= amax on both sides.
    auto rec = [&](auto&& self, size_t t, long sum, Rational coeff) -> void {
        if (t == p) {
            if (sum == 0) apply_assignment(coeff);
            return;
        }
        long cap = static_cast<long>(p - 1 - t) * amax;
        for (long j = -amax; j <= amax; ++j) {
            if (j < 0 && j > -fac[t].first) continue;
            if (std::abs(sum + j) > cap) continue;
            Rational b = binom(-j - 1, fac[t].first - 1);
            if (b == 0) continue;
            js[t] = j;
            self(self, t + 1, sum + j, coeff * b);
        }
    };
    rec(rec, 0, 0, rat(1));
}

struct EminusPart {
    long n;
    Rational coeff;  // product of 1/(n^{k} k!) run factors folded in
};

// Partitions of exactly `total`, nonincreasing parts, with the symmetric
// factor 1/(prod n^{k_n} k_n!) accumulated into `coeff`.
void eminus_partitions(long total, long max_part, long last, long run,
                       Rational coeff, std::vector<long>& parts,
                       const std::function<void(const std::vector<long>&,
                                                const Rational&)>& emit) {
    if (total == 0) {
        emit(parts, coeff);
        return;
    }
    for (long n = std::min(max_part, total); n >= 1; --n) {
        Rational c = coeff / rat(n);
        c /= rat(n == last ? run + 1 : 1);
        parts.push_back(n);
        eminus_partitions(total - n, n, n, n == last ? run + 1 : 1, c, parts,
                          emit);
        parts.pop_back();
    }
}

// o of a charged monomial (the lattice vertex operator route), applied to a
// single source key.
void zero_mode_charged(const FockContext& ctx, const FockKey& uk,
                       const Rational& uc, const FockKey& xk,
                       const Rational& xc, FockVector& acc) {
    const auto& gamma = uk.alpha;
    const auto& beta = xk.alpha;
    std::vector<Rational> gamma_rat(gamma.size());
    for (size_t i = 0; i < gamma.size(); ++i) gamma_rat[i] = rat(gamma[i]);
    long s_val = -pair_ll(ctx, gamma, beta) - pair_ll(ctx, gamma, gamma) / 2;
    // cocycle sign for e_gamma acting on charge beta
    long ce = 0;
    for (int i = 0; i < ctx.rank; ++i)
        for (int j = 0; j < i; ++j) ce += gamma[i] * beta[j] * ctx.L->gram[i][j];
    Rational cocycle = rat(ce % 2 == 0 ? 1 : -1);
    std::vector<long> shifted(beta.size());
    for (size_t i = 0; i < beta.size(); ++i) shifted[i] = beta[i] + gamma[i];

    const auto& fac = uk.modes;
    size_t p = fac.size();

    // creations deferred to the end: (n, vector) pairs
    struct Creation {
        long n;
        const std::vector<Rational>* vec;
    };

    // stage C+D for one fully annihilated configuration
    auto finish = [&](const FockVector& cur, const Rational& coeff, long a_total,
                      long aj, long cj,
                      const std::vector<Creation>& factor_creations) {
        long tc = s_val + a_total + aj - cj;
        if (tc < 0) return;
        std::vector<long> parts;
        eminus_partitions(
            tc, tc == 0 ? 1 : tc, 0, 0, rat(1), parts,
            [&](const std::vector<long>& ps, const Rational& pc) {
                FockVector y;
                for (const auto& [k, c] : cur) {
                    FockKey nk;
                    nk.modes = k.modes;
                    nk.alpha = shifted;
                    add_term(y, std::move(nk), c);
                }
                for (const auto& cr : factor_creations)
                    y = apply_round_mode(ctx, *cr.vec, -cr.n, y);
                for (long n : ps) y = apply_round_mode(ctx, gamma_rat, -n, y);
                fock_add_scaled(acc, y, uc * xc * coeff * pc * cocycle);
            });
    };

    std::vector<std::vector<Rational>> units;
    for (int c = 0; c < ctx.rank; ++c) units.push_back(unit_vec(ctx.rank, c));

    // stage B: factor mode choices, annihilations applied eagerly
    auto stage_b = [&](auto&& self, size_t t, const FockVector& cur,
                       const Rational& coeff, long a_total, long aj, long cj,
                       std::vector<Creation>& creations) -> void {
        if (cur.empty()) return;
        if (t == p) {
            finish(cur, coeff, a_total, aj, cj, creations);
            return;
        }
        long m = fac[t].first;
        int color = fac[t].second;
        long wrem = max_osc_weight(cur);
        // j >= 1: annihilate
        for (long j = 1; j <= wrem; ++j) {
            Rational b = binom(-j - 1, m - 1);
            FockVector next = apply_round_mode(ctx, units[color], j, cur);
            if (next.empty()) continue;
            self(self, t + 1, next, coeff * b, a_total, aj + j, cj, creations);
        }
        // j = 0: eigenvalue (e_color, beta) on the source charge
        {
            Rational eig = 0;
            for (int i = 0; i < ctx.rank; ++i)
                eig += rat(ctx.L->gram[color][i] * beta[i]);
            if (eig != 0) {
                Rational b = binom(-1, m - 1);
                self(self, t + 1, cur, coeff * b * eig, a_total, aj, cj,
                     creations);
            }
        }
        // j <= -m: defer the creation.  The final balance needs
        // cj <= s + a_total + aj_final, and later annihilations can add at
        // most the current oscillator weight to aj.
        long cmax = s_val + a_total + aj + wrem - cj;
        for (long j = -m; -j <= cmax; --j) {
            Rational b = binom(-j - 1, m - 1);
            creations.push_back({-j, &units[color]});
            self(self, t + 1, cur, coeff * b, a_total, aj, cj + (-j), creations);
            creations.pop_back();
        }
    };

    // stage A: E+ multiset, applied eagerly, with symmetric factors
    auto stage_a = [&](auto&& self, const FockVector& cur, const Rational& coeff,
                       long a_total, long max_part, long last, long run) -> void {
        std::vector<Creation> creations;
        stage_b(stage_b, 0, cur, coeff, a_total, 0, 0, creations);
        long wrem = max_osc_weight(cur);
        for (long n = std::min(max_part, wrem); n >= 1; --n) {
            FockVector next = apply_round_mode(ctx, gamma_rat, n, cur);
            if (next.empty()) continue;
            Rational c = coeff * rat(-1) / rat(n);
            c /= rat(n == last ? run + 1 : 1);
            self(self, next, c, a_total + n, n, n, n == last ? run + 1 : 1);
        }
    };

    FockVector start;
    start.emplace(xk, rat(1));
    stage_a(stage_a, start, rat(1), 0, max_osc_weight(start), 0, 0);
}

}  // namespace

FockVector apply_zero_mode(const FockContext& ctx, const FockVector& u,
                           const FockVector& x) {
    FockVector acc;
    for (const auto& [uk, uc] : u) {
        if (charge_is_zero(uk)) {
            zero_mode_neutral(ctx, uk, uc, x, acc);
        } else {
            if (!ctx.L)
                throw std::invalid_argument(
                    "charged states need a lattice context");
            for (const auto& [xk, xc] : x)
                zero_mode_charged(ctx, uk, uc, xk, xc, acc);
        }
    }
    return acc;
}

QSeries graded_trace_literal(Algebra a, const FockContext& ctx,
                             const FockVector& u, long W) {
    auto basis = enumerate_basis(a, ctx, W);
    std::vector<Rational> t(static_cast<size_t>(W) + 1, rat(0));
    for (long w = 0; w <= W; ++w) {
        for (const auto& b : basis[w]) {
            FockVector x;
            x.emplace(b, rat(1));
            bool paired = (a == Algebra::VLPlus && !charge_is_zero(b));
            FockKey mirror = b;
            Rational sgn = rat(fock_parity(b) == 0 ? 1 : -1);
            if (paired) {
                for (auto& z : mirror.alpha) z = -z;
                x.emplace(mirror, sgn);
            }
            FockVector y = apply_zero_mode(ctx, u, x);
            Rational lam = 0;
            if (auto it = y.find(b); it != y.end()) lam += it->second;
            if (paired) {
                // the key also appears in the anti-invariant partner, so
                // project onto the invariant combination
                if (auto it = y.find(mirror); it != y.end())
                    lam += sgn * it->second;
                lam /= 2;
            }
            t[w] += lam;
        }
    }
    return QSeries(rat(-ctx.rank, 24), std::move(t));
}

}  // namespace voatrace
