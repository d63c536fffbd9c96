#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "voatrace/fock.hpp"

namespace voatrace {

namespace {

// Orthogonal (not normalized) recoloring of the oscillator colors, so traces
// factorize over independent modes.  Plain Gram-Schmidt over the rationals.
struct OrthoBasis {
    std::vector<std::vector<Rational>> w;  // w[c] in lattice-basis coordinates
    std::vector<Rational> d;               // (w_c, w_c)
    std::vector<std::vector<Rational>> T;  // e_c = sum_{c'} T[c][c'] w_{c'}
};

std::vector<Rational> unit_vec(int rank, int color) {
    std::vector<Rational> v(rank, rat(0));
    v[color] = rat(1);
    return v;
}

OrthoBasis make_ortho(const FockContext& ctx) {
    OrthoBasis ob;
    for (int i = 0; i < ctx.rank; ++i) {
        auto wi = unit_vec(ctx.rank, i);
        for (int j = 0; j < i; ++j) {
            Rational c = fock_pair(ctx, unit_vec(ctx.rank, i), ob.w[j]) / ob.d[j];
            for (int t = 0; t < ctx.rank; ++t) wi[t] -= c * ob.w[j][t];
        }
        Rational di = fock_pair(ctx, wi, wi);
        if (di == 0)
            throw std::domain_error("degenerate Gram matrix");
        ob.w.push_back(std::move(wi));
        ob.d.push_back(di);
    }
    for (int c = 0; c < ctx.rank; ++c) {
        std::vector<Rational> row(ctx.rank);
        for (int cc = 0; cc < ctx.rank; ++cc)
            row[cc] = fock_pair(ctx, unit_vec(ctx.rank, c), ob.w[cc]) / ob.d[cc];
        ob.T.push_back(std::move(row));
    }
    return ob;
}

// Rewrite a charge-zero state in the orthogonal colors (charges dropped).
FockVector to_ortho(const FockContext& ctx, const OrthoBasis& ob,
                    const FockVector& u) {
    FockVector out;
    for (const auto& [k, c] : u) {
        if (!std::all_of(k.alpha.begin(), k.alpha.end(),
                         [](long a) { return a == 0; }))
            throw std::invalid_argument("factorized traces need neutral states");
        size_t p = k.modes.size();
        std::vector<int> pick(p, 0);
        auto rec = [&](auto&& self, size_t t, Rational coeff) -> void {
            if (coeff == 0) return;
            if (t == p) {
                FockKey nk;
                nk.modes.reserve(p);
                for (size_t i = 0; i < p; ++i)
                    nk.modes.emplace_back(k.modes[i].first, pick[i]);
                std::sort(nk.modes.begin(), nk.modes.end());
                auto [it, ins] = out.emplace(std::move(nk), coeff);
                if (!ins) {
                    it->second += coeff;
                    if (it->second == 0) out.erase(it);
                }
                return;
            }
            for (int cc = 0; cc < ctx.rank; ++cc) {
                pick[t] = cc;
                self(self, t + 1, coeff * ob.T[k.modes[t].second][cc]);
            }
        };
        rec(rec, 0, c);
    }
    return out;
}

// One normal-ordered contribution to the zero mode of an oscillator monomial:
// matched creation/annihilation pairs per (n, color), leftover zero modes.
struct TermSig {
    std::vector<std::pair<std::pair<long, int>, long>> osc;  // (n,c) -> a
    std::vector<int> zeros;                                  // colors
    auto operator<=>(const TermSig&) const = default;
};

struct OscTerm {
    Rational coeff;
    TermSig sig;
    long shift = 0;  // sum n a, the q-power of the oscillator factors
};

int mask_count(unsigned mask, const std::vector<std::pair<long, int>>& modes,
               int color) {
    int cnt = 0;
    for (size_t t = 0; t < modes.size(); ++t)
        if ((mask >> t) & 1u && modes[t].second == color) ++cnt;
    return cnt;
}

void balance_emit(const std::vector<std::pair<long, int>>& modes, unsigned avail,
                  Rational coeff,
                  const std::vector<std::pair<std::pair<long, int>, long>>& osc,
                  std::map<TermSig, Rational>& out) {
    TermSig sig;
    sig.osc = osc;
    std::sort(sig.osc.begin(), sig.osc.end());
    for (size_t t = 0; t < modes.size(); ++t) {
        if (!((avail >> t) & 1u)) continue;
        if (modes[t].first % 2 == 0) coeff = -coeff;  // binom(-1, m-1)
        sig.zeros.push_back(modes[t].second);
    }
    std::sort(sig.zeros.begin(), sig.zeros.end());
    auto [it, ins] = out.emplace(std::move(sig), coeff);
    if (!ins) it->second += coeff;
}

void balance_dfs(const std::vector<std::pair<long, int>>& modes, int rank,
                 long next_n, unsigned avail, Rational coeff, long shift,
                 long cap,
                 std::vector<std::pair<std::pair<long, int>, long>>& osc,
                 std::map<TermSig, Rational>& out) {
    balance_emit(modes, avail, coeff, osc, out);
    if (avail == 0) return;
    for (long n = next_n; n + shift <= cap; ++n) {
        // nonempty matched pair sets at level n
        for (unsigned P = avail; P; P = (P - 1) & avail) {
            long asz = 0;
            for (size_t t = 0; t < modes.size(); ++t)
                if ((P >> t) & 1u) ++asz;
            if (shift + n * asz > cap) continue;
            unsigned rest = avail & ~P;
            for (unsigned Q = rest; Q; Q = (Q - 1) & rest) {
                bool ok = true;
                long qsz = 0;
                for (size_t t = 0; t < modes.size() && ok; ++t)
                    if ((Q >> t) & 1u) {
                        ++qsz;
                        if (modes[t].first > n) ok = false;  // creator binom = 0
                    }
                if (!ok || qsz != asz) continue;
                for (int c = 0; c < rank && ok; ++c)
                    if (mask_count(P, modes, c) != mask_count(Q, modes, c))
                        ok = false;
                if (!ok) continue;
                Rational f = coeff;
                for (size_t t = 0; t < modes.size(); ++t) {
                    if ((P >> t) & 1u) f *= binom(-n - 1, modes[t].first - 1);
                    if ((Q >> t) & 1u) f *= binom(n - 1, modes[t].first - 1);
                }
                size_t osc_base = osc.size();
                for (int c = 0; c < rank; ++c) {
                    int a = mask_count(P, modes, c);
                    if (a > 0) osc.emplace_back(std::make_pair(n, c), a);
                }
                balance_dfs(modes, rank, n + 1, avail & ~(P | Q), f,
                            shift + n * asz, cap, osc, out);
                osc.resize(osc_base);
            }
        }
    }
}

// Memoized expansion of o(monomial) into trace-ready terms.
const std::vector<OscTerm>& key_terms(const FockKey& k, int rank, long cap) {
    static std::mutex mu;
    static std::map<std::tuple<std::vector<std::pair<long, int>>, int, long>,
                    std::unique_ptr<std::vector<OscTerm>>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(k.modes, rank, cap);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    std::map<TermSig, Rational> merged;
    std::vector<std::pair<std::pair<long, int>, long>> osc;
    balance_dfs(k.modes, rank, 1, (1u << k.modes.size()) - 1u, rat(1), 0, cap,
                osc, merged);
    auto terms = std::make_unique<std::vector<OscTerm>>();
    for (auto& [sig, c] : merged) {
        if (c == 0) continue;
        OscTerm t;
        t.coeff = c;
        t.sig = sig;
        for (const auto& [nc, a] : sig.osc) t.shift += nc.first * a;
        terms->push_back(std::move(t));
    }
    auto& slot = cache[key];
    slot = std::move(terms);
    return *slot;
}

// Everything below accumulates integer-offset coefficients relative to the
// global lead exponent -rank/24.

struct SectorEngine {
    const FockContext& ctx;
    OrthoBasis ob;
    FockVector u;  // ortho colors
    long cap;      // number of coefficients kept
    std::map<std::pair<long, int>, QSeries> inv_cache;  // (n, s) -> (1-s q^n)^-1
    QSeries base_plain, base_twisted;

    SectorEngine(const FockContext& c, const FockVector& state, long cap_)
        : ctx(c), ob(make_ortho(c)), u(to_ortho(c, ob, state)), cap(cap_) {
        int O = static_cast<int>(cap);
        base_plain = eta_quotient({{1, -ctx.rank}}, O);
        base_twisted = eta_quotient({{1, ctx.rank}, {2, -ctx.rank}}, O);
    }

    const QSeries& inv_factor(long n, int s) {
        auto it = inv_cache.find({n, s});
        if (it != inv_cache.end()) return it->second;
        std::vector<Rational> c(static_cast<size_t>(cap), rat(0));
        c[0] = rat(1);
        if (n < cap) c[static_cast<size_t>(n)] = rat(-s);
        QSeries inv = qs_inv(QSeries(rat(0), std::move(c)));
        return inv_cache.emplace(std::make_pair(n, s), std::move(inv))
            .first->second;
    }

    // Add the sector trace over M e^beta (s = +1) or its parity-twisted
    // companion (s = -1, zero-charge sectors only) into acc, with weight.
    void add_sector(std::vector<Rational>& acc, const std::vector<long>& beta,
                    int s, const Rational& weight) {
        if (weight == 0) return;
        long norm_half = 0;
        bool charged = false;
        if (!beta.empty() && ctx.L) {
            norm_half = vec_norm(*ctx.L, beta) / 2;
            charged = std::any_of(beta.begin(), beta.end(),
                                  [](long x) { return x != 0; });
        }
        if (norm_half >= cap) return;
        const QSeries& base = (s == 1) ? base_plain : base_twisted;
        for (const auto& [k, uc] : u) {
            for (const auto& term : key_terms(k, ctx.rank, cap)) {
                if (norm_half + term.shift >= cap) continue;
                Rational z = uc * term.coeff * weight;
                for (int c : term.sig.zeros) {
                    if (!charged) {
                        z = 0;
                        break;
                    }
                    z *= pair_vec(*ctx.L, ob.w[c], beta);
                    if (z == 0) break;
                }
                if (z == 0) continue;
                QSeries f = base;
                for (const auto& [nc, a] : term.sig.osc) {
                    auto [n, c] = nc;
                    Rational occ = factorial(a) * rat_pow(rat(n) * ob.d[c], a);
                    if (s == -1 && a % 2 == 1) occ = -occ;
                    z *= occ;
                    f = qs_mul(f, qs_pow(inv_factor(n, s), a));
                }
                long off0 = norm_half + term.shift;
                for (int i = 0; i < f.order() && off0 + i < cap; ++i)
                    acc[static_cast<size_t>(off0 + i)] += z * f.coeff(i);
            }
        }
    }
};

QSeries vacuum_tail_trace(Algebra a, const FockContext& ctx,
                          const BracketWord& w, long W) {
    long cap = W + 1;
    SectorEngine eng(ctx, build_square_state(ctx, w), cap);
    std::vector<Rational> acc(static_cast<size_t>(cap), rat(0));
    std::vector<long> zero_charge(ctx.L ? ctx.rank : 0, 0);
    switch (a) {
        case Algebra::M:
            eng.add_sector(acc, zero_charge, 1, rat(1));
            break;
        case Algebra::MPlus:
        case Algebra::MMinus: {
            Rational sgn = rat(a == Algebra::MPlus ? 1 : -1);
            eng.add_sector(acc, zero_charge, 1, rat(1, 2));
            eng.add_sector(acc, zero_charge, -1, sgn / 2);
            break;
        }
        case Algebra::VL:
        case Algebra::VLPlus: {
            if (!ctx.L)
                throw std::invalid_argument(
                    "lattice algebras need a lattice context");
            Rational wt = rat(1, a == Algebra::VL ? 1 : 2);
            for (const auto& beta : enumerate_vectors(*ctx.L, 2 * (cap - 1)))
                eng.add_sector(acc, beta, 1, wt);
            if (a == Algebra::VLPlus)
                eng.add_sector(acc, zero_charge, -1, rat(1, 2));
            break;
        }
    }
    return QSeries(rat(-ctx.rank, 24), std::move(acc));
}

}  // namespace

QSeries oracle_trace(Algebra a, const FockContext& ctx, const BracketWord& w,
                     long W) {
    word_validate(w, ctx.rank);
    if (W < 0) throw std::invalid_argument("weight bound must be >= 0");
    if (w.tail == TailKind::Vacuum) return vacuum_tail_trace(a, ctx, w, W);
    switch (a) {
        case Algebra::VL:
            // charged zero modes move every sector off itself
            return QSeries::zero();
        case Algebra::VLPlus:
            return graded_trace_literal(a, ctx, build_square_state(ctx, w), W);
        default:
            throw std::invalid_argument(
                "charged tails need a lattice algebra");
    }
}

QSeries oracle_module_trace(const FockContext& ctx, const BracketWord& w,
                            const std::vector<long>& alpha, long W) {
    word_validate(w, ctx.rank);
    if (w.tail != TailKind::Vacuum)
        throw std::invalid_argument("module traces take vacuum-tail words");
    if (!ctx.L) throw std::invalid_argument("module traces need a lattice");
    if (static_cast<int>(alpha.size()) != ctx.rank)
        throw std::invalid_argument("charge arity does not match the rank");
    long cap = W + 1;
    SectorEngine eng(ctx, build_square_state(ctx, w), cap);
    std::vector<Rational> acc(static_cast<size_t>(cap), rat(0));
    eng.add_sector(acc, alpha, 1, rat(1));
    return QSeries(rat(-ctx.rank, 24), std::move(acc));
}

QSeries oracle_sector_weighted_trace(const FockContext& ctx,
                                     const BracketWord& w,
                                     const std::vector<Rational>& v, long W) {
    word_validate(w, ctx.rank);
    if (w.tail != TailKind::Vacuum)
        throw std::invalid_argument("weighted traces take vacuum-tail words");
    if (!ctx.L) throw std::invalid_argument("weighted traces need a lattice");
    long cap = W + 1;
    SectorEngine eng(ctx, build_square_state(ctx, w), cap);
    std::vector<Rational> acc(static_cast<size_t>(cap), rat(0));
    for (const auto& beta : enumerate_vectors(*ctx.L, 2 * (cap - 1)))
        eng.add_sector(acc, beta, 1, pair_vec(*ctx.L, v, beta));
    return QSeries(rat(-ctx.rank, 24), std::move(acc));
}

}  // namespace voatrace
