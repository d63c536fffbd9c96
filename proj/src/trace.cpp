#include "voatrace/trace.hpp"

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "voatrace/combinatorics.hpp"
#include "voatrace/fock.hpp"

namespace voatrace {

namespace {

bool is_zero_vector(const std::vector<long>& a) {
    for (long x : a)
        if (x != 0) return false;
    return true;
}

std::vector<int> factor_indices(const BracketWord& w) {
    std::vector<int> idx(w.factors.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return idx;
}

// Indices of the exponent-one factors; only these can pair with the charge.
std::vector<int> unit_exponent_indices(const BracketWord& w) {
    std::vector<int> idx;
    for (size_t i = 0; i < w.factors.size(); ++i)
        if (w.factors[i].n == 1) idx.push_back(static_cast<int>(i));
    return idx;
}

BracketWord drop_one(const BracketWord& w, size_t a) {
    BracketWord out;
    out.tail = w.tail;
    out.alpha = w.alpha;
    for (size_t i = 0; i < w.factors.size(); ++i)
        if (i != a) out.factors.push_back(w.factors[i]);
    return out;
}

BracketWord drop_two(const BracketWord& w, size_t a, size_t b) {
    BracketWord out;
    out.tail = w.tail;
    out.alpha = w.alpha;
    for (size_t i = 0; i < w.factors.size(); ++i)
        if (i != a && i != b) out.factors.push_back(w.factors[i]);
    return out;
}

// Sum over perfect matchings of `idx`, each pair contributing the vector
// pairing times the hatted series of the exponent sum.
QSeries matching_sum(const BracketWord& w, const EvenLattice* L, EisKind kind,
                     int order, const std::vector<int>& idx) {
    QSeries total = QSeries::zero();
    for (const auto& inv : perfect_matchings(idx)) {
        QSeries term = QSeries::one(order);
        bool dead = false;
        for (const auto& [r, s] : inv.pairs) {
            const auto& fr = w.factors[static_cast<size_t>(r)];
            const auto& fs = w.factors[static_cast<size_t>(s)];
            Rational pv = pairing(fr.vec, fs.vec, L);
            if (pv == 0) {
                dead = true;
                break;
            }
            QSeries h = eisenstein_hat(kind, fr.n, fs.n, order);
            if (h.is_zero()) {
                dead = true;
                break;
            }
            term = qs_mul(term, qs_scale(h, pv));
        }
        if (!dead) total = qs_add(total, term);
    }
    return total;
}

void require_vacuum_tail(const BracketWord& w) {
    if (w.tail != TailKind::Vacuum)
        throw std::invalid_argument("vacuum tail required");
}

void require_alpha_arity(const EvenLattice& L, const std::vector<long>& alpha) {
    if (static_cast<int>(alpha.size()) != L.rank)
        throw std::invalid_argument("charge arity does not match the rank");
}

// Shared body of trace_VL and g_series.
QSeries charged_theta_sum(const BracketWord& w, const EvenLattice& L,
                          int order) {
    word_validate(w, L.rank);
    require_vacuum_tail(w);
    QSeries etaq = eta_quotient({{1, -L.rank}}, order);
    std::vector<int> units = unit_exponent_indices(w);
    std::vector<int> all = factor_indices(w);
    QSeries total = QSeries::zero();
    for (const auto& delta : subsets(units)) {
        std::vector<int> rest;
        for (int i : all) {
            bool used = false;
            for (int j : delta) used = used || i == j;
            if (!used) rest.push_back(i);
        }
        QSeries inner = matching_sum(w, &L, EisKind::E, order, rest);
        if (inner.is_zero()) continue;
        auto weight = [&](const std::vector<long>& a) {
            Rational r = rat(1);
            for (int j : delta)
                r *= pair_vec(L, w.factors[static_cast<size_t>(j)].vec, a);
            return Rational(r);
        };
        QSeries th = theta_weighted(L, weight, order);
        if (th.is_zero()) continue;
        total = qs_add(total, qs_mul(qs_mul(th, etaq), inner));
    }
    return total;
}

using Memo = std::map<std::string, QSeries>;

QSeries zhu_m_impl(const BracketWord& w, int rank, int order, Memo& memo) {
    if (w.factors.empty()) return character(Algebra::M, rank, nullptr, order);
    std::string key = word_canonical_key(w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    // The zero mode of a plain boson vanishes here, so only the positive-mode
    // contractions with the remaining factors survive the peel.
    QSeries acc = QSeries::zero();
    const auto& f0 = w.factors[0];
    for (size_t j = 1; j < w.factors.size(); ++j) {
        Rational pv = pairing(f0.vec, w.factors[j].vec, nullptr);
        if (pv == 0) continue;
        QSeries h = eisenstein_hat(EisKind::E, f0.n, w.factors[j].n, order);
        if (h.is_zero()) continue;
        acc = qs_add(acc, qs_mul(qs_scale(h, pv),
                                 zhu_m_impl(drop_two(w, 0, j), rank, order, memo)));
    }
    memo.emplace(std::move(key), acc);
    return acc;
}

QSeries zhu_module_impl(const BracketWord& w, const EvenLattice& L,
                        const std::vector<long>& alpha, int order, Memo& memo) {
    if (w.factors.empty())
        return qs_shift(eta_quotient({{1, -L.rank}}, order),
                        rat(vec_norm(L, alpha), 2));
    std::string key = word_canonical_key(w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    QSeries acc = QSeries::zero();
    const auto& f0 = w.factors[0];
    // The charge eigenvalue of the peeled zero mode.
    if (f0.n == 1) {
        Rational ev = pair_vec(L, f0.vec, alpha);
        if (ev != 0)
            acc = qs_add(acc, qs_scale(zhu_module_impl(drop_one(w, 0), L, alpha,
                                                       order, memo),
                                       ev));
    }
    for (size_t j = 1; j < w.factors.size(); ++j) {
        Rational pv = pair_rr(L, f0.vec, w.factors[j].vec);
        if (pv == 0) continue;
        QSeries h = eisenstein_hat(EisKind::E, f0.n, w.factors[j].n, order);
        if (h.is_zero()) continue;
        acc = qs_add(acc, qs_mul(qs_scale(h, pv),
                                 zhu_module_impl(drop_two(w, 0, j), L, alpha,
                                                 order, memo)));
    }
    memo.emplace(std::move(key), acc);
    return acc;
}

QSeries zhu_mplus_impl(const BracketWord& w, int rank, int order, Memo& memo) {
    if (w.factors.empty())
        return character(Algebra::MPlus, rank, nullptr, order);
    std::string key = word_canonical_key(w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    QSeries acc = QSeries::zero();
    const auto& f0 = w.factors[0];
    for (size_t j = 1; j < w.factors.size(); ++j) {
        Rational pv = pairing(f0.vec, w.factors[j].vec, nullptr);
        if (pv == 0) continue;
        BracketWord rest = drop_two(w, 0, j);
        QSeries fh = eisenstein_hat(EisKind::F, f0.n, w.factors[j].n, order);
        if (!fh.is_zero())
            acc = qs_add(acc, qs_mul(qs_scale(fh, pv),
                                     zhu_mplus_impl(rest, rank, order, memo)));
        QSeries diff = qs_sub(eisenstein_hat(EisKind::E, f0.n,
                                             w.factors[j].n, order),
                              fh);
        if (!diff.is_zero())
            acc = qs_add(acc, qs_mul(qs_scale(diff, pv / 2),
                                     trace_M(rest, rank, order)));
    }
    memo.emplace(std::move(key), acc);
    return acc;
}

QSeries zhu_vlplus_m_impl(const BracketWord& w, const EvenLattice& L,
                          int order, Memo& memo) {
    if (w.factors.empty())
        return character(Algebra::VLPlus, L.rank, &L, order);
    std::string key = word_canonical_key(w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    QSeries acc = QSeries::zero();
    const auto& f0 = w.factors[0];
    if (f0.n == 1) {
        // Mixed leg: the zero mode of the peeled boson weighted against every
        // charge sector of the full lattice algebra; evaluated directly on
        // the Fock space.
        FockContext fc{L.rank, &L};
        QSeries mixed =
            oracle_sector_weighted_trace(fc, drop_one(w, 0), f0.vec, order - 1);
        if (!mixed.is_zero()) acc = qs_add(acc, qs_scale(mixed, rat(1, 2)));
    }
    for (size_t j = 1; j < w.factors.size(); ++j) {
        Rational pv = pair_rr(L, f0.vec, w.factors[j].vec);
        if (pv == 0) continue;
        BracketWord rest = drop_two(w, 0, j);
        QSeries fh = eisenstein_hat(EisKind::F, f0.n, w.factors[j].n, order);
        if (!fh.is_zero())
            acc = qs_add(acc, qs_mul(qs_scale(fh, pv),
                                     zhu_vlplus_m_impl(rest, L, order, memo)));
        QSeries diff = qs_sub(eisenstein_hat(EisKind::E, f0.n,
                                             w.factors[j].n, order),
                              fh);
        if (!diff.is_zero())
            acc = qs_add(acc, qs_mul(qs_scale(diff, pv / 2),
                                     trace_VL(rest, L, order)));
    }
    memo.emplace(std::move(key), acc);
    return acc;
}

QSeries zhu_vlplus_tail_impl(const BracketWord& w, const EvenLattice& L,
                             int order, Memo& memo) {
    if (w.factors.empty()) {
        if (w.tail == TailKind::F) return falpha_trace(L, w.alpha, order);
        return QSeries::zero();  // a bare antisymmetric tail traces to zero
    }
    std::string key = word_canonical_key(w);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    QSeries acc = QSeries::zero();
    const auto& f0 = w.factors[0];
    // The zero-mode leg flips the tail between its symmetrized halves.
    Rational ev = pair_vec(L, f0.vec, w.alpha);
    QSeries fn = eisenstein_f(f0.n, order);
    if (ev != 0 && !fn.is_zero()) {
        BracketWord rest = drop_one(w, 0);
        rest.tail = w.tail == TailKind::F ? TailKind::G : TailKind::F;
        acc = qs_add(acc, qs_mul(qs_scale(fn, -ev),
                                 zhu_vlplus_tail_impl(rest, L, order, memo)));
    }
    for (size_t j = 1; j < w.factors.size(); ++j) {
        Rational pv = pair_rr(L, f0.vec, w.factors[j].vec);
        if (pv == 0) continue;
        QSeries fh = eisenstein_hat(EisKind::F, f0.n, w.factors[j].n, order);
        if (fh.is_zero()) continue;
        acc = qs_add(acc, qs_mul(qs_scale(fh, pv),
                                 zhu_vlplus_tail_impl(drop_two(w, 0, j), L,
                                                      order, memo)));
    }
    memo.emplace(std::move(key), acc);
    return acc;
}

void require_tail_parity(const BracketWord& w) {
    bool even = w.factors.size() % 2 == 0;
    bool ok = (w.tail == TailKind::F && even) ||
              (w.tail == TailKind::G && !even);
    if (!ok) throw std::invalid_argument("state not in V_L+ basis family");
}

// Rewrites a single-exponential tail as half of the matching symmetrized
// tail (the anti-invariant half traces to zero); a neutral exponential is
// just the vacuum.
BracketWord split_exponential_tail(const BracketWord& w, bool* halved) {
    *halved = false;
    if (w.tail != TailKind::E) return w;
    BracketWord v = w;
    if (is_zero_vector(v.alpha)) {
        v.tail = TailKind::Vacuum;
        v.alpha.clear();
        return v;
    }
    v.tail = v.factors.size() % 2 == 0 ? TailKind::F : TailKind::G;
    *halved = true;
    return v;
}

}  // namespace

Rational pairing(const std::vector<Rational>& v, const std::vector<Rational>& w,
                 const EvenLattice* L) {
    if (L) return pair_rr(*L, v, w);
    if (v.size() != w.size())
        throw std::invalid_argument("pairing arity mismatch");
    Rational s = rat(0);
    for (size_t i = 0; i < v.size(); ++i) s += v[i] * w[i];
    return Rational(s);
}

QSeries trace_M(const BracketWord& w, int rank, int order) {
    word_validate(w, rank);
    require_vacuum_tail(w);
    if (w.factors.size() % 2 != 0 || word_weight(w) % 2 != 0)
        return QSeries::zero();
    QSeries s = matching_sum(w, nullptr, EisKind::E, order, factor_indices(w));
    return qs_mul(s, character(Algebra::M, rank, nullptr, order));
}

QSeries trace_Mplus(const BracketWord& w, int rank, int order) {
    word_validate(w, rank);
    require_vacuum_tail(w);
    if (w.factors.size() % 2 != 0)
        throw std::invalid_argument("state not in M+");
    std::vector<int> idx = factor_indices(w);
    QSeries a = matching_sum(w, nullptr, EisKind::F, order, idx);
    QSeries b = matching_sum(w, nullptr, EisKind::E, order, idx);
    QSeries plus = qs_mul(a, character(Algebra::MPlus, rank, nullptr, order));
    QSeries full = qs_mul(qs_sub(b, a), character(Algebra::M, rank, nullptr, order));
    return qs_add(plus, qs_scale(full, rat(1, 2)));
}

QSeries trace_module(const BracketWord& w, const EvenLattice& L,
                     const std::vector<long>& alpha, int order) {
    word_validate(w, L.rank);
    require_vacuum_tail(w);
    require_alpha_arity(L, alpha);
    QSeries base = qs_shift(eta_quotient({{1, -L.rank}}, order),
                            rat(vec_norm(L, alpha), 2));
    std::vector<int> units = unit_exponent_indices(w);
    std::vector<int> all = factor_indices(w);
    QSeries total = QSeries::zero();
    for (const auto& delta : subsets(units)) {
        Rational wt = rat(1);
        for (int j : delta)
            wt *= pair_vec(L, w.factors[static_cast<size_t>(j)].vec, alpha);
        if (wt == 0) continue;
        std::vector<int> rest;
        for (int i : all) {
            bool used = false;
            for (int j : delta) used = used || i == j;
            if (!used) rest.push_back(i);
        }
        QSeries inner = matching_sum(w, &L, EisKind::E, order, rest);
        if (inner.is_zero()) continue;
        total = qs_add(total, qs_scale(inner, wt));
    }
    return qs_mul(total, base);
}

QSeries trace_VL(const BracketWord& w, const EvenLattice& L, int order) {
    return charged_theta_sum(w, L, order);
}

QSeries g_series(const BracketWord& w, const EvenLattice& L, int order) {
    return charged_theta_sum(w, L, order);
}

QSeries falpha_trace(const EvenLattice& L, const std::vector<long>& alpha,
                     int order) {
    require_alpha_arity(L, alpha);
    if (is_zero_vector(alpha))
        return qs_scale(character(Algebra::VLPlus, L.rank, &L, order), rat(2));
    if (!in_double_lattice(alpha)) return QSeries::zero();
    long m = vec_norm(L, alpha);
    return eta_quotient({{2, 2 * m - L.rank}, {1, -(m - L.rank)}}, order);
}

QSeries trace_VLplus_lattice_tail(const BracketWord& w, const EvenLattice& L,
                                  int order) {
    word_validate(w, L.rank);
    require_tail_parity(w);
    QSeries base = falpha_trace(L, w.alpha, order);
    if (base.is_zero()) return base;
    QSeries total = QSeries::zero();
    for (const auto& inv : all_involutions(factor_indices(w))) {
        QSeries term = QSeries::one(order);
        bool dead = false;
        for (int t : inv.fixed) {
            const auto& ft = w.factors[static_cast<size_t>(t)];
            Rational pv = pair_vec(L, ft.vec, w.alpha);
            QSeries fn = eisenstein_f(ft.n, order);
            if (pv == 0 || fn.is_zero()) {
                dead = true;
                break;
            }
            term = qs_mul(term, qs_scale(fn, -pv));
        }
        if (!dead) {
            for (const auto& [r, s] : inv.pairs) {
                const auto& fr = w.factors[static_cast<size_t>(r)];
                const auto& fs = w.factors[static_cast<size_t>(s)];
                Rational pv = pair_rr(L, fr.vec, fs.vec);
                if (pv == 0) {
                    dead = true;
                    break;
                }
                QSeries fh = eisenstein_hat(EisKind::F, fr.n, fs.n, order);
                if (fh.is_zero()) {
                    dead = true;
                    break;
                }
                term = qs_mul(term, qs_scale(fh, pv));
            }
        }
        if (!dead) total = qs_add(total, term);
    }
    return qs_mul(total, base);
}

QSeries trace_VLplus_M(const BracketWord& w, const EvenLattice& L, int order) {
    word_validate(w, L.rank);
    require_vacuum_tail(w);
    if (w.factors.size() % 2 != 0)
        throw std::invalid_argument("state not in M+");
    QSeries a = matching_sum(w, &L, EisKind::F, order, factor_indices(w));
    QSeries half_diff =
        qs_sub(character(Algebra::VLPlus, L.rank, &L, order),
               qs_scale(character(Algebra::VL, L.rank, &L, order), rat(1, 2)));
    return qs_add(qs_mul(a, half_diff),
                  qs_scale(charged_theta_sum(w, L, order), rat(1, 2)));
}

QSeries zhu_recurse_untwisted(Algebra a, const BracketWord& w, int rank,
                              const EvenLattice* L, int order) {
    if (a == Algebra::M) {
        word_validate(w, rank);
        require_vacuum_tail(w);
        Memo memo;
        return zhu_m_impl(w, rank, order, memo);
    }
    if (a == Algebra::VL) {
        if (!L)
            throw std::invalid_argument("lattice algebra needs a Gram context");
        word_validate(w, L->rank);
        require_vacuum_tail(w);
        // Charges beyond the q-window cannot contribute known coefficients.
        QSeries acc = QSeries::zero();
        for (const auto& beta : enumerate_vectors(*L, 2L * (order - 1)))
            acc = qs_add(acc, zhu_recurse_module(w, *L, beta, order));
        if (acc.is_zero()) return acc;
        return qs_truncate(acc, order);
    }
    throw std::invalid_argument(
        "untwisted recursion covers the free-boson and full lattice algebras");
}

QSeries zhu_recurse_module(const BracketWord& w, const EvenLattice& L,
                           const std::vector<long>& alpha, int order) {
    word_validate(w, L.rank);
    require_vacuum_tail(w);
    require_alpha_arity(L, alpha);
    Memo memo;
    return zhu_module_impl(w, L, alpha, order, memo);
}

QSeries zhu_recurse_twisted(Algebra a, const BracketWord& w, int rank,
                            const EvenLattice* L, int order) {
    if (a == Algebra::MPlus) {
        word_validate(w, rank);
        require_vacuum_tail(w);
        if (w.factors.size() % 2 != 0)
            throw std::invalid_argument("state not in M+");
        Memo memo;
        return zhu_mplus_impl(w, rank, order, memo);
    }
    if (a != Algebra::VLPlus)
        throw std::invalid_argument(
            "twisted recursion covers the fixed-point algebras");
    if (!L) throw std::invalid_argument("lattice algebra needs a Gram context");
    word_validate(w, L->rank);
    bool halved = false;
    BracketWord v = split_exponential_tail(w, &halved);
    QSeries out;
    if (v.tail == TailKind::Vacuum) {
        if (v.factors.size() % 2 != 0)
            throw std::invalid_argument("state not in M+");
        Memo memo;
        out = zhu_vlplus_m_impl(v, *L, order, memo);
    } else {
        require_tail_parity(v);
        Memo memo;
        out = zhu_vlplus_tail_impl(v, *L, order, memo);
    }
    return halved ? qs_scale(out, rat(1, 2)) : out;
}

QSeries trace_dispatch(TraceMethod method, Algebra a, const BracketWord& w,
                       int rank, const EvenLattice* L, int order) {
    if (a == Algebra::VL || a == Algebra::VLPlus) {
        if (!L)
            throw std::invalid_argument("lattice algebra needs a Gram context");
        rank = L->rank;
    }
    if (method == TraceMethod::Recursion) {
        switch (a) {
            case Algebra::M:
            case Algebra::VL:
                return zhu_recurse_untwisted(a, w, rank, L, order);
            case Algebra::MPlus:
            case Algebra::VLPlus:
                return zhu_recurse_twisted(a, w, rank, L, order);
            case Algebra::MMinus:
                return qs_sub(
                    zhu_recurse_untwisted(Algebra::M, w, rank, nullptr, order),
                    zhu_recurse_twisted(Algebra::MPlus, w, rank, nullptr,
                                        order));
        }
    }
    switch (a) {
        case Algebra::M:
            return trace_M(w, rank, order);
        case Algebra::MPlus:
            return trace_Mplus(w, rank, order);
        case Algebra::MMinus:
            return qs_sub(trace_M(w, rank, order),
                          trace_Mplus(w, rank, order));
        case Algebra::VL:
            return trace_VL(w, *L, order);
        case Algebra::VLPlus: {
            bool halved = false;
            BracketWord v = split_exponential_tail(w, &halved);
            QSeries out = v.tail == TailKind::Vacuum
                              ? trace_VLplus_M(v, *L, order)
                              : trace_VLplus_lattice_tail(v, *L, order);
            return halved ? qs_scale(out, rat(1, 2)) : out;
        }
    }
    throw std::invalid_argument("unknown algebra");
}

}  // namespace voatrace
