#pragma once

#include <compare>
#include <map>
#include <utility>
#include <vector>

#include "voatrace/lattice.hpp"
#include "voatrace/modforms.hpp"
#include "voatrace/qseries.hpp"
#include "voatrace/words.hpp"

namespace voatrace {

// Monomial basis element: a product of creation modes h_color(-n) applied to
// e^alpha (alpha all-zero for the pure Heisenberg algebra).  Modes are kept
// sorted, so equal monomials have equal keys.
struct FockKey {
    std::vector<std::pair<long, int>> modes;  // (n, color), n >= 1, color 0-based
    std::vector<long> alpha;
    auto operator<=>(const FockKey&) const = default;
};

using FockVector = std::map<FockKey, Rational>;

// Pure Heisenberg contexts leave L null: colors are orthonormal and there is
// no charge.  Lattice contexts pair colors through the Gram matrix.
struct FockContext {
    int rank = 1;
    const EvenLattice* L = nullptr;
};

Rational fock_pair(const FockContext& ctx, const std::vector<Rational>& v,
                   const std::vector<Rational>& w);
long fock_weight(const FockContext& ctx, const FockKey& k);  // sum n + (a,a)/2
int fock_parity(const FockKey& k);                           // #modes mod 2

// acc += s * b, dropping cancellations.
void fock_add_scaled(FockVector& acc, const FockVector& b, const Rational& s);

// a(m, j): coefficient of the round mode h(j) in the square mode h[m]; the
// z^{-m-1} coefficient of (e^z - 1)^{-j-1} e^z.  Creation rows (m < 0) are
// supported on j >= m, annihilation rows (m >= 0) on j >= m.
Rational mode_transport(long m, long j);

// h_v(n) on x: n < 0 inserts creation modes (multilinearly in v), n > 0
// annihilates with [h_v(n), h_w(-n)] = n (v,w), n = 0 scales by (v, alpha).
FockVector apply_round_mode(const FockContext& ctx,
                            const std::vector<Rational>& v, long n,
                            const FockVector& x);

// h_v[n] on x, expanded through mode_transport.
FockVector apply_square_mode(const FockContext& ctx,
                             const std::vector<Rational>& v, long n,
                             const FockVector& x);

// The tail state: 1, e^a + e^-a, e^a - e^-a, or e^a.
FockVector tail_vector(const FockContext& ctx, const BracketWord& w);

// h_{v1}[-n1] ... h_{vp}[-np] (tail), exactly, as a mix of round monomials.
FockVector build_square_state(const FockContext& ctx, const BracketWord& w);

// Graded dimensions of the algebra's weight spaces 0..W by counting, without
// materializing states.
std::vector<long> oracle_graded_dims(Algebra a, const FockContext& ctx, long W);

// Explicit graded basis (weights 0..W).  MPlus/MMinus filter by mode-count
// parity.  VLPlus lists even-parity keys at alpha = 0 plus one key per
// {alpha, -alpha} pair (the lexicographically positive alpha), standing for
// the invariant vector m e^alpha + (-1)^p m e^-alpha.
std::vector<std::vector<FockKey>> enumerate_basis(Algebra a,
                                                  const FockContext& ctx,
                                                  long W);

// o(u) x, literally: free-field normal ordering for charge-zero keys of u,
// the lattice vertex operator for charged keys.  Weight-preserving.
FockVector apply_zero_mode(const FockContext& ctx, const FockVector& u,
                           const FockVector& x);

// Literal graded trace q^{-rank/24} sum_{w<=W} tr_w q^w of o(u) over the
// algebra, via enumerate_basis and apply_zero_mode.  Ground truth at small W.
QSeries graded_trace_literal(Algebra a, const FockContext& ctx,
                             const FockVector& u, long W);

// Main oracle: trace of the word's zero mode over the algebra.  Vacuum tails
// run through factorized per-oscillator sector traces (fast, q-order W+1);
// f/g/e tails over VLPlus run through the lattice vertex operator (weights
// <= W); charged tails over M-family algebras are rejected, over VL they
// vanish.
QSeries oracle_trace(Algebra a, const FockContext& ctx, const BracketWord& w,
                     long W);

// Trace over the single module M e^alpha of a vacuum-tail word, q-order W+1.
QSeries oracle_module_trace(const FockContext& ctx, const BracketWord& w,
                            const std::vector<long>& alpha, long W);

// sum_beta (v, beta) x (trace of the word's zero mode over M e^beta), i.e.
// Tr_{V_L} o(h_v(-1)-vacuum) o(word) q^{L0 - c/24}; the mixed-term oracle of
// the twisted recursion.
QSeries oracle_sector_weighted_trace(const FockContext& ctx,
                                     const BracketWord& w,
                                     const std::vector<Rational>& v, long W);

}  // namespace voatrace
