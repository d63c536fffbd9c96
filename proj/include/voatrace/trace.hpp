#pragma once

#include <vector>

#include "voatrace/lattice.hpp"
#include "voatrace/modforms.hpp"
#include "voatrace/qseries.hpp"
#include "voatrace/words.hpp"

namespace voatrace {

// (v, w) under the Gram matrix, or the plain dot product when L is null
// (orthonormal colors of the free-boson family).
Rational pairing(const std::vector<Rational>& v, const std::vector<Rational>& w,
                 const EvenLattice* L);

// Closed-form trace evaluators.  Each returns the graded trace of the zero
// mode of a square-bracket creation word as an exact q-expansion with `order`
// known coefficients from the (fractional) leading exponent.

// Free-boson algebra of the given rank: perfect matchings of the factors,
// each pair (r s) contributing (v_r, v_s) * Ehat_{n_r + n_s}, times the
// character.  Zero series when the factor count or the total weight is odd.
QSeries trace_M(const BracketWord& w, int rank, int order);

// Even part of the free-boson algebra under the sign involution h -> -h:
// matchings weighted by Fhat against the plus character, plus half the
// (Ehat - Fhat)-weighted matchings against the full character.
QSeries trace_Mplus(const BracketWord& w, int rank, int order);

// Charged irreducible module over the free-boson algebra attached to a
// lattice vector: subsets of the exponent-one factors pick up charge
// pairings, the remaining factors pair off as in trace_M.
QSeries trace_module(const BracketWord& w, const EvenLattice& L,
                     const std::vector<long>& alpha, int order);

// Full lattice algebra: the module formula summed over all charges, the
// charge pairings collecting into polynomial-weighted theta functions.
QSeries trace_VL(const BracketWord& w, const EvenLattice& L, int order);

// Quasimodular part of the plus-fixed-point formula.  As a q-series this
// coincides with trace_VL; it is kept as its own entry point because the
// modularity certification treats it separately.
QSeries g_series(const BracketWord& w, const EvenLattice& L, int order);

// Trace of the symmetrized exponential pair f_alpha over the plus algebra:
// zero unless alpha is twice a lattice vector, an explicit eta quotient
// otherwise; alpha = 0 degenerates to twice the plus character.
QSeries falpha_trace(const EvenLattice& L, const std::vector<long>& alpha,
                     int order);

// Plus algebra with a charged symmetrized tail: all involutions of the
// factor set, fixed points t contributing -(v_t, alpha) * F_{n_t} and pairs
// contributing (v_r, v_s) * Fhat_{n_r + n_s}, times falpha_trace.  Requires
// the invariant parity (f tail with even factor count, g tail with odd).
QSeries trace_VLplus_lattice_tail(const BracketWord& w, const EvenLattice& L,
                                  int order);

// Plus algebra on vacuum-tail states.
QSeries trace_VLplus_M(const BracketWord& w, const EvenLattice& L, int order);

// Zhu-recursion evaluators: the same trace functions computed by repeatedly
// peeling the leftmost factor down to bare characters.  An independent
// computation path next to the closed forms and the Fock-space oracle.
QSeries zhu_recurse_untwisted(Algebra a, const BracketWord& w, int rank,
                              const EvenLattice* L, int order);
QSeries zhu_recurse_module(const BracketWord& w, const EvenLattice& L,
                           const std::vector<long>& alpha, int order);
QSeries zhu_recurse_twisted(Algebra a, const BracketWord& w, int rank,
                            const EvenLattice* L, int order);

enum class TraceMethod { Closed, Recursion };

// Routes a request to the right evaluator for the algebra; single-exponential
// tails are split into their symmetrized halves first.
QSeries trace_dispatch(TraceMethod method, Algebra a, const BracketWord& w,
                       int rank, const EvenLattice* L, int order);

}  // namespace voatrace
