#pragma once

#include <functional>
#include <string>
#include <vector>

#include "voatrace/qseries.hpp"

namespace voatrace {

// Positive definite even integral lattice, described by a Gram matrix in a
// fixed basis.  All vectors are basis coordinate tuples.
struct EvenLattice {
    int rank = 0;
    std::vector<std::vector<long>> gram;
};

// Validates symmetry, even diagonal and positive definiteness.
EvenLattice lattice_make(std::vector<std::vector<long>> gram);
// {"rank": k, "gram": [[...], ...]}
EvenLattice lattice_from_json(const std::string& text);
std::string lattice_to_json(const EvenLattice& L);

// alpha^T G alpha (always even and >= 0).
long vec_norm(const EvenLattice& L, const std::vector<long>& alpha);
// v^T G alpha for a rational vector v.
Rational pair_vec(const EvenLattice& L, const std::vector<Rational>& v,
                  const std::vector<long>& alpha);
Rational pair_rr(const EvenLattice& L, const std::vector<Rational>& v,
                 const std::vector<Rational>& w);
// Membership in 2L: every basis coordinate even.
bool in_double_lattice(const std::vector<long>& alpha);

// Smallest N >= 1 with N G^{-1} integral and of even diagonal.
long lattice_level(const EvenLattice& L);

// All alpha with alpha^T G alpha <= max_norm, in lexicographic coordinate
// order (deterministic).
std::vector<std::vector<long>> enumerate_vectors(const EvenLattice& L, long max_norm);

// theta_L = sum_alpha q^{(alpha,alpha)/2}, integer exponents, to the given
// number of coefficients.
QSeries theta_series(const EvenLattice& L, int order);
// sum_alpha (v,alpha)^m q^{(alpha,alpha)/2}
QSeries theta_vm(const EvenLattice& L, const std::vector<Rational>& v, long m, int order);
// sum_alpha P(alpha) q^{(alpha,alpha)/2}
QSeries theta_weighted(const EvenLattice& L,
                       const std::function<Rational(const std::vector<long>&)>& P,
                       int order);

// Finite X-expansion sum_m phi_m X^m with q-series coefficients, plus the
// (weight, index) bookkeeping of Jacobi-like forms.
struct JacobiLikeForm {
    std::vector<QSeries> phi;
    Rational weight;
    Rational index;
    int x_order() const { return static_cast<int>(phi.size()); }
};

// Theta with exponential insertion: phi_m = 2^m/(2m)! * theta_vm(L, v, 2m),
// weight rank/2, index (v,v).
JacobiLikeForm jl_theta(const EvenLattice& L, const std::vector<Rational>& v,
                        int x_order, int q_order);
// exp(sign E_2 X): phi_n = (sign E_2)^n / n!, weight 0, index sign.
JacobiLikeForm jl_e2exp(int sign, int x_order, int q_order);
JacobiLikeForm jl_mul(const JacobiLikeForm& a, const JacobiLikeForm& b);

}  // namespace voatrace
