#pragma once

#include <string>
#include <vector>

#include "voatrace/qseries.hpp"

namespace voatrace {

struct EvenLattice;

enum class Algebra { M, MPlus, MMinus, VL, VLPlus };

// Accepts "M", "M+", "M-", "VL", "VL+".
Algebra algebra_parse(const std::string& name);
std::string algebra_name(Algebra a);

// Bernoulli number B_k with B_1 = -1/2.
Rational bernoulli(long k);

// Weight-k Eisenstein series in the normalization
//   E_k = -B_k/k! + 2/(k-1)! sum_{n>=1} sigma_{k-1}(n) q^n,
// taken to be identically zero for odd k.  (E_2 is only quasimodular.)
QSeries eisenstein_e(long k, int order);
// Level-2 companion F_k = 2 E_k(2 tau) - E_k(tau).
QSeries eisenstein_f(long k, int order);

enum class EisKind { E, F };
// Renormalized multiple (-1)^{n+1} n C(m+n-1, n) E_{m+n} (resp. F_{m+n});
// symmetric under swapping m and n.  Requires m, n >= 1.
QSeries eisenstein_hat(EisKind kind, long m, long n, int order);

// Dedekind eta q^{1/24} prod (1 - q^n).
QSeries eta_series(int order);

// prod_j eta(scale_j tau)^{power_j}
struct EtaFactor {
    long scale;
    long power;
};
QSeries eta_quotient(const std::vector<EtaFactor>& factors, int order);

// Graded dimension character q^{-c/24} tr q^{L(0)} of the free boson algebra
// of the given rank or of the lattice algebra (pass L for VL / VL+), with the
// plus/minus superscripts denoting the fixed and odd parts under the lift of
// -1.
QSeries character(Algebra a, int rank, const EvenLattice* L, int order);

}  // namespace voatrace
