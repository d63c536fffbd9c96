#pragma once

#include <map>
#include <string>
#include <vector>

#include "voatrace/lattice.hpp"
#include "voatrace/qseries.hpp"

namespace voatrace {

// One named check inside a report.
struct VerifyCase {
    std::string description;
    bool pass = false;
    std::string detail;  // first mismatching exponent, max deviation, ...
};

struct VerificationReport {
    std::string suite;
    std::vector<VerifyCase> cases;
    std::map<std::string, std::string> parameters;

    bool passed() const;
    int failed_count() const;
};

std::string report_to_json(const VerificationReport& r);
std::string report_to_text(const VerificationReport& r);

// Exact comparison over the shared coefficient range.  Throws
// std::invalid_argument("no comparable range") when the known ranges do not
// overlap at all.
SeriesComparison compare_series(const QSeries& a, const QSeries& b);

struct SuiteParams {
    int rank = 1;                    // free-boson suites; ignored with a lattice
    const EvenLattice* lattice = nullptr;
    int max_weight = 6;
    int order = 20;
    std::vector<long> alpha;         // lattice-plus-tail charge; empty = 2 e_1
    double tol = 1e-8;               // numeric suites (elliptic, modularity)
};

// Equivalence suites (heisenberg, heisenberg-plus, lattice-full,
// lattice-plus-M, lattice-plus-tail) enumerate every admissible creation word
// up to the weight bound (all colors, all exponent multisets, tails as the
// suite dictates) and check that the closed form, the recursion engine and the
// Fock-space oracle agree exactly.  Oversized requests are clamped and the
// report carries parameters["incomplete"] = "true".
//
// Three further named suites reuse the same entry point:
//   elliptic    exact Laurent-level identities for the genus-one kernels plus
//               numeric Lambert/Laurent agreement and ellipticity checks;
//   jacobi      jacobi_like_coefficient_identity over the suite lattice;
//   modularity  the canned modularity_battery over the suite lattice.
VerificationReport run_suite(const std::string& suite, const SuiteParams& params);

// Exact and numeric checks on the kernels P1^(m), Q1^(m): parity of the
// z-expansion, the z-derivative ladder, the twist identity
// Q1 = 2 P1(z, 2 tau) - P1(z, tau), Lambert/Laurent agreement at strip
// points, oddness of P1, and ellipticity of Q1 under z -> z + 4 pi i tau.
VerificationReport elliptic_kernel_checks(int z_order, int q_order, double tol);

// Canned numeric-modularity battery: E4, E6 at level 1; F2, F4, F6 at level 2;
// the raw second Eisenstein series as an expected failure and its completed
// form as a pass; the weight -1/2 eta quotient; and g_series for every vacuum
// word over L of total weight <= 4 at the lattice level.
VerificationReport modularity_battery(const EvenLattice& L, int samples,
                                      double tol, int q_order);

// Coefficient identities behind the modularity of g_series: the X^l
// coefficient of the Jacobi-like product Theta_L(tau,v,X) exp(E2 X) F(tau,X)
// against the explicit double sum, for several control sequences f_m of
// level-one forms; and the reorganization of eta^k g_series for words
// h_v[-1]^{2l'} (times factors with exponent >= 2) into theta / E2-power /
// restricted-matching layers with their factorial constants.
VerificationReport jacobi_like_coefficient_identity(const EvenLattice& L,
                                                    const std::vector<Rational>& v,
                                                    int ell_max, int q_order);

// Numeric check that |f(gamma tau)| = |c tau + d|^K |f(tau)| over Gamma_0(level)
// matrices at deterministic sample points (weight K may be fractional).
// companion, when given, is the series g of the depth-one quasimodular
// completion f(tau) + g(tau) / (4 pi Im tau), evaluated on both sides; pass
// null for honest modular forms.
VerificationReport numeric_modularity_check(const QSeries& f, const Rational& weight,
                                            long level, int samples, double tol,
                                            const QSeries* companion = nullptr);

}  // namespace voatrace
