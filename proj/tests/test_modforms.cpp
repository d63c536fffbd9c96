#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "voatrace/lattice.hpp"
#include "voatrace/modforms.hpp"

using namespace voatrace;

namespace {

long sigma_oracle(long k, long n) {
    long s = 0;
    for (long d = 1; d <= n; ++d)
        if (n % d == 0) {
            long p = 1;
            for (long i = 0; i < k; ++i) p *= d;
            s += p;
        }
    return s;
}

// Colored partition counts split by parity of the number of parts.
struct ParityCounts {
    std::vector<long> even, odd;
};
ParityCounts colored_partitions(int colors, int W) {
    ParityCounts pc{std::vector<long>(static_cast<size_t>(W) + 1, 0),
                    std::vector<long>(static_cast<size_t>(W) + 1, 0)};
    pc.even[0] = 1;
    for (int n = 1; n <= W; ++n)
        for (int c = 0; c < colors; ++c)
            for (int w = n; w <= W; ++w) {
                // one more part of size n flips the parity
                long e = pc.even[static_cast<size_t>(w - n)], o = pc.odd[static_cast<size_t>(w - n)];
                pc.even[static_cast<size_t>(w)] += o;
                pc.odd[static_cast<size_t>(w)] += e;
            }
    return pc;
}

bool agree(const QSeries& a, const QSeries& b) { return qs_compare(a, b).equal; }

}  // namespace

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == rat(-1, 2));
    CHECK(bernoulli(2) == rat(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == rat(-1, 30));
    CHECK(bernoulli(6) == rat(1, 42));
    CHECK(bernoulli(8) == rat(-1, 30));
    CHECK(bernoulli(10) == rat(5, 66));
    CHECK(bernoulli(12) == rat(-691, 2730));
    CHECK(bernoulli(14) == rat(7, 6));
}

TEST_CASE("eisenstein expansions") {
    QSeries e2 = eisenstein_e(2, 5);
    CHECK(e2.lead_exp() == 0);
    CHECK(e2.coeff(0) == rat(-1, 12));
    CHECK(e2.coeff(1) == 2);
    CHECK(e2.coeff(2) == 6);
    CHECK(e2.coeff(3) == 8);
    CHECK(e2.coeff(4) == 14);

    QSeries e4 = eisenstein_e(4, 4);
    CHECK(e4.coeff(0) == rat(1, 720));
    CHECK(e4.coeff(1) == rat(1, 3));
    CHECK(e4.coeff(2) == 3);
    CHECK(e4.coeff(3) == rat(28, 3));

    CHECK(eisenstein_e(6, 2).coeff(0) == rat(-1, 30240));
    CHECK(eisenstein_e(6, 2).coeff(1) == rat(1, 60));

    CHECK(eisenstein_e(3, 10).is_zero());
    CHECK(eisenstein_e(7, 10).is_zero());
    CHECK(eisenstein_f(5, 10).is_zero());

    // sigma_{k-1}(n) against an independent divisor loop
    QSeries e8 = eisenstein_e(8, 31);
    for (long n = 1; n <= 30; ++n)
        CHECK(e8.coeff(static_cast<int>(n)) == Rational(2 * sigma_oracle(7, n)) / factorial(7));
}

TEST_CASE("level-2 companion F_k") {
    QSeries f2 = eisenstein_f(2, 5);
    CHECK(f2.coeff(0) == rat(-1, 12));
    CHECK(f2.coeff(1) == -2);
    CHECK(f2.coeff(2) == -2);
    CHECK(f2.coeff(3) == -8);
    CHECK(f2.coeff(4) == -2);

    // definition as 2 E_k(2 tau) - E_k(tau)
    QSeries e4 = eisenstein_e(4, 20);
    CHECK(agree(eisenstein_f(4, 10), qs_sub(qs_scale(qs_rescale(e4, 2), 2), e4)));
}

TEST_CASE("renormalized eisenstein multiples") {
    const int O = 12;
    CHECK(agree(eisenstein_hat(EisKind::E, 2, 4, O), qs_scale(eisenstein_e(6, O), -20)));
    CHECK(agree(eisenstein_hat(EisKind::E, 4, 2, O), qs_scale(eisenstein_e(6, O), -20)));
    CHECK(agree(eisenstein_hat(EisKind::E, 1, 5, O), qs_scale(eisenstein_e(6, O), 5)));
    CHECK(agree(eisenstein_hat(EisKind::E, 3, 3, O), qs_scale(eisenstein_e(6, O), 30)));
    CHECK(agree(eisenstein_hat(EisKind::E, 1, 1, O), eisenstein_e(2, O)));
    CHECK(agree(eisenstein_hat(EisKind::F, 1, 1, O), eisenstein_f(2, O)));
    for (long m = 1; m <= 5; ++m)
        for (long n = 1; n <= 5; ++n) {
            CHECK(agree(eisenstein_hat(EisKind::E, m, n, O), eisenstein_hat(EisKind::E, n, m, O)));
            CHECK(agree(eisenstein_hat(EisKind::F, m, n, O), eisenstein_hat(EisKind::F, n, m, O)));
        }
    CHECK_THROWS_AS(eisenstein_hat(EisKind::E, 0, 2, O), std::invalid_argument);
}

TEST_CASE("eta and eta quotients") {
    QSeries eta = eta_series(30);
    CHECK(eta.lead_exp() == rat(1, 24));
    // pentagonal number theorem as the independent expansion
    std::vector<long> penta(30, 0);
    for (long k = -10; k <= 10; ++k) {
        long e = k * (3 * k - 1) / 2;
        if (e >= 0 && e < 30) penta[static_cast<size_t>(e)] += (k % 2 == 0) ? 1 : -1;
    }
    for (int i = 0; i < 29; ++i) CHECK(eta.coeff(i) == penta[static_cast<size_t>(i)]);

    // tau(n) for the 24th power
    QSeries delta = qs_pow(eta, 24);
    CHECK(delta.lead_exp() == 1);
    CHECK(delta.coeff(0) == 1);
    CHECK(delta.coeff(1) == -24);
    CHECK(delta.coeff(2) == 252);
    CHECK(delta.coeff(3) == -1472);
    CHECK(delta.coeff(4) == 4830);

    CHECK(agree(eta_quotient({{2, 1}}, 12), qs_rescale(eta_series(6), 2)));
    QSeries quot = eta_quotient({{1, 2}, {2, -1}}, 15);
    CHECK(quot.lead_exp() == 0);
    CHECK(agree(qs_mul(quot, qs_rescale(eta_series(8), 2)), qs_pow(eta_series(15), 2)));
    CHECK_THROWS_AS(eta_quotient({{0, 1}}, 5), std::invalid_argument);
}

TEST_CASE("heisenberg characters count colored partitions") {
    for (int k = 1; k <= 3; ++k) {
        auto pc = colored_partitions(k, 25);
        QSeries zm = character(Algebra::M, k, nullptr, 26);
        QSeries zp = character(Algebra::MPlus, k, nullptr, 26);
        QSeries zm_minus = character(Algebra::MMinus, k, nullptr, 26);
        CHECK(zm.lead_exp() == rat(-k, 24));
        for (int w = 0; w <= 25; ++w) {
            Rational e = rat(24 * w - k, 24);
            long even = pc.even[static_cast<size_t>(w)], odd = pc.odd[static_cast<size_t>(w)];
            CHECK(zm.coeff_at(e) == even + odd);
            CHECK(zp.coeff_at(e) == even);
            CHECK(zm_minus.coeff_at(e) == odd);
        }
    }
}

TEST_CASE("lattice characters count states") {
    EvenLattice a1 = lattice_make({{2}});
    EvenLattice a2 = lattice_make({{2, 1}, {1, 2}});
    for (const EvenLattice* Lp : {&a1, &a2}) {
        const EvenLattice& L = *Lp;
        int k = L.rank;
        auto pc = colored_partitions(k, 20);
        auto vecs = enumerate_vectors(L, 2 * 20);
        QSeries zvl = character(Algebra::VL, 0, &L, 21);
        QSeries zvlp = character(Algebra::VLPlus, 0, &L, 21);
        for (int w = 0; w <= 20; ++w) {
            Rational e = rat(24 * w - k, 24);
            long dim = 0, dim_plus = 0;
            for (const auto& al : vecs) {
                long h = vec_norm(L, al) / 2;
                if (h > w) continue;
                size_t rem = static_cast<size_t>(w - h);
                long all = pc.even[rem] + pc.odd[rem];
                dim += all;
                bool positive = false, zero = true;
                for (long c : al) {
                    if (c != 0) { zero = false; positive = c > 0; break; }
                }
                if (zero) dim_plus += pc.even[rem];  // t-fixed part of the charge-0 sector
                else if (positive) dim_plus += all;  // one symmetrized state per pair
            }
            CHECK(zvl.coeff_at(e) == dim);
            CHECK(zvlp.coeff_at(e) == dim_plus);
        }
    }
}

TEST_CASE("eta evaluates to the classical value at tau = i") {
    auto r = qs_eval(eta_series(60), {0.0, 1.0});
    double expected = std::tgamma(0.25) / (2.0 * std::pow(M_PI, 0.75));
    CHECK(std::abs(r.value.real() - expected) < 1e-12);
    CHECK(std::abs(r.value.imag()) < 1e-12);
}

TEST_CASE("algebra names") {
    CHECK(algebra_parse("M+") == Algebra::MPlus);
    CHECK(algebra_parse("VL+") == Algebra::VLPlus);
    CHECK(algebra_name(Algebra::MMinus) == "M-");
    CHECK_THROWS_AS(algebra_parse("W"), std::invalid_argument);
}
