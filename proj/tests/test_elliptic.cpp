#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "voatrace/elliptic.hpp"
#include "voatrace/modforms.hpp"

using namespace voatrace;
using Cx = std::complex<double>;

namespace {

void check_zl_equal(const ZLaurentSeries& a, const ZLaurentSeries& b) {
    auto c = zl_compare(a, b);
    INFO("first mismatch at z-exponent " << c.first_mismatch_exp);
    CHECK(c.equal);
}

}  // namespace

TEST_CASE("Laurent series container semantics") {
    std::map<int, QSeries> t;
    t.emplace(-1, QSeries::monomial(rat(0), rat(2), 5));
    t.emplace(3, QSeries::monomial(rat(0), rat(1, 3), 5));
    auto a = zl_make(std::move(t), -1, 4);
    CHECK(a.coeff(-1).coeff(0) == rat(2));
    CHECK(a.coeff(0).is_zero());
    CHECK(a.coeff(4).is_zero());
    CHECK_THROWS_AS((void)a.coeff(-2), std::out_of_range);
    CHECK_THROWS_AS((void)a.coeff(5), std::out_of_range);

    auto b = zl_scale(a, rat(3));
    CHECK(b.coeff(3).coeff(0) == rat(1));
    auto z = zl_sub(a, a);
    CHECK(z.terms.empty());
    CHECK(zl_compare(a, b).equal == false);
    CHECK(zl_compare(a, b).first_mismatch_exp == -1);

    auto d = zl_z_derivative(a);
    CHECK(d.min_exp == -2);
    CHECK(d.max_exp == 3);
    CHECK(d.coeff(-2).coeff(0) == rat(-2));
    CHECK(d.coeff(2).coeff(0) == rat(1));

    auto tr = zl_truncate_z(a, 0, 3);
    CHECK(tr.min_exp == 0);
    CHECK(tr.max_exp == 3);
    CHECK_THROWS_AS((void)tr.coeff(-1), std::out_of_range);
}

TEST_CASE("P1 Laurent expansion has Eisenstein coefficients") {
    auto p = p1_series(0, 9, 12);
    CHECK(p.min_exp == -1);
    CHECK(p.max_exp == 9);
    CHECK(p.coeff(-1).coeff(0) == rat(-1));
    CHECK(p.coeff(-1).coeff(5) == rat(0));
    for (int d = 0; d <= 8; d += 2) CHECK(p.coeff(d).is_zero());
    check_zl_equal(zl_truncate_z(p, 1, 1),
                   zl_make({{1, eisenstein_e(2, 12)}}, 1, 1));
    CHECK(qs_compare(p.coeff(3), eisenstein_e(4, 12)).equal);
    CHECK(qs_compare(p.coeff(5), eisenstein_e(6, 12)).equal);
    // leading numeric anchors: z-coefficients at q^0 are -1/12 and 1/720
    CHECK(p.coeff(1).coeff(0) == rat(-1, 12));
    CHECK(p.coeff(3).coeff(0) == rat(1, 720));

    auto p1 = p1_series(1, 8, 12);
    CHECK(p1.coeff(-2).coeff(0) == rat(1));
    CHECK(qs_compare(p1.coeff(0), eisenstein_e(2, 12)).equal);
    CHECK(qs_compare(p1.coeff(2), qs_scale(eisenstein_e(4, 12), rat(3))).equal);

    auto q = q1_series(0, 5, 10);
    CHECK(q.coeff(-1).coeff(0) == rat(-1));
    CHECK(qs_compare(q.coeff(1), eisenstein_f(2, 10)).equal);
}

TEST_CASE("parity: kernels are odd for even m, even for odd m") {
    for (long m = 0; m <= 5; ++m) {
        const ZLaurentSeries kernels[] = {p1_series(m, 10, 8),
                                          q1_series(m, 10, 8)};
        for (const auto& s : kernels) {
            for (const auto& [d, c] : s.terms) {
                INFO("m=" << m << " exponent " << d);
                // an odd function has only odd z-powers and vice versa
                CHECK(((d % 2 + 2) % 2) == (int)((m + 1) % 2));
                CHECK(!c.is_zero());
            }
        }
    }
    // numeric oddness of P1 itself
    Cx z(0.4, 0.3), tau(0.0, 1.3);
    auto a = p1_lambert_eval(z, tau, 0);
    auto b = p1_lambert_eval(-z, tau, 0);
    CHECK(std::abs(a.value + b.value) < 1e-10);
    auto c = q1_lambert_eval(z, tau, 1);
    auto d = q1_lambert_eval(-z, tau, 1);
    CHECK(std::abs(c.value - d.value) < 1e-10);
}

TEST_CASE("z-derivative relates successive kernels exactly") {
    const int zo = 10, qo = 20;
    for (long m = 0; m <= 5; ++m) {
        check_zl_equal(zl_z_derivative(p1_series(m, zo, qo)),
                       p1_series(m + 1, zo - 1, qo));
        check_zl_equal(zl_z_derivative(q1_series(m, zo, qo)),
                       q1_series(m + 1, zo - 1, qo));
    }
}

TEST_CASE("twisted kernel equals 2*P1(z,2tau) - P1(z,tau) exactly") {
    const int zo = 10, qo = 20;
    for (long m = 0; m <= 4; ++m) {
        auto doubled = zl_q_rescale(p1_series(m, zo, qo), 2);
        auto rhs = zl_sub(zl_scale(doubled, rat(2)), p1_series(m, zo, 2 * qo));
        check_zl_equal(q1_series(m, zo, qo), rhs);
    }
}

TEST_CASE("regularized sum matches the Laurent expansion at large Im tau") {
    // At tau = 5i the q-corrections are ~1e-60, so P1 is the bare cotangent-type
    // sum: P1(z) ~ -1/z - z/12 + z^3/720.
    Cx z(0.1, 0.0);
    auto r = p1_lambert_eval(z, Cx(0.0, 5.0), 0);
    Cx want = -1.0 / z - z / 12.0 + z * z * z / 720.0;
    CHECK(std::abs(r.value - want) < 1e-6);
}

TEST_CASE("series evaluation agrees with the closed-form evaluator") {
    const Cx taus[] = {Cx(0.0, 1.1), Cx(0.3, 0.9)};
    const Cx zs[] = {Cx(0.3, 0.2), Cx(-0.7, 0.1), Cx(1.2, -0.4), Cx(2.5, 0.0),
                     Cx(0.05, 0.01)};
    for (long m = 0; m <= 2; ++m) {
        auto ps = p1_series(m, 30, 30);
        auto qs = q1_series(m, 30, 30);
        for (Cx tau : taus) {
            for (Cx z : zs) {
                auto a = zl_eval(ps, z, tau);
                auto b = p1_lambert_eval(z, tau, m);
                INFO("P, m=" << m << " z=(" << z.real() << "," << z.imag()
                             << ")");
                CHECK(std::abs(a.value - b.value) < 1e-8);
                CHECK(a.tail_estimate < 1e-9);
                CHECK(b.tail_estimate < 1e-9);
                auto c = zl_eval(qs, z, tau);
                auto d = q1_lambert_eval(z, tau, m);
                INFO("Q, m=" << m);
                CHECK(std::abs(c.value - d.value) < 1e-8);
            }
        }
    }
}

TEST_CASE("periodicity and ellipticity of the kernels") {
    const Cx tau(0.1, 1.2);
    const Cx two_pi_i(0.0, 2.0 * M_PI);
    const Cx zs[] = {Cx(0.4, 0.3), Cx(-0.8, 0.5)};
    for (long m = 0; m <= 2; ++m) {
        for (Cx z : zs) {
            // both kernels are 2 pi i periodic
            auto p0 = p1_lambert_eval(z, tau, m);
            auto p1 = p1_lambert_eval(z + two_pi_i, tau, m);
            CHECK(std::abs(p0.value - p1.value) < 1e-8);
            auto q0 = q1_lambert_eval(z, tau, m);
            auto q1 = q1_lambert_eval(z + two_pi_i, tau, m);
            CHECK(std::abs(q0.value - q1.value) < 1e-8);
            // the twisted kernel is invariant under z -> z + 4 pi i tau
            auto q2 = q1_lambert_eval(z + 2.0 * two_pi_i * tau, tau, m, 80);
            CHECK(std::abs(q0.value - q2.value) < 1e-8);
        }
    }
}

TEST_CASE("evaluator domain errors") {
    CHECK_THROWS_AS(p1_lambert_eval(Cx(0.0, 0.0), Cx(0.0, 1.0), 0),
                    std::domain_error);
    // z on the lattice point 2 pi i tau
    Cx tau(0.0, 1.0);
    Cx w = 2.0 * M_PI * Cx(-tau.imag(), tau.real());
    CHECK_THROWS_AS(p1_lambert_eval(w, tau, 0), std::domain_error);
    CHECK_THROWS_AS(p1_lambert_eval(Cx(0.4, 0.0), Cx(0.5, 0.0), 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(p1_lambert_eval(Cx(0.4, 0.0), Cx(0.0, 1.0), -1),
                    std::invalid_argument);
    CHECK_THROWS_AS(p1_lambert_eval(Cx(0.4, 0.0), Cx(0.0, 1.0), 0, 0),
                    std::invalid_argument);
}
