#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "voatrace/fock.hpp"
#include "voatrace/trace.hpp"

using namespace voatrace;

namespace {

const EvenLattice& gram2() {
    static EvenLattice L = lattice_make({{2}});
    return L;
}

const EvenLattice& a1a1() {
    static EvenLattice L = lattice_make({{2, 0}, {0, 2}});
    return L;
}

void check_equal_series(const QSeries& a, const QSeries& b, int min_shared) {
    auto cmp = qs_compare(a, b);
    CHECK(cmp.comparable);
    CHECK(cmp.equal);
    if (!(a.is_zero() && b.is_zero())) CHECK(cmp.shared_order >= min_shared);
}

bool is_zero_series(const QSeries& a) {
    auto cmp = qs_compare(a, QSeries::zero());
    return cmp.equal;
}

std::vector<Rational> rv(std::initializer_list<long> xs) {
    std::vector<Rational> out;
    for (long x : xs) out.push_back(rat(x));
    return out;
}

}  // namespace

TEST_CASE("pairing under identity and Gram matrices") {
    CHECK(pairing(rv({1, 0}), rv({1, 0}), nullptr) == rat(1));
    CHECK(pairing(rv({1, 0}), rv({0, 1}), nullptr) == rat(0));
    CHECK(pairing(rv({1}), rv({2}), &gram2()) == rat(4));
    CHECK(pairing(rv({2}), rv({1}), &gram2()) == rat(4));
    std::vector<Rational> v = rv({1, 2});
    std::vector<Rational> w = rv({3, -1});
    CHECK(pairing(v, w, nullptr) == pairing(w, v, nullptr));
    CHECK_THROWS_AS(pairing(rv({1}), rv({1, 0}), nullptr),
                    std::invalid_argument);
}

TEST_CASE("free-boson closed forms hit the worked values") {
    int O = 20;
    BracketWord empty;
    check_equal_series(trace_M(empty, 1, O), character(Algebra::M, 1, nullptr, O),
                       O);
    QSeries etainv = eta_quotient({{1, -1}}, O);
    check_equal_series(trace_M(parse_state("h1[-1]h1[-1]", 1), 1, O),
                       qs_mul(eisenstein_e(2, O), etainv), O);
    CHECK(trace_M(parse_state("h1[-1]h1[-2]", 1), 1, O).is_zero());
    CHECK(trace_M(parse_state("h1[-1]", 1), 1, O).is_zero());
    // hatted series enter with their binomial multiples
    check_equal_series(trace_M(parse_state("h1[-2]h1[-2]", 1), 1, O),
                       qs_mul(qs_scale(eisenstein_e(4, O), rat(-6)), etainv), O);
    check_equal_series(trace_M(parse_state("h1[-1]h1[-3]", 1), 1, O),
                       qs_mul(qs_scale(eisenstein_e(4, O), rat(3)), etainv), O);
    CHECK_THROWS_AS(trace_M(parse_state("|e(1)", 1), 1, O),
                    std::invalid_argument);

    check_equal_series(trace_Mplus(empty, 1, O),
                       character(Algebra::MPlus, 1, nullptr, O), O);
    QSeries expect = qs_add(
        qs_mul(eisenstein_f(2, O), character(Algebra::MPlus, 1, nullptr, O)),
        qs_scale(qs_mul(qs_sub(eisenstein_e(2, O), eisenstein_f(2, O)),
                        character(Algebra::M, 1, nullptr, O)),
                 rat(1, 2)));
    check_equal_series(trace_Mplus(parse_state("h1[-1]h1[-1]", 1), 1, O),
                       expect, O);
    CHECK(trace_Mplus(parse_state("h1[-1]h2[-1]", 2), 2, O).is_zero());
    CHECK_THROWS_AS(trace_Mplus(parse_state("h1[-1]", 1), 1, O),
                    std::invalid_argument);
}

TEST_CASE("module and full-lattice closed forms") {
    int O = 15;
    QSeries etainv = eta_quotient({{1, -1}}, O);
    BracketWord empty;
    check_equal_series(trace_module(empty, gram2(), {1}, O),
                       qs_shift(etainv, rat(1)), O);
    // single factor of exponent one picks up the charge pairing
    check_equal_series(trace_module(parse_state("h1[-1]", 1), gram2(), {1}, O),
                       qs_scale(qs_shift(etainv, rat(1)), rat(2)), O);
    CHECK(trace_module(parse_state("h1[-2]", 1), gram2(), {1}, O).is_zero());
    check_equal_series(trace_VL(empty, gram2(), O),
                       character(Algebra::VL, 1, &gram2(), O), O);
    // g_series is the same q-expansion kept under its own name
    BracketWord w = parse_state("h1[-1]h1[-1]", 1);
    check_equal_series(trace_VL(w, gram2(), O), g_series(w, gram2(), O), O);
    CHECK_THROWS_AS(trace_VL(parse_state("|f(2)", 1), gram2(), O),
                    std::invalid_argument);
}

TEST_CASE("symmetrized exponential traces") {
    int O = 12;
    check_equal_series(falpha_trace(gram2(), {0}, O),
                       qs_scale(character(Algebra::VLPlus, 1, &gram2(), O),
                                rat(2)),
                       O);
    check_equal_series(falpha_trace(gram2(), {2}, O),
                       eta_quotient({{2, 15}, {1, -7}}, O), O);
    CHECK(falpha_trace(gram2(), {1}, O).is_zero());
    CHECK(falpha_trace(gram2(), {-1}, O).is_zero());
    check_equal_series(falpha_trace(gram2(), {-2}, O),
                       falpha_trace(gram2(), {2}, O), O);
    CHECK_THROWS_AS(falpha_trace(gram2(), {1, 0}, O), std::invalid_argument);
}

TEST_CASE("plus-algebra charged-tail closed form") {
    int O = 12;
    QSeries base = falpha_trace(gram2(), {2}, O);
    check_equal_series(trace_VLplus_lattice_tail(parse_state("|f(2)", 1),
                                                 gram2(), O),
                       base, O);
    // one fixed point: -(v, alpha) F_n
    check_equal_series(
        trace_VLplus_lattice_tail(parse_state("h1[-2]|g(2)", 1), gram2(), O),
        qs_mul(qs_scale(eisenstein_f(2, O), rat(-4)), base), O);
    // odd level-2 series vanish, killing every fixed point of exponent one
    CHECK(trace_VLplus_lattice_tail(parse_state("h1[-1]|g(2)", 1), gram2(), O)
              .is_zero());
    CHECK(trace_VLplus_lattice_tail(parse_state("|f(1)", 1), gram2(), O)
              .is_zero());
    CHECK_THROWS_AS(
        trace_VLplus_lattice_tail(parse_state("h1[-1]|f(2)", 1), gram2(), O),
        std::invalid_argument);
    CHECK_THROWS_AS(
        trace_VLplus_lattice_tail(parse_state("|g(2)", 1), gram2(), O),
        std::invalid_argument);
}

TEST_CASE("plus-algebra vacuum closed form") {
    int O = 15;
    BracketWord empty;
    check_equal_series(trace_VLplus_M(empty, gram2(), O),
                       character(Algebra::VLPlus, 1, &gram2(), O), O);
    // orthogonal colors admit no matching and no unit-exponent factors
    CHECK(trace_VLplus_M(parse_state("h1[-2]h2[-2]", 2), a1a1(), O).is_zero());
    CHECK_THROWS_AS(trace_VLplus_M(parse_state("h1[-1]", 1), gram2(), O),
                    std::invalid_argument);
    FockContext lat{1, &gram2()};
    BracketWord w = parse_state("h1[-1]h1[-1]", 1);
    check_equal_series(trace_VLplus_M(w, gram2(), O),
                       oracle_trace(Algebra::VLPlus, lat, w, O - 1), O - 1);
}

TEST_CASE("recursion engines reproduce the closed forms") {
    int O = 18;
    BracketWord empty;
    check_equal_series(zhu_recurse_untwisted(Algebra::M, empty, 1, nullptr, O),
                       character(Algebra::M, 1, nullptr, O), O);
    for (const char* s : {"h1[-1]h1[-1]", "h1[-2]h1[-2]", "h1[-1]h1[-1]h1[-2]h1[-2]",
                          "h1[-1]h1[-2]"}) {
        BracketWord w = parse_state(s, 1);
        check_equal_series(zhu_recurse_untwisted(Algebra::M, w, 1, nullptr, O),
                           trace_M(w, 1, O), O);
        if (w.factors.size() % 2 == 0)
            check_equal_series(
                zhu_recurse_twisted(Algebra::MPlus, w, 1, nullptr, O),
                trace_Mplus(w, 1, O), O);
    }
    // single odd factor: no partner to contract, no zero-mode eigenvalue
    CHECK(zhu_recurse_untwisted(Algebra::M, parse_state("h1[-2]", 1), 1,
                                nullptr, O)
              .is_zero());
    // module base case: the charge eigenvalue times the module character
    check_equal_series(
        zhu_recurse_module(parse_state("h1[-1]", 1), gram2(), {1}, O),
        qs_scale(qs_shift(eta_quotient({{1, -1}}, O), rat(1)), rat(2)), O);
    for (const char* s : {"", "h1[-1]h1[-1]", "h1[-1]h1[-2]h1[-1]"}) {
        BracketWord w = parse_state(s, 1);
        check_equal_series(zhu_recurse_untwisted(Algebra::VL, w, 1, &gram2(), O),
                           trace_VL(w, gram2(), O), O);
    }
    int Ol = 12;
    for (const char* s : {"", "h1[-1]h1[-1]", "h1[-2]h1[-2]", "h1[-1]h1[-3]"}) {
        BracketWord w = parse_state(s, 1);
        check_equal_series(
            zhu_recurse_twisted(Algebra::VLPlus, w, 1, &gram2(), Ol),
            trace_VLplus_M(w, gram2(), Ol), Ol);
    }
    for (const char* s : {"|f(2)", "h1[-2]|g(2)", "h1[-1]h1[-1]|f(2)",
                          "h1[-2]h1[-2]|f(2)", "|f(1)", "h1[-1]|g(2)"}) {
        BracketWord w = parse_state(s, 1);
        check_equal_series(
            zhu_recurse_twisted(Algebra::VLPlus, w, 1, &gram2(), Ol),
            trace_VLplus_lattice_tail(w, gram2(), Ol), Ol);
    }
    CHECK_THROWS_AS(zhu_recurse_untwisted(Algebra::MPlus, empty, 1, nullptr, O),
                    std::invalid_argument);
    CHECK_THROWS_AS(zhu_recurse_twisted(Algebra::M, empty, 1, nullptr, O),
                    std::invalid_argument);
}

TEST_CASE("multilinearity and permutation invariance") {
    int O = 12;
    BracketWord w = parse_state("h(2,1)[-1]h(1,-1)[-3]", 2);
    BracketWord scaled = w;
    for (auto& c : scaled.factors[0].vec) c *= rat(5);
    check_equal_series(trace_M(scaled, 2, O),
                       qs_scale(trace_M(w, 2, O), rat(5)), O);
    // additivity in the first slot
    BracketWord wa = w, wb = w, wsum = w;
    wa.factors[0].vec = rv({1, 0});
    wb.factors[0].vec = rv({0, 1});
    wsum.factors[0].vec = rv({1, 1});
    check_equal_series(trace_M(wsum, 2, O),
                       qs_add(trace_M(wa, 2, O), trace_M(wb, 2, O)), O);
    BracketWord perm = parse_state("h(1,-1)[-3]h(2,1)[-1]", 2);
    check_equal_series(trace_M(w, 2, O), trace_M(perm, 2, O), O);
    check_equal_series(trace_Mplus(w, 2, O), trace_Mplus(perm, 2, O), O);
    BracketWord t1 = parse_state("h1[-1]h1[-2]h1[-3]|g(2)", 1);
    BracketWord t2 = parse_state("h1[-3]h1[-1]h1[-2]|g(2)", 1);
    check_equal_series(trace_VLplus_lattice_tail(t1, gram2(), O),
                       trace_VLplus_lattice_tail(t2, gram2(), O), O);
    BracketWord s1 = t1, s2 = t1;
    for (auto& c : s1.factors[1].vec) c *= rat(3);
    check_equal_series(trace_VLplus_lattice_tail(s1, gram2(), O),
                       qs_scale(trace_VLplus_lattice_tail(s2, gram2(), O),
                                rat(3)),
                       O);
}

TEST_CASE("parity split of the free-boson trace") {
    int O = 16;
    FockContext h1{1, nullptr};
    for (const char* s : {"h1[-1]h1[-1]", "h1[-2]h1[-2]",
                          "h1[-1]h1[-1]h1[-2]h1[-2]"}) {
        BracketWord w = parse_state(s, 1);
        QSeries minus = qs_sub(trace_M(w, 1, O), trace_Mplus(w, 1, O));
        check_equal_series(minus, oracle_trace(Algebra::MMinus, h1, w, O - 1),
                           O - 1);
    }
}

TEST_CASE("dispatch routes algebras, methods and exponential tails") {
    int O = 12;
    BracketWord w = parse_state("h1[-1]h1[-1]", 1);
    check_equal_series(
        trace_dispatch(TraceMethod::Closed, Algebra::M, w, 1, nullptr, O),
        trace_M(w, 1, O), O);
    check_equal_series(
        trace_dispatch(TraceMethod::Recursion, Algebra::VLPlus, w, 1, &gram2(),
                       O),
        trace_VLplus_M(w, gram2(), O), O);
    // a single exponential is half of each symmetrized pair; the odd half
    // traces to zero
    BracketWord e2 = parse_state("h1[-2]h1[-2]|e(2)", 1);
    BracketWord f2 = parse_state("h1[-2]h1[-2]|f(2)", 1);
    check_equal_series(
        trace_dispatch(TraceMethod::Closed, Algebra::VLPlus, e2, 1, &gram2(), O),
        qs_scale(trace_VLplus_lattice_tail(f2, gram2(), O), rat(1, 2)), O);
    // a neutral exponential tail is the vacuum
    BracketWord e0 = parse_state("h1[-1]h1[-1]|e(0)", 1);
    check_equal_series(
        trace_dispatch(TraceMethod::Closed, Algebra::VLPlus, e0, 1, &gram2(), O),
        trace_VLplus_M(w, gram2(), O), O);
    CHECK_THROWS_AS(
        trace_dispatch(TraceMethod::Closed, Algebra::VL, w, 1, nullptr, O),
        std::invalid_argument);
}
