#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "voatrace/words.hpp"

using namespace voatrace;

TEST_CASE("parse: unit-color factors and defaults") {
    auto w = parse_state("h1[-2] h1[-4]", 1);
    REQUIRE(w.factors.size() == 2);
    CHECK(w.factors[0].vec == std::vector<Rational>{rat(1)});
    CHECK(w.factors[0].n == 2);
    CHECK(w.factors[1].n == 4);
    CHECK(w.tail == TailKind::Vacuum);
    CHECK(w.alpha.empty());
    CHECK(word_weight(w) == 6);

    auto e = parse_state("", 2);
    CHECK(e.factors.empty());
    CHECK(e.tail == TailKind::Vacuum);

    auto a = parse_state("h2[-1]", 3);
    CHECK(a.factors[0].vec == std::vector<Rational>{rat(0), rat(1), rat(0)});
}

TEST_CASE("parse: tails") {
    auto w = parse_state("h1[-1] | g(2)", 1);
    REQUIRE(w.factors.size() == 1);
    CHECK(w.factors[0].n == 1);
    CHECK(w.tail == TailKind::G);
    CHECK(w.alpha == std::vector<long>{2});

    auto f = parse_state("| f(-1,2)", 2);
    CHECK(f.factors.empty());
    CHECK(f.tail == TailKind::F);
    CHECK(f.alpha == std::vector<long>{-1, 2});

    auto ez = parse_state("| e(0,0)", 2);  // zero charge allowed for e-tails
    CHECK(ez.tail == TailKind::E);
}

TEST_CASE("parse: explicit rational vectors") {
    auto w = parse_state("h(1/2,-3)[-2]", 2);
    REQUIRE(w.factors.size() == 1);
    CHECK(w.factors[0].vec == std::vector<Rational>{rat(1, 2), rat(-3)});
    CHECK(w.factors[0].n == 2);

    // adjacency without whitespace is fine
    auto v = parse_state("h1[-2]h1[-4]", 1);
    CHECK(v.factors.size() == 2);
}

TEST_CASE("parse: rejection cases") {
    CHECK_THROWS_WITH_AS(parse_state("h1[0]", 1),
                         doctest::Contains("n must be >= 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("h1[2]", 1),
                         doctest::Contains("n must be >= 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("h2[-1]", 1), doctest::Contains("color"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("h(1)[-1]", 2),
                         doctest::Contains("rank"), std::invalid_argument);
    CHECK_THROWS_AS(parse_state("h1[-1] | f(0)", 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_state("| g(0,0)", 2), std::invalid_argument);
    CHECK_THROWS_AS(parse_state("| e(1)", 2), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("x", 1), doctest::Contains("position"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("h1[-1] | q(2)", 1),
                         doctest::Contains("tail kind"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_state("h1[-1] junk", 1),
                         doctest::Contains("position"), std::invalid_argument);
    CHECK_THROWS_AS(parse_state("h1[-1]", 0), std::invalid_argument);
}

TEST_CASE("round trip through word_to_string") {
    const std::pair<const char*, int> cases[] = {
        {"h1[-2] h1[-4]", 1},     {"h(1/2,-3)[-2] h2[-1]", 2},
        {"h1[-1] | g(2)", 1},     {"| f(-1,2)", 2},
        {"", 1},                  {"h2[-3] | e(1,-1)", 2}};
    for (auto [expr, rank] : cases) {
        auto w = parse_state(expr, rank);
        auto w2 = parse_state(word_to_string(w), rank);
        CHECK(word_canonical_key(w) == word_canonical_key(w2));
        CHECK(w.factors.size() == w2.factors.size());
        CHECK(w.tail == w2.tail);
        CHECK(w.alpha == w2.alpha);
    }
}

TEST_CASE("canonical key ignores factor order only") {
    auto a = parse_state("h1[-2] h2[-1]", 2);
    auto b = parse_state("h2[-1] h1[-2]", 2);
    CHECK(word_canonical_key(a) == word_canonical_key(b));
    auto c = parse_state("h1[-1] h2[-2]", 2);
    CHECK(word_canonical_key(a) != word_canonical_key(c));
    auto d = parse_state("h1[-2] h2[-1] | e(0,1)", 2);
    CHECK(word_canonical_key(a) != word_canonical_key(d));
    auto e = parse_state("h1[-2] h2[-1] | f(0,1)", 2);
    CHECK(word_canonical_key(d) != word_canonical_key(e));
}
