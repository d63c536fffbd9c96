#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "voatrace/combinatorics.hpp"

using namespace voatrace;

namespace {

long double_factorial_odd(int m) {  // (2m-1)!!
    long r = 1;
    for (int i = 1; i <= m; ++i) r *= 2 * i - 1;
    return r;
}

std::vector<int> range_vec(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i + 1;
    return v;
}

// Every element appears exactly once across pairs and fixed points.
void check_partition(const Involution& inv, const std::vector<int>& A) {
    std::multiset<int> seen;
    for (auto [a, b] : inv.pairs) {
        CHECK(a < b);
        seen.insert(a);
        seen.insert(b);
    }
    for (int f : inv.fixed) seen.insert(f);
    std::multiset<int> want(A.begin(), A.end());
    CHECK(seen == want);
    CHECK(std::is_sorted(inv.pairs.begin(), inv.pairs.end()));
    CHECK(std::is_sorted(inv.fixed.begin(), inv.fixed.end()));
}

bool same_involution(const Involution& x, const Involution& y) {
    return x.pairs == y.pairs && x.fixed == y.fixed;
}

}  // namespace

TEST_CASE("perfect matchings: counts and structure") {
    for (int n = 0; n <= 8; n += 2) {
        auto A = range_vec(n);
        auto ms = perfect_matchings(A);
        CHECK(ms.size() == (std::size_t)double_factorial_odd(n / 2));
        for (const auto& m : ms) {
            CHECK(m.fixed.empty());
            check_partition(m, A);
        }
    }
    CHECK(perfect_matchings({1, 2, 3}).empty());
    auto empty = perfect_matchings({});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].pairs.empty());
    CHECK(empty[0].fixed.empty());
}

TEST_CASE("perfect matchings: enumeration order on four points") {
    auto ms = perfect_matchings({1, 2, 3, 4});
    REQUIRE(ms.size() == 3);
    using P = std::vector<std::pair<int, int>>;
    CHECK(ms[0].pairs == P{{1, 2}, {3, 4}});
    CHECK(ms[1].pairs == P{{1, 3}, {2, 4}});
    CHECK(ms[2].pairs == P{{1, 4}, {2, 3}});
}

TEST_CASE("all involutions: telephone numbers and structure") {
    const long telephone[] = {1, 1, 2, 4, 10, 26, 76, 232};
    for (int n = 0; n <= 7; ++n) {
        auto A = range_vec(n);
        auto invs = all_involutions(A);
        CHECK(invs.size() == (std::size_t)telephone[n]);
        for (const auto& inv : invs) check_partition(inv, A);
        // all distinct
        for (std::size_t i = 0; i < invs.size(); ++i)
            for (std::size_t j = i + 1; j < invs.size(); ++j)
                CHECK(!same_involution(invs[i], invs[j]));
    }
}

TEST_CASE("all involutions: order on two points") {
    auto invs = all_involutions({1, 2});
    REQUIRE(invs.size() == 2);
    CHECK(invs[0].pairs.empty());
    CHECK(invs[0].fixed == std::vector<int>{1, 2});
    CHECK(invs[1].pairs == std::vector<std::pair<int, int>>{{1, 2}});
    CHECK(invs[1].fixed.empty());
}

TEST_CASE("input order does not matter") {
    auto a = perfect_matchings({4, 2, 3, 1});
    auto b = perfect_matchings({1, 2, 3, 4});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_involution(a[i], b[i]));
    auto c = all_involutions({3, 1, 2});
    auto d = all_involutions({1, 2, 3});
    REQUIRE(c.size() == d.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(same_involution(c[i], d[i]));
}

TEST_CASE("subsets: bitmask order") {
    auto s = subsets({5, 7});
    REQUIRE(s.size() == 4);
    CHECK(s[0].empty());
    CHECK(s[1] == std::vector<int>{5});
    CHECK(s[2] == std::vector<int>{7});
    CHECK(s[3] == std::vector<int>{5, 7});
    CHECK(subsets({}).size() == 1);
    CHECK(subsets(range_vec(6)).size() == 64);
    // distinctness
    auto t = subsets(range_vec(5));
    std::set<std::vector<int>> uniq(t.begin(), t.end());
    CHECK(uniq.size() == t.size());
}
