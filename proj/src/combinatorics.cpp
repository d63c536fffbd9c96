#include "voatrace/combinatorics.hpp"

#include <algorithm>

namespace voatrace {

namespace {

void matchings_rec(std::vector<int>& rest, Involution& partial,
                   std::vector<Involution>& out) {
    if (rest.empty()) {
        out.push_back(partial);
        return;
    }
    int a = rest.front();
    for (std::size_t i = 1; i < rest.size(); ++i) {
        int b = rest[i];
        std::vector<int> next;
        next.reserve(rest.size() - 2);
        for (std::size_t j = 1; j < rest.size(); ++j)
            if (j != i) next.push_back(rest[j]);
        partial.pairs.emplace_back(a, b);
        matchings_rec(next, partial, out);
        partial.pairs.pop_back();
    }
}

void involutions_rec(std::vector<int>& rest, Involution& partial,
                     std::vector<Involution>& out) {
    if (rest.empty()) {
        Involution done = partial;
        std::sort(done.pairs.begin(), done.pairs.end());
        out.push_back(std::move(done));
        return;
    }
    int a = rest.front();
    std::vector<int> tail(rest.begin() + 1, rest.end());
    partial.fixed.push_back(a);
    involutions_rec(tail, partial, out);
    partial.fixed.pop_back();
    for (std::size_t i = 0; i < tail.size(); ++i) {
        std::vector<int> next;
        next.reserve(tail.size() - 1);
        for (std::size_t j = 0; j < tail.size(); ++j)
            if (j != i) next.push_back(tail[j]);
        partial.pairs.emplace_back(a, tail[i]);
        involutions_rec(next, partial, out);
        partial.pairs.pop_back();
    }
}

}  // namespace

std::vector<Involution> perfect_matchings(std::vector<int> A) {
    std::sort(A.begin(), A.end());
    std::vector<Involution> out;
    if (A.size() % 2 != 0) return out;
    Involution partial;
    matchings_rec(A, partial, out);
    return out;
}

std::vector<Involution> all_involutions(std::vector<int> A) {
    std::sort(A.begin(), A.end());
    std::vector<Involution> out;
    Involution partial;
    involutions_rec(A, partial, out);
    return out;
}

std::vector<std::vector<int>> subsets(const std::vector<int>& A) {
    std::vector<std::vector<int>> out;
    const std::size_t n = A.size();
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<int> s;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) s.push_back(A[i]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace voatrace
