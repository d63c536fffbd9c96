#pragma once

#include <utility>
#include <vector>

namespace voatrace {

// An involution of a finite index set: disjoint transpositions plus fixed
// points.  Pairs are stored (small, large) and sorted by first element; the
// enumeration order is deterministic (recursion on the smallest element,
// fixed point before partners in increasing order).
struct Involution {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> fixed;
};

// Fixed-point-free involutions (perfect matchings); empty result for odd |A|,
// and the single empty matching for A = {}.
std::vector<Involution> perfect_matchings(std::vector<int> A);

// All involutions of A, fixed points allowed.
std::vector<Involution> all_involutions(std::vector<int> A);

// All subsets of A in bitmask order (bit i selects A[i]), from {} to A.
std::vector<std::vector<int>> subsets(const std::vector<int>& A);

}  // namespace voatrace
