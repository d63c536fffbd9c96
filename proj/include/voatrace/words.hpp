#pragma once

#include <string>
#include <vector>

#include "voatrace/rational.hpp"

namespace voatrace {

enum class TailKind { Vacuum, F, G, E };

// One square-bracket creation factor h_v[-n] with v in lattice-basis
// coordinates.
struct WordFactor {
    std::vector<Rational> vec;
    long n;
};

// A state h_{v1}[-n1] ... h_{vp}[-np] applied to a tail: the vacuum, the
// symmetrized exponentials f_alpha / g_alpha, or a single exponential e^alpha.
struct BracketWord {
    std::vector<WordFactor> factors;
    TailKind tail = TailKind::Vacuum;
    std::vector<long> alpha;  // empty for Vacuum
};

// Sum of the n_j (tail charge not included).
long word_weight(const BracketWord& w);

// Throws std::invalid_argument for rank mismatches, n < 1, or a zero alpha
// with an f/g tail.
void word_validate(const BracketWord& w, int rank);

// Grammar: factor* tail?
//   factor := h INT [- INT ]  |  h ( rational , ... ) [- INT ]
//   tail   := | (f|g|e) ( int , ... )
// Colors are 1-based and map to unit vectors; explicit vectors and tail
// arguments must have exactly `rank` entries.  Whitespace between tokens is
// ignored.  Throws std::invalid_argument with a character position on bad
// input.
BracketWord parse_state(const std::string& expr, int rank);

// Round-trips through parse_state.
std::string word_to_string(const BracketWord& w);

// Equal for words that differ only by factor order (traces are permutation
// invariant); usable as a memoization key.
std::string word_canonical_key(const BracketWord& w);

}  // namespace voatrace
