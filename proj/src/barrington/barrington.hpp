#pragma once

#include "machines/branching.hpp"
#include "machines/circuit.hpp"
#include "machines/perm.hpp"

namespace benenson {

// Fixed 5-cycles used by the width-5 compilation. alpha is the commutator of
// beta and gamma under left-to-right composition, itself a 5-cycle with
// alpha(1) != 1 (1-based), which is what lets the accept node differ from the
// start node.
struct CyclePair {
  Perm alpha;
  Perm beta;
  Perm gamma;
};

CyclePair select_cycles();

// Commutator under left-to-right application: a, b, a^-1, b^-1.
Perm commutator(const Perm& a, const Perm& b);

// Lexicographically smallest r with conjugate(from, r) == to. Throws when the
// two permutations are not conjugate.
Perm smallest_conjugator(const Perm& from, const Perm& to);

// Compile a circuit into a width-5 permutation branching program of exactly
// 4^and_or_depth instruction layers (one extra marked layer holds the final
// positions). For every input the program accepts iff the circuit outputs 1.
LayeredBp barrington_compile(const Circuit& c);

// End-to-end permutation the program applies on input x (composition of the
// per-layer edge maps); identity when rejecting, alpha when accepting.
Perm program_permutation(const LayeredBp& bp, const bits& x);

}  // namespace benenson
