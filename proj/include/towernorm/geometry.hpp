#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "towernorm/quotients.hpp"
#include "towernorm/words.hpp"

namespace towernorm {

// Schreier-graph distances from one origin (every letter is one step).
struct DistanceField {
  std::uint32_t origin;
  std::vector<std::int32_t> dist;
};

DistanceField distances(const FiniteQuotient& q, std::uint32_t origin);

// Points within graph distance R of center, ascending.
std::vector<std::uint32_t> ball(const FiniteQuotient& q, std::uint32_t center,
                                int R);

// Injectivity radius: length of the shortest nontrivial word fixing the
// basepoint, found by non-backtracking search over (point, last letter)
// states.  `normal` reports whether the witness fixes every point.
struct AlphaResult {
  int alpha = 0;
  Word witness;
  bool found = false;
  bool normal = false;
};

AlphaResult alpha(const FiniteQuotient& q, int length_cap = 64);

// Checks that w -> w * basepoint is a bijection from the free-group ball of
// radius R onto the quotient ball that preserves all pairwise distances.
struct LiftingReport {
  bool pass = false;
  int radius = 0;
  std::uint64_t ball_words = 0;
  std::string detail;
};

LiftingReport check_isometric_lifting(const FiniteQuotient& q, int R,
                                      std::uint64_t word_cap = 10'000'000);

// Single-linkage parts of A at the given distance threshold: two points
// share a part iff they are joined by a chain of pairwise distances
// < threshold.  Parts are sorted by smallest member.
std::vector<std::vector<std::uint32_t>> cluster_support(
    const FiniteQuotient& q, const std::vector<std::uint32_t>& A,
    int threshold);

}  // namespace towernorm
