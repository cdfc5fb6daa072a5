#pragma once

#include <cstddef>
#include <cstdint>

#include "sqap/instance.hpp"

namespace sqap {

struct ExactResult {
  Assignment best;
  double score = 0.0;
  std::uint64_t enumerated = 0;
};

// Global minimum of the objective over all n! permutation matrices, by
// depth-first enumeration in lexicographic order with incremental cost.
// Ties keep the first permutation found. Throws SizeLimitError if n > limit_n.
ExactResult brute_force_opt(const QapInstance& inst, std::size_t limit_n = 10);

// min over permutations P of hamming(q, P). Throws SizeLimitError if n > limit_n.
std::size_t brute_force_min_hamming(const Assignment& q, std::size_t limit_n = 8);

}  // namespace sqap
