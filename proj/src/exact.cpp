#include "sqap/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "sqap/errors.hpp"

namespace sqap {

namespace {

void check_limit(std::size_t n, std::size_t limit_n, const char* what) {
  if (n > limit_n) {
    throw SizeLimitError(std::string(what) + ": n = " + std::to_string(n) +
                         " exceeds enumeration limit " + std::to_string(limit_n));
  }
}

struct OptSearch {
  const QapInstance& inst;
  std::vector<std::size_t> site_of;
  std::vector<char> taken;
  std::vector<std::size_t> best_perm;
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t leaves = 0;

  void place(std::size_t item, double partial) {
    const std::size_t n = inst.n;
    if (item == n) {
      ++leaves;
      if (partial < best) {
        best = partial;
        best_perm = site_of;
      }
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      // New item against every already placed one, both orderings of the pair.
      double delta = -inst.s(item, j);
      double pair = 0.0;
      for (std::size_t k = 0; k < item; ++k)
        if (inst.d(j, site_of[k])) pair += inst.f(item, k);
      delta += 2.0 * inst.w * pair;
      taken[j] = 1;
      site_of[item] = j;
      place(item + 1, partial + delta);
      taken[j] = 0;
    }
  }
};

}  // namespace

ExactResult brute_force_opt(const QapInstance& inst, std::size_t limit_n) {
  check_limit(inst.n, limit_n, "brute_force_opt");
  if (inst.n == 0) throw std::invalid_argument("brute_force_opt: empty instance");
  OptSearch search{inst, std::vector<std::size_t>(inst.n), std::vector<char>(inst.n, 0), {}};
  search.place(0, 0.0);
  ExactResult result;
  result.best = Assignment::from_permutation(search.best_perm);
  // Re-evaluate once so the reported score does not depend on summation order.
  result.score = objective(inst, result.best);
  result.enumerated = search.leaves;
  return result;
}

std::size_t brute_force_min_hamming(const Assignment& q, std::size_t limit_n) {
  const std::size_t n = q.size();
  check_limit(n, limit_n, "brute_force_min_hamming");
  const std::size_t ones = q.ones();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  do {
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += q(i, perm[i]);
    // Cells set in q but not in P, plus cells set in P but not in q.
    best = std::min(best, (ones - agree) + (n - agree));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace sqap
