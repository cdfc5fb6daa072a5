#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "sqap/instance.hpp"

namespace sqap {

// V(i, j) = r_i + c_j - 2 for row sums r and column sums c of q.
// q is a permutation matrix iff V is identically zero. Only r and c are
// stored, so a flip is O(1) and an entry is O(1).
class ViolationMatrix {
 public:
  explicit ViolationMatrix(const Assignment& q);

  std::size_t size() const { return rows_.size(); }
  int operator()(std::size_t i, std::size_t j) const { return rows_[i] + cols_[j] - 2; }
  int row_sum(std::size_t i) const { return rows_[i]; }
  int col_sum(std::size_t j) const { return cols_[j]; }
  bool all_zero() const;
  SquareMatrix<int> dense() const;

  // q(i, j) changed by delta (+1 or -1).
  void apply_flip(std::size_t i, std::size_t j, int delta) {
    rows_[i] += delta;
    cols_[j] += delta;
  }

  bool operator==(const ViolationMatrix&) const = default;

 private:
  std::vector<int> rows_;
  std::vector<int> cols_;
};

ViolationMatrix violation_matrix(const Assignment& q);

struct RepairResult {
  Assignment repaired;
  std::size_t flips = 0;
  std::size_t hamming = 0;
  // Bit flips made while clearing over-covered cells.
  std::size_t clear_flips = 0;
};

// Bit-flip heuristic. Repeatedly clears the 1-cell with the largest violation
// (while any 1-cell has V >= 1); once none is left, sets the 0-cell with the
// smallest violation (while any 0-cell has V <= -1). Ties go to the
// lexicographically smallest (i, j). Always ends on a permutation matrix.
RepairResult bfha_repair(const Assignment& q);

// Nearest permutation matrix in Hamming distance, via a linear assignment on
// cost(i, j) = 1 - 2 q(i, j).
RepairResult hungarian_repair(const Assignment& q);

// Minimum-cost perfect matching on a square integer cost matrix (shortest
// augmenting paths with potentials, O(n^3)). Returns site of each row.
std::vector<std::size_t> solve_linear_assignment(const SquareMatrix<long long>& cost);

std::size_t hamming(const Assignment& a, const Assignment& b);

struct GapReport {
  std::size_t size = 0;
  std::size_t count = 0;
  double mean_bfha_distance = 0.0;
  double mean_min_distance = 0.0;
  double gap_percent = 0.0;
  double bfha_time_s = 0.0;
  double hungarian_time_s = 0.0;
};

// Runs both repairs on every element. gap_percent is 100 * (mean_bfha - mean_min) / mean_min,
// or 0 when mean_min is 0. Times are single-threaded wall-clock seconds to repair
// the whole batch, averaged over timing_repeats passes.
GapReport repair_gap(const std::vector<Assignment>& batch, std::size_t timing_repeats = 10);

void write_gap_csv_header(std::ostream& out);
void write_gap_csv_row(const GapReport& report, std::ostream& out);

}  // namespace sqap
