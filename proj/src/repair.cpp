#include "sqap/repair.hpp"

#include <chrono>
#include <limits>
#include <stdexcept>

namespace sqap {

ViolationMatrix::ViolationMatrix(const Assignment& q) : rows_(q.size(), 0), cols_(q.size(), 0) {
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      rows_[i] += q(i, j);
      cols_[j] += q(i, j);
    }
  }
}

bool ViolationMatrix::all_zero() const {
  // V == 0 forces every r_i + c_j == 2, which for 0/1 matrices means all sums are 1.
  for (int r : rows_)
    if (r != 1) return false;
  for (int c : cols_)
    if (c != 1) return false;
  return true;
}

SquareMatrix<int> ViolationMatrix::dense() const {
  SquareMatrix<int> v(size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) v(i, j) = (*this)(i, j);
  return v;
}

ViolationMatrix violation_matrix(const Assignment& q) { return ViolationMatrix(q); }

RepairResult bfha_repair(const Assignment& q) {
  const std::size_t n = q.size();
  Assignment x = q;
  ViolationMatrix v(x);
  RepairResult result;

  // 1-cells in row-major order; cleared cells are dropped in place.
  std::vector<std::pair<std::size_t, std::size_t>> ones;
  ones.reserve(q.ones());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (x(i, j)) ones.emplace_back(i, j);

  // Clear the 1-cell with the largest V >= 1 until none is left.
  for (;;) {
    int best = 0;
    std::size_t pick = ones.size();
    for (std::size_t k = 0; k < ones.size(); ++k) {
      int value = v(ones[k].first, ones[k].second);
      if (value > best) {
        best = value;
        pick = k;
      }
    }
    if (pick == ones.size()) break;
    auto [i, j] = ones[pick];
    x.set(i, j, false);
    v.apply_flip(i, j, -1);
    ones.erase(ones.begin() + static_cast<std::ptrdiff_t>(pick));
    ++result.flips;
    ++result.clear_flips;
  }

  // Every remaining 1 is now alone in its row and column, so V >= -1 except on
  // (empty row, empty column) cells where it is -2. The lexicographically first
  // such cell pairs the first empty row with the first empty column, and filling
  // it leaves the same structure behind.
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (v.row_sum(i) != 0) continue;
    while (j < n && v.col_sum(j) != 0) ++j;
    if (j == n) break;
    x.set(i, j, true);
    v.apply_flip(i, j, +1);
    ++result.flips;
  }

  result.hamming = hamming(q, x);
  result.repaired = std::move(x);
  return result;
}

std::vector<std::size_t> solve_linear_assignment(const SquareMatrix<long long>& cost) {
  const std::size_t n = cost.size();
  constexpr long long kInf = std::numeric_limits<long long>::max() / 4;
  // 1-based: index 0 is the virtual source row/column.
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), min_slack(n + 1);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      std::size_t r = match[col0], col1 = 0;
      long long delta = kInf;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        long long reduced = cost(r - 1, c - 1) - u[r] - v[c];
        if (reduced < min_slack[c]) {
          min_slack[c] = reduced;
          way[c] = col0;
        }
        if (min_slack[c] < delta) {
          delta = min_slack[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          min_slack[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> site(n);
  for (std::size_t c = 1; c <= n; ++c) site[match[c] - 1] = c - 1;
  return site;
}

RepairResult hungarian_repair(const Assignment& q) {
  const std::size_t n = q.size();
  SquareMatrix<long long> cost(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = 1 - 2 * static_cast<long long>(q(i, j));
  RepairResult result;
  result.repaired = Assignment::from_permutation(solve_linear_assignment(cost));
  result.hamming = hamming(q, result.repaired);
  result.flips = result.hamming;
  return result;
}

std::size_t hamming(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming: assignment sizes differ");
  std::size_t count = 0;
  const auto& x = a.flat();
  const auto& y = b.flat();
  for (std::size_t k = 0; k < x.size(); ++k) count += x[k] != y[k];
  return count;
}

GapReport repair_gap(const std::vector<Assignment>& batch, std::size_t timing_repeats) {
  if (batch.empty()) throw std::invalid_argument("repair_gap: empty batch");
  if (timing_repeats < 1) throw std::invalid_argument("repair_gap: timing_repeats must be >= 1");
  using Clock = std::chrono::steady_clock;
  GapReport report;
  report.size = batch.front().size();
  report.count = batch.size();

  std::size_t bfha_total = 0, min_total = 0;
  Clock::duration bfha_elapsed{}, hungarian_elapsed{};
  for (std::size_t pass = 0; pass < timing_repeats; ++pass) {
    std::size_t bfha_sum = 0, min_sum = 0;
    auto t0 = Clock::now();
    for (const auto& q : batch) bfha_sum += bfha_repair(q).hamming;
    auto t1 = Clock::now();
    for (const auto& q : batch) min_sum += hungarian_repair(q).hamming;
    auto t2 = Clock::now();
    bfha_elapsed += t1 - t0;
    hungarian_elapsed += t2 - t1;
    bfha_total = bfha_sum;
    min_total = min_sum;
  }

  const double passes = static_cast<double>(timing_repeats);
  report.bfha_time_s = std::chrono::duration<double>(bfha_elapsed).count() / passes;
  report.hungarian_time_s = std::chrono::duration<double>(hungarian_elapsed).count() / passes;
  report.mean_bfha_distance = static_cast<double>(bfha_total) / static_cast<double>(batch.size());
  report.mean_min_distance = static_cast<double>(min_total) / static_cast<double>(batch.size());
  report.gap_percent = min_total == 0 ? 0.0
                                      : 100.0 * (report.mean_bfha_distance - report.mean_min_distance) /
                                            report.mean_min_distance;
  return report;
}

void write_gap_csv_header(std::ostream& out) {
  out << "size,mean_bfha_dist,mean_min_dist,gap_percent,bfha_time_s,hungarian_time_s\n";
}

void write_gap_csv_row(const GapReport& r, std::ostream& out) {
  auto old_precision = out.precision(10);
  out << r.size << ',' << r.mean_bfha_distance << ',' << r.mean_min_distance << ','
      << r.gap_percent << ',' << r.bfha_time_s << ',' << r.hungarian_time_s << '\n';
  out.precision(old_precision);
}

}  // namespace sqap
