#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace sqap {

// Dense row-major n x n matrix.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  const std::vector<T>& flat() const { return data_; }
  std::vector<T>& flat() { return data_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

using RealMatrix = SquareMatrix<double>;

// Item/site placement matrix. q(i, j) == 1 places item i at site j.
// Infeasible (non-permutation) matrices are ordinary values.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::size_t n) : q_(n, 0) {}

  // Takes the flat vector produced by a sampler; variable i*n + j maps to (i, j).
  static Assignment from_flat(std::size_t n, const std::vector<std::uint8_t>& bits);
  static Assignment identity(std::size_t n);
  // perm[i] = site of item i.
  static Assignment from_permutation(const std::vector<std::size_t>& perm);

  std::size_t size() const { return q_.size(); }
  std::uint8_t operator()(std::size_t i, std::size_t j) const { return q_(i, j); }
  void set(std::size_t i, std::size_t j, bool value) { q_(i, j) = value ? 1 : 0; }
  const std::vector<std::uint8_t>& flat() const { return q_.flat(); }

  std::size_t row_sum(std::size_t i) const;
  std::size_t col_sum(std::size_t j) const;
  std::size_t ones() const;

  bool operator==(const Assignment&) const = default;

 private:
  SquareMatrix<std::uint8_t> q_;
};

struct QapInstance {
  std::size_t n = 0;
  RealMatrix s;                  // s(i, j): sales of item i at site j
  RealMatrix f;                  // item similarity, symmetric, zero diagonal
  SquareMatrix<std::uint8_t> d;  // site adjacency, symmetric 0/1, zero diagonal
  double w = 0.5;
  std::int64_t seed = 0;

  // Throws std::invalid_argument when a structural invariant is broken.
  void validate() const;
  bool operator==(const QapInstance&) const = default;
};

enum class Adjacency { linear, ring };

struct GeneratorConfig {
  double sales_low = 0.0;
  double sales_high = 1.0;
  double similarity_low = 0.0;
  double similarity_high = 1.0;
  Adjacency adjacency = Adjacency::linear;
  double w = 0.5;
};

QapInstance generate_instance(std::size_t n, std::int64_t seed,
                              const GeneratorConfig& config = {});

// f0(q) = -sum s_ij q_ij + w sum f_ii' d_jj' q_ij q_i'j'  (minimisation form).
// Defined for infeasible q as well.
double objective(const QapInstance& inst, const Assignment& q);

bool is_feasible(const Assignment& q);

// Number of the 2n one-hot constraints (rows, then columns) whose sum is not 1.
std::size_t count_violations(const Assignment& q);

nlohmann::json to_json(const QapInstance& inst);
QapInstance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Assignment& q);
Assignment assignment_from_json(const nlohmann::json& j);

QapInstance load_instance(const std::string& path);
void save_instance(const QapInstance& inst, const std::string& path);

}  // namespace sqap
