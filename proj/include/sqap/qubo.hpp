#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "sqap/instance.hpp"

namespace sqap {

// Upper-triangular QUBO: energy(q) = offset + sum_{a <= b} coeff(a, b) q_a q_b.
// Diagonal keys (a, a) carry the linear terms. Zero coefficients are never stored.
class Qubo {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  Qubo() = default;
  explicit Qubo(std::size_t num_vars, double offset = 0.0)
      : num_vars_(num_vars), offset_(offset) {}

  std::size_t num_vars() const { return num_vars_; }
  double offset() const { return offset_; }
  const std::map<Key, double>& coeffs() const { return coeffs_; }

  // Accumulates into (min(a,b), max(a,b)); drops the entry if the sum becomes exactly zero.
  void add(std::size_t a, std::size_t b, double value);
  void add_offset(double value) { offset_ += value; }
  double coeff(std::size_t a, std::size_t b) const;

  std::size_t num_quadratic() const;
  std::size_t num_linear() const;
  // Key set of the off-diagonal entries.
  std::vector<Key> quadratic_support() const;

  // Stable 64-bit FNV-1a over size, offset and coefficients.
  std::uint64_t fingerprint() const;

  bool operator==(const Qubo&) const = default;

 private:
  std::size_t num_vars_ = 0;
  double offset_ = 0.0;
  std::map<Key, double> coeffs_;
};

// E(s) = offset + sum_{a<b} J_ab s_a s_b + sum_a h_a s_a, s in {-1, +1}.
struct IsingModel {
  std::size_t num_vars = 0;
  std::map<Qubo::Key, double> couplings;
  std::vector<double> biases;
  double offset = 0.0;
};

// The 2n one-hot constraints of the QAP: k < n is row (item) k, k >= n is column (site) k - n.
// Every target is 1.
class ConstraintSystem {
 public:
  explicit ConstraintSystem(std::size_t n) : n_(n) {}

  std::size_t n() const { return n_; }
  std::size_t num_constraints() const { return 2 * n_; }
  // Flat variable indices that constraint k sums over.
  std::vector<std::size_t> members(std::size_t k) const;
  // F_k(q) for every k.
  std::vector<std::size_t> evaluate(std::span<const std::uint8_t> q) const;
  std::vector<std::size_t> evaluate(const Assignment& q) const { return evaluate(q.flat()); }

 private:
  std::size_t n_;
};

inline std::size_t var_index(std::size_t n, std::size_t item, std::size_t site) {
  return item * n + site;
}

double energy(const Qubo& qubo, std::span<const std::uint8_t> q);
inline double energy(const Qubo& qubo, const Assignment& q) { return energy(qubo, q.flat()); }

// QUBO of f0 alone.
Qubo build_objective_qubo(const QapInstance& inst);

// f0(q) + (lambda / 2) * sum_k (F_k(q) - 1)^2.
Qubo build_penalty_qubo(const QapInstance& inst, double lambda);

// f0(q) - sum_k v_k F_k(q). Only diagonal entries depend on v.
Qubo build_relaxed_qubo(const QapInstance& inst, std::span<const double> multipliers);

// 2 * (max|s| + w * max|f| * max row sum of d): bounds what violating a single
// constraint can gain, so the feasible set contains the penalty minimiser.
double default_penalty_lambda(const QapInstance& inst);

IsingModel qubo_to_ising(const Qubo& qubo);
Qubo ising_to_qubo(const IsingModel& ising);
// spins[a] in {-1, +1}.
double ising_energy(const IsingModel& ising, std::span<const int> spins);

// COO text: header "# qubo <num_vars> <offset>", then one "a b value" line per coefficient.
void write_coo(const Qubo& qubo, std::ostream& out);

}  // namespace sqap
