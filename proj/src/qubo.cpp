#include "sqap/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <stdexcept>
#include <string>

namespace sqap {

void Qubo::add(std::size_t a, std::size_t b, double value) {
  if (a >= num_vars_ || b >= num_vars_) {
    throw std::out_of_range("QUBO index out of range");
  }
  if (value == 0.0) return;
  Key key = a <= b ? Key{a, b} : Key{b, a};
  auto [it, inserted] = coeffs_.try_emplace(key, value);
  if (!inserted) {
    it->second += value;
    if (it->second == 0.0) coeffs_.erase(it);
  }
}

double Qubo::coeff(std::size_t a, std::size_t b) const {
  Key key = a <= b ? Key{a, b} : Key{b, a};
  auto it = coeffs_.find(key);
  return it == coeffs_.end() ? 0.0 : it->second;
}

std::size_t Qubo::num_quadratic() const {
  return static_cast<std::size_t>(std::count_if(
      coeffs_.begin(), coeffs_.end(), [](const auto& kv) { return kv.first.first != kv.first.second; }));
}

std::size_t Qubo::num_linear() const { return coeffs_.size() - num_quadratic(); }

std::vector<Qubo::Key> Qubo::quadratic_support() const {
  std::vector<Key> keys;
  for (const auto& [key, value] : coeffs_)
    if (key.first != key.second) keys.push_back(key);
  return keys;
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;
constexpr std::uint64_t kFnvPrime = 1099511628211ull;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    h ^= (word >> (8 * byte)) & 0xffu;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t Qubo::fingerprint() const {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, num_vars_);
  fnv_mix(h, std::bit_cast<std::uint64_t>(offset_));
  for (const auto& [key, value] : coeffs_) {
    fnv_mix(h, key.first);
    fnv_mix(h, key.second);
    fnv_mix(h, std::bit_cast<std::uint64_t>(value));
  }
  return h;
}

std::vector<std::size_t> ConstraintSystem::members(std::size_t k) const {
  if (k >= num_constraints()) throw std::out_of_range("constraint index out of range");
  std::vector<std::size_t> vars;
  vars.reserve(n_);
  for (std::size_t t = 0; t < n_; ++t) {
    vars.push_back(k < n_ ? var_index(n_, k, t) : var_index(n_, t, k - n_));
  }
  return vars;
}

std::vector<std::size_t> ConstraintSystem::evaluate(std::span<const std::uint8_t> q) const {
  if (q.size() != n_ * n_) {
    throw std::invalid_argument("constraint evaluation: expected " + std::to_string(n_ * n_) +
                                " variables, got " + std::to_string(q.size()));
  }
  std::vector<std::size_t> values(2 * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (q[var_index(n_, i, j)]) {
        ++values[i];
        ++values[n_ + j];
      }
    }
  }
  return values;
}

double energy(const Qubo& qubo, std::span<const std::uint8_t> q) {
  if (q.size() != qubo.num_vars()) {
    throw std::invalid_argument("energy: QUBO has " + std::to_string(qubo.num_vars()) +
                                " variables, vector has " + std::to_string(q.size()));
  }
  double e = qubo.offset();
  for (const auto& [key, value] : qubo.coeffs())
    if (q[key.first] && q[key.second]) e += value;
  return e;
}

Qubo build_objective_qubo(const QapInstance& inst) {
  const std::size_t n = inst.n;
  Qubo qubo(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) qubo.add(var_index(n, i, j), var_index(n, i, j), -inst.s(i, j));
  // Each unordered pair {(i,j), (k,l)} appears twice in the quadruple sum.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (inst.f(i, k) == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          if (!inst.d(j, l)) continue;
          std::size_t a = var_index(n, i, j);
          std::size_t b = var_index(n, k, l);
          if (a < b) qubo.add(a, b, 2.0 * inst.w * inst.f(i, k));
        }
      }
    }
  }
  return qubo;
}

Qubo build_penalty_qubo(const QapInstance& inst, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("penalty lambda must be positive");
  Qubo qubo = build_objective_qubo(inst);
  ConstraintSystem cs(inst.n);
  // (lambda/2)(F - 1)^2 = (lambda/2)(1 - sum q_a + 2 sum_{a<b} q_a q_b) for binary q.
  for (std::size_t k = 0; k < cs.num_constraints(); ++k) {
    auto vars = cs.members(k);
    qubo.add_offset(0.5 * lambda);
    for (std::size_t x = 0; x < vars.size(); ++x) {
      qubo.add(vars[x], vars[x], -0.5 * lambda);
      for (std::size_t y = x + 1; y < vars.size(); ++y) qubo.add(vars[x], vars[y], lambda);
    }
  }
  return qubo;
}

Qubo build_relaxed_qubo(const QapInstance& inst, std::span<const double> multipliers) {
  ConstraintSystem cs(inst.n);
  if (multipliers.size() != cs.num_constraints()) {
    throw std::invalid_argument("relaxed QUBO needs " + std::to_string(cs.num_constraints()) +
                                " multipliers, got " + std::to_string(multipliers.size()));
  }
  Qubo qubo = build_objective_qubo(inst);
  const std::size_t n = inst.n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t a = var_index(n, i, j);
      qubo.add(a, a, -(multipliers[i] + multipliers[n + j]));
    }
  }
  return qubo;
}

double default_penalty_lambda(const QapInstance& inst) {
  double max_s = 0.0, max_f = 0.0;
  std::size_t max_degree = 0;
  for (std::size_t i = 0; i < inst.n; ++i) {
    std::size_t degree = 0;
    for (std::size_t j = 0; j < inst.n; ++j) {
      max_s = std::max(max_s, std::abs(inst.s(i, j)));
      max_f = std::max(max_f, std::abs(inst.f(i, j)));
      degree += inst.d(i, j);
    }
    max_degree = std::max(max_degree, degree);
  }
  double lambda = 2.0 * (max_s + inst.w * max_f * static_cast<double>(max_degree));
  // A zero instance still needs a positive penalty.
  return lambda > 0.0 ? lambda : 1.0;
}

IsingModel qubo_to_ising(const Qubo& qubo) {
  // q = (s + 1) / 2.
  IsingModel ising;
  ising.num_vars = qubo.num_vars();
  ising.biases.assign(qubo.num_vars(), 0.0);
  ising.offset = qubo.offset();
  for (const auto& [key, value] : qubo.coeffs()) {
    auto [a, b] = key;
    if (a == b) {
      ising.biases[a] += 0.5 * value;
      ising.offset += 0.5 * value;
    } else {
      ising.couplings[key] += 0.25 * value;
      ising.biases[a] += 0.25 * value;
      ising.biases[b] += 0.25 * value;
      ising.offset += 0.25 * value;
    }
  }
  std::erase_if(ising.couplings, [](const auto& kv) { return kv.second == 0.0; });
  return ising;
}

Qubo ising_to_qubo(const IsingModel& ising) {
  // s = 2q - 1.
  if (ising.biases.size() != ising.num_vars) {
    throw std::invalid_argument("Ising bias vector length does not match num_vars");
  }
  Qubo qubo(ising.num_vars, ising.offset);
  for (const auto& [key, value] : ising.couplings) {
    auto [a, b] = key;
    if (a == b) throw std::invalid_argument("Ising coupling on the diagonal");
    qubo.add(a, b, 4.0 * value);
    qubo.add(a, a, -2.0 * value);
    qubo.add(b, b, -2.0 * value);
    qubo.add_offset(value);
  }
  for (std::size_t a = 0; a < ising.num_vars; ++a) {
    qubo.add(a, a, 2.0 * ising.biases[a]);
    qubo.add_offset(-ising.biases[a]);
  }
  return qubo;
}

double ising_energy(const IsingModel& ising, std::span<const int> spins) {
  if (spins.size() != ising.num_vars) throw std::invalid_argument("spin vector length mismatch");
  double e = ising.offset;
  for (const auto& [key, value] : ising.couplings) e += value * spins[key.first] * spins[key.second];
  for (std::size_t a = 0; a < ising.num_vars; ++a) e += ising.biases[a] * spins[a];
  return e;
}

void write_coo(const Qubo& qubo, std::ostream& out) {
  auto old_precision = out.precision(17);
  out << "# qubo " << qubo.num_vars() << ' ' << qubo.offset() << '\n';
  for (const auto& [key, value] : qubo.coeffs()) out << key.first << ' ' << key.second << ' ' << value << '\n';
  out.precision(old_precision);
}

}  // namespace sqap
