#include "sqap/sampler.hpp"

#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "sqap/random.hpp"

namespace sqap {

void SamplerConfig::validate() const {
  if (num_reads < 1) throw std::invalid_argument("num_reads must be >= 1");
  if (sweeps < 1) throw std::invalid_argument("sweeps must be >= 1");
  if (!(beta_initial > 0.0)) throw std::invalid_argument("beta_initial must be positive");
  if (!(beta_final >= beta_initial)) throw std::invalid_argument("beta_final must be >= beta_initial");
}

std::vector<double> beta_schedule(const SamplerConfig& config) {
  config.validate();
  std::vector<double> betas(config.sweeps);
  if (config.sweeps == 1) {
    betas[0] = config.beta_final;
    return betas;
  }
  const double ratio = config.beta_final / config.beta_initial;
  for (std::size_t k = 0; k < config.sweeps; ++k) {
    double frac = static_cast<double>(k) / static_cast<double>(config.sweeps - 1);
    betas[k] = config.beta_initial * std::pow(ratio, frac);
  }
  betas.back() = config.beta_final;
  return betas;
}

namespace {

// Symmetric CSR neighbour lists of the off-diagonal couplings.
struct CouplingLists {
  std::vector<double> linear;
  std::vector<std::size_t> start;
  std::vector<std::size_t> neighbour;
  std::vector<double> weight;
};

CouplingLists build_adjacency(const Qubo& qubo) {
  const std::size_t l = qubo.num_vars();
  CouplingLists adj;
  adj.linear.assign(l, 0.0);
  std::vector<std::size_t> degree(l, 0);
  for (const auto& [key, value] : qubo.coeffs()) {
    if (key.first == key.second) {
      adj.linear[key.first] = value;
    } else {
      ++degree[key.first];
      ++degree[key.second];
    }
  }
  adj.start.assign(l + 1, 0);
  for (std::size_t a = 0; a < l; ++a) adj.start[a + 1] = adj.start[a] + degree[a];
  adj.neighbour.resize(adj.start[l]);
  adj.weight.resize(adj.start[l]);
  std::vector<std::size_t> fill(adj.start.begin(), adj.start.end() - 1);
  for (const auto& [key, value] : qubo.coeffs()) {
    auto [a, b] = key;
    if (a == b) continue;
    adj.neighbour[fill[a]] = b;
    adj.weight[fill[a]++] = value;
    adj.neighbour[fill[b]] = a;
    adj.weight[fill[b]++] = value;
  }
  return adj;
}

}  // namespace

SampleBatch GibbsSampler::sample(const Qubo& qubo, const SamplerConfig& config) const {
  config.validate();
  if (qubo.num_vars() < 1) throw std::invalid_argument("cannot sample an empty QUBO");
  const std::size_t l = qubo.num_vars();
  const CouplingLists adj = build_adjacency(qubo);
  const std::vector<double> betas = beta_schedule(config);

  SampleBatch batch;
  batch.config = config;
  batch.qubo_fingerprint = qubo.fingerprint();
  batch.samples.reserve(config.num_reads);
  batch.energies.reserve(config.num_reads);

  std::vector<std::uint8_t> state(l);
  for (std::size_t read = 0; read < config.num_reads; ++read) {
    Rng rng = make_rng(config.seed + static_cast<std::int64_t>(read));
    for (auto& bit : state) bit = coin(rng) ? 1 : 0;
    for (double beta : betas) {
      for (std::size_t a = 0; a < l; ++a) {
        // Energy change of q_a: 0 -> 1 with the rest fixed.
        double field = adj.linear[a];
        for (std::size_t e = adj.start[a]; e < adj.start[a + 1]; ++e)
          if (state[adj.neighbour[e]]) field += adj.weight[e];
        double p_one = 1.0 / (1.0 + std::exp(beta * field));
        state[a] = uniform01(rng) < p_one ? 1 : 0;
      }
    }
    batch.energies.push_back(energy(qubo, state));
    batch.samples.push_back(state);
  }
  return batch;
}

std::unique_ptr<Sampler> make_sampler(const std::string& name) {
  if (name == "gibbs") return std::make_unique<GibbsSampler>();
  throw std::invalid_argument("unknown sampler backend '" + name + "'");
}

SampleBatch sample(const Qubo& qubo, const SamplerConfig& config) {
  return GibbsSampler{}.sample(qubo, config);
}

std::vector<double> estimate_constraint_expectations(const SampleBatch& batch,
                                                     const ConstraintSystem& cs) {
  if (batch.samples.empty()) throw std::invalid_argument("cannot average an empty batch");
  std::vector<double> sums(cs.num_constraints(), 0.0);
  for (const auto& s : batch.samples) {
    auto values = cs.evaluate(s);
    for (std::size_t k = 0; k < values.size(); ++k) sums[k] += static_cast<double>(values[k]);
  }
  for (auto& x : sums) x /= static_cast<double>(batch.samples.size());
  return sums;
}

void write_batch_csv(const SampleBatch& batch, std::ostream& out) {
  auto old_precision = out.precision(17);
  for (std::size_t r = 0; r < batch.size(); ++r) {
    out << batch.energies[r];
    for (auto bit : batch.samples[r]) out << ',' << static_cast<int>(bit);
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sqap
