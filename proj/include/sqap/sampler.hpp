#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "sqap/qubo.hpp"

namespace sqap {

struct SamplerConfig {
  std::size_t num_reads = 1000;
  std::size_t sweeps = 100;
  double beta_initial = 0.1;
  // Inverse temperature of the final sweep.
  double beta_final = 3.0;
  std::int64_t seed = 0;

  void validate() const;
};

struct SampleBatch {
  std::vector<std::vector<std::uint8_t>> samples;
  std::vector<double> energies;
  SamplerConfig config;
  std::uint64_t qubo_fingerprint = 0;

  std::size_t size() const { return samples.size(); }
};

// Anything that returns approximately Boltzmann-distributed QUBO samples.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::string name() const = 0;
  virtual SampleBatch sample(const Qubo& qubo, const SamplerConfig& config) const = 0;
};

// Independent single-site Gibbs chains, one per read. Chain r starts from a
// uniform random state seeded with config.seed + r; beta ramps geometrically
// from beta_initial to beta_final across the sweeps.
class GibbsSampler final : public Sampler {
 public:
  std::string name() const override { return "gibbs"; }
  SampleBatch sample(const Qubo& qubo, const SamplerConfig& config) const override;
};

// Throws std::invalid_argument for unknown names. "gibbs" is the only built-in.
std::unique_ptr<Sampler> make_sampler(const std::string& name);

// Convenience wrapper around GibbsSampler.
SampleBatch sample(const Qubo& qubo, const SamplerConfig& config);

// Per-sweep inverse temperatures.
std::vector<double> beta_schedule(const SamplerConfig& config);

// Component k is the batch mean of F_k.
std::vector<double> estimate_constraint_expectations(const SampleBatch& batch,
                                                     const ConstraintSystem& cs);

// One row per sample: energy, then the bits.
void write_batch_csv(const SampleBatch& batch, std::ostream& out);

}  // namespace sqap
