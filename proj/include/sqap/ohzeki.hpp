#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"
#include "sqap/instance.hpp"
#include "sqap/sampler.hpp"

namespace sqap {

struct ScheduleConfig {
  double eta0 = 0.1;
  double decay = 0.92;
  // The step size stops shrinking from this iteration on.
  std::size_t clamp_t = 9;
  std::size_t max_iters = 30;

  void validate() const;
};

// Multipliers v_k, one per one-hot constraint (rows, then columns), and the
// iteration t they will be used in.
struct MultiplierState {
  std::vector<double> v;
  std::size_t t = 1;

  static MultiplierState zeros(std::size_t n) { return {std::vector<double>(2 * n, 0.0), 1}; }
};

// eta0 * decay^(min(t, clamp_t) - 1).
double eta(std::size_t t, const ScheduleConfig& sched);

// v_k += eta(t) * (1 - expectations[k]); t += 1.
MultiplierState update_multipliers(const MultiplierState& state,
                                   const std::vector<double>& expectations,
                                   const ScheduleConfig& sched);

struct IterationRecord {
  std::size_t t = 0;
  double eta = 0.0;
  std::vector<double> multipliers;   // used to build this iteration's QUBO
  std::vector<double> expectations;  // from the raw samples
  std::size_t quadratic_terms = 0;
  double iteration_best = 0.0;  // best repaired objective in this batch
  double best_so_far = 0.0;
  std::size_t raw_feasible = 0;
  std::size_t repaired_feasible = 0;
  std::vector<std::size_t> violation_histogram;  // bins 0..2n over raw samples
};

struct OptimizationTrace {
  std::vector<IterationRecord> iterations;
};

nlohmann::json to_json(const IterationRecord& record);
// One JSON object per line.
void write_trace_jsonl(const OptimizationTrace& trace, std::ostream& out);

struct Algorithm2Options {
  ScheduleConfig schedule;
  SamplerConfig sampler;
  // Defaults to all zeros.
  std::optional<std::vector<double>> initial_multipliers;
  // Stop as soon as a solution this good is held.
  std::optional<double> known_optimum;
  // Defaults to the Gibbs backend.
  const Sampler* backend = nullptr;
};

struct Algorithm2Result {
  Assignment best;
  double score = 0.0;
  OptimizationTrace trace;
  MultiplierState final_state;
  double time_s = 0.0;
};

// Relax, sample, repair every sample, keep the best repaired solution, update the
// multipliers from the raw batch, repeat. Iteration t samples with seed
// sampler.seed + (t - 1) * num_reads so chains never share a stream.
Algorithm2Result run_algorithm2(const QapInstance& inst, const Algorithm2Options& options);

struct BaselineResult {
  std::optional<Assignment> best;
  std::optional<double> score;
  std::size_t feasible_samples = 0;
  double time_s = 0.0;  // sampling only
};

// Samples the penalty QUBO once; returns the best feasible sample, if any.
BaselineResult run_qubo_baseline(const QapInstance& inst, double lambda,
                                 const SamplerConfig& sampler_cfg,
                                 const Sampler* backend = nullptr);

std::vector<std::size_t> violation_histogram(const SampleBatch& batch, std::size_t n);

// The relax / sample / update cycle without repair. Round t samples with seed
// sampler.seed + (t - 1) * num_reads, the same streams run_algorithm2 uses.
class MultiplierIteration {
 public:
  MultiplierIteration(const QapInstance& inst, ScheduleConfig schedule, SamplerConfig sampler,
                      const Sampler* backend = nullptr);

  // Samples at the current multipliers, then updates them from the batch.
  SampleBatch step();
  const MultiplierState& state() const { return state_; }

 private:
  const QapInstance& inst_;
  ScheduleConfig schedule_;
  SamplerConfig sampler_;
  const Sampler* backend_;
  MultiplierState state_;
};

// Runs `warmup` rounds, then returns the batch of the next round.
SampleBatch relaxed_round(const QapInstance& inst, const ScheduleConfig& schedule,
                          const SamplerConfig& sampler, std::size_t warmup);

// Runs `warmup` rounds, then gathers the infeasible raw samples of the following
// rounds until `target` are held or `max_rounds` further rounds have run.
std::vector<Assignment> collect_infeasible_samples(const QapInstance& inst,
                                                   const ScheduleConfig& schedule,
                                                   const SamplerConfig& sampler,
                                                   std::size_t warmup, std::size_t target,
                                                   std::size_t max_rounds = 50);

}  // namespace sqap
